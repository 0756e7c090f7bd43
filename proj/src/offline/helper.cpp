#include <kmob/offline/helper.hpp>

#include <kmob/core/error.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace kmob {

HelperConstants helper_constants(const ProblemParams& params, double sigma, bool weighted) {
    if (!(params.delta > 0.0)) throw InputError("the helper analysis needs delta > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be positive");
    const double k = params.k;
    const double d = params.delta;
    HelperConstants hc;
    hc.sigma = sigma;
    hc.mc = params.mc;
    hc.inner_factor = d * d / (48960.0 * sigma * k);
    hc.outer_factor = d / 48.0;
    hc.circle_factor = 2.0 * d / 145.0;
    hc.long_cap = (2.0 + 1020.0 * sigma * k / d) * params.mc;
    hc.slow_cap = (1.0 + d / 8.0) * params.ms;
    hc.step3 = 51483.0 * sigma * k * params.mc / (d * d);
    hc.phi_threshold = 107548.0 * sigma * k * params.mc / (d * d) * (weighted ? params.D : 1.0);
    return hc;
}

std::string to_string(TransitionKind kind) { return kind == TransitionKind::Long ? "long" : "short"; }

TransitionKind classify_transition(double inner_t1, std::size_t t1, std::size_t t2, double mc) {
    if (t1 >= t2) throw InputError("transition needs t1 < t2");
    if (!(inner_t1 >= 0.0) || !(mc > 0.0)) throw InputError("transition needs inner >= 0 and mc > 0");
    const double duration = static_cast<double>(t2 - t1);
    return duration > inner_t1 / mc + 2.0 ? TransitionKind::Long : TransitionKind::Short;
}

std::string to_string(HelperRule rule) {
    switch (rule) {
        case HelperRule::Chase: return "chase";
        case HelperRule::SkipAhead: return "skip-ahead";
        case HelperRule::Stay: return "stay";
        case HelperRule::Follow: return "follow";
        case HelperRule::Straight: return "straight";
        case HelperRule::Circle: return "circle";
    }
    return "?";
}

namespace {

double gap_of(const Configuration& offline, const Configuration& online, std::size_t i) {
    return nearest_distance(online, offline[i]);
}

} // namespace

std::vector<HelperFrame> helper_frames(const std::vector<Point>& requests, const std::vector<Configuration>& offline,
                                       const std::vector<Configuration>& online, const HelperConstants& hc) {
    if (offline.size() != requests.size() || online.size() != requests.size()) {
        throw InputError("helper: trajectories must match the request count");
    }
    std::vector<HelperFrame> frames(requests.size());
    for (std::size_t t = 0; t < requests.size(); ++t) {
        auto& f = frames[t];
        f.o_star = nearest_index(offline[t], requests[t]);
        f.g = gap_of(offline[t], online[t], f.o_star);
        f.inner = hc.inner_factor * f.g;
        f.outer = hc.outer_factor * f.g;
        f.anchored = distance(offline[t][f.o_star], requests[t]) <= f.inner;
    }
    return frames;
}

std::vector<HelperDirective> plan_helper(const std::vector<Point>& requests, const std::vector<Configuration>& offline,
                                         const std::vector<Configuration>& online,
                                         const std::vector<HelperFrame>& frames, const HelperConstants& hc) {
    const std::size_t n = requests.size();
    if (frames.size() != n || offline.size() != n || online.size() != n) {
        throw InputError("helper: trajectories must match the request count");
    }
    std::vector<HelperDirective> plan(n);
    std::vector<char> fixed(n, false);

    auto chase = [&](std::size_t t) { plan[t] = {HelperRule::Chase, 0, requests[t], hc.long_cap}; };
    // Chase r through [from, to), arrive at r_to one step early and rest at `to`.
    auto chase_window = [&](std::size_t from, std::size_t to) {
        for (std::size_t t = from; t + 1 < to; ++t) chase(t);
        if (to >= 1 && to - 1 >= from) plan[to - 1] = {HelperRule::SkipAhead, 0, requests[to], hc.long_cap};
        plan[to] = {HelperRule::Stay, 0, {}, 0.0};
        for (std::size_t t = from; t <= to; ++t) fixed[t] = true;
    };

    // Step 3: while d(o*, o*^a) is small, behave as in a long transition until it
    // has recovered to twice the threshold.
    for (std::size_t t = 0; t < n;) {
        if (frames[t].g >= hc.step3) {
            ++t;
            continue;
        }
        std::size_t e = t + 1;
        while (e < n && frames[e].g < 2.0 * hc.step3) ++e;
        if (e == n) {
            for (std::size_t s = t; s < n; ++s) {
                chase(s);
                fixed[s] = true;
            }
        } else {
            chase_window(t, e);
        }
        t = e + 1;
    }

    std::vector<std::size_t> anchored;
    for (std::size_t t = 0; t < n; ++t) {
        if (frames[t].anchored) anchored.push_back(t);
    }

    // Default: follow the server that last held the request; chase before any did.
    std::optional<std::size_t> holder;
    for (std::size_t t = 0; t < n; ++t) {
        if (frames[t].anchored) holder = frames[t].o_star;
        if (fixed[t]) continue;
        if (holder) {
            plan[t] = {HelperRule::Follow, *holder, {}, hc.slow_cap};
        } else {
            chase(t);
        }
    }

    auto follow_range = [&](std::size_t from, std::size_t to, std::size_t server) {
        for (std::size_t t = from; t <= to && t < n; ++t) {
            if (!fixed[t]) plan[t] = {HelperRule::Follow, server, {}, hc.slow_cap};
        }
    };

    std::size_t seq_start = anchored.empty() ? n : anchored.front();
    std::set<std::size_t> far;
    auto note_far = [&](std::size_t from, std::size_t to) {
        for (std::size_t s = from; s <= to; ++s) {
            const auto& o = offline[s];
            const Point& star = o[frames[s].o_star];
            for (std::size_t j = 0; j < o.size(); ++j) {
                if (distance(o[j], star) > frames[s].outer / 3.0) far.insert(j);
            }
        }
    };
    std::size_t scanned = seq_start;
    for (std::size_t p = 0; p + 1 < anchored.size(); ++p) {
        const std::size_t t1 = anchored[p];
        const std::size_t t2 = anchored[p + 1];
        note_far(scanned, t1);
        scanned = t1 + 1;
        const std::size_t passer = frames[t1].o_star;
        const std::size_t receiver = frames[t2].o_star;

        if (classify_transition(frames[t1].inner, t1, t2, hc.mc) == TransitionKind::Long) {
            // Event (a): follow the passing server up to the transition, then chase.
            follow_range(seq_start + 1, t1, passer);
            bool clear = true;
            for (std::size_t t = t1 + 1; t <= t2; ++t) clear = clear && !fixed[t];
            if (clear) chase_window(t1 + 1, t2);
        } else if (receiver != passer && far.count(receiver) != 0) {
            // Event (b): head for the receiver's final position.
            for (std::size_t t = t1 + 1; t <= t2; ++t) {
                if (fixed[t]) continue;
                HelperDirective d;
                d.rule = HelperRule::Straight;
                d.server = passer;
                d.target = offline[t2][receiver];
                d.cap = hc.slow_cap;
                d.radius = hc.circle_factor * gap_of(offline[t], online[t], passer);
                d.window_end = t2;
                plan[t] = d;
            }
        } else {
            continue;
        }
        seq_start = t2;
        scanned = t2;
        far.clear();
    }
    return plan;
}

Point helper_step(const Point& o_hat, const HelperDirective& d, const Point& r, const Configuration& offline,
                  const HelperConstants& hc) {
    Point aim = o_hat;
    switch (d.rule) {
        case HelperRule::Chase: aim = r; break;
        case HelperRule::SkipAhead:
        case HelperRule::Straight: aim = d.target; break;
        case HelperRule::Stay: return o_hat;
        case HelperRule::Follow: aim = offline[d.server]; break;
        case HelperRule::Circle: {
            // Closest point to the target on the circle around o_l, or the target
            // itself when it lies inside.
            const Point& centre = offline[d.server];
            const double dt = distance(centre, d.target);
            aim = dt <= d.radius ? d.target : centre + (d.target - centre) * (d.radius / dt);
            break;
        }
    }
    return move_toward(o_hat, aim, std::min(d.cap, hc.long_cap));
}

HelperTrajectory simulate_helper(const std::vector<Point>& requests, const std::vector<Configuration>& offline,
                                 const std::vector<Configuration>& online, const ProblemParams& params, double sigma) {
    if (requests.empty()) throw InputError("helper: no requests");
    const auto hc = helper_constants(params, sigma);
    HelperTrajectory out;
    out.frames = helper_frames(requests, offline, online, hc);
    out.plan = plan_helper(requests, offline, online, out.frames, hc);
    out.o_hat.reserve(requests.size() + 1);
    out.o_hat.push_back(requests.front());

    const std::size_t n = requests.size();
    for (std::size_t t = 0; t < n; ++t) {
        auto& d = out.plan[t];
        if (d.rule == HelperRule::Straight && (t == 0 || out.plan[t - 1].rule != HelperRule::Straight)) {
            // Dry-run the whole window; hold the circle instead if it would leave outer(o*).
            Point probe = out.o_hat.back();
            bool inside = true;
            for (std::size_t s = t; s <= d.window_end && s < n; ++s) {
                probe = helper_step(probe, out.plan[s], requests[s], offline[s], hc);
                const auto& f = out.frames[s];
                if (distance(probe, offline[s][f.o_star]) > f.outer * (1.0 + kRelTol)) inside = false;
            }
            if (!inside) {
                for (std::size_t s = t; s <= d.window_end && s < n; ++s) out.plan[s].rule = HelperRule::Circle;
            }
        }
        out.o_hat.push_back(helper_step(out.o_hat.back(), d, requests[t], offline[t], hc));
    }
    return out;
}

HelperAudit audit_helper(const HelperTrajectory& helper, const std::vector<Point>& requests,
                         const std::vector<Configuration>& offline, const std::vector<Configuration>& online,
                         const ProblemParams& params, double sigma) {
    const auto hc = helper_constants(params, sigma);
    const std::size_t n = requests.size();
    if (helper.o_hat.size() != n + 1 || helper.frames.size() != n) {
        throw InputError("helper trajectory does not match the trace");
    }
    auto within = [](double value, double limit) { return value <= limit * (1.0 + kRelTol) + 1e-12; };

    HelperAudit audit;
    audit.steps = n;
    for (std::size_t t = 0; t < n; ++t) {
        const auto& f = helper.frames[t];
        const Point& prev = helper.o_hat[t];
        const Point& cur = helper.o_hat[t + 1];
        const double moved = distance(prev, cur);
        audit.max_speed = std::max(audit.max_speed, moved);
        if (!within(moved, hc.long_cap)) ++audit.speed_violations;

        if (f.anchored && f.g >= 2.0 * hc.step3) {
            ++audit.guard_fired;
            if (!within(moved, hc.slow_cap)) ++audit.guard_speed_violations;
            if (!within(distance(cur, offline[t][f.o_star]), f.outer)) ++audit.guard_outer_violations;
        }

        const std::size_t a_hat = nearest_index(online[t], cur);
        const double lhs = distance(online[t][a_hat], cur);
        const double rhs = 2.0 * f.g + nearest_distance(online[t], requests[t]);
        const double margin = rhs - lhs;
        if (t == 0 || margin < audit.worst_distance_margin) audit.worst_distance_margin = margin;
        if (!within(lhs, rhs)) ++audit.distance_violations;
    }
    return audit;
}

} // namespace kmob
