// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "../support/oracles.hpp"

#include <kmob/adversary/generators.hpp>
#include <kmob/core/matching.hpp>
#include <kmob/mobile/mobile.hpp>
#include <kmob/offline/checkers.hpp>
#include <kmob/offline/dp.hpp>
#include <kmob/offline/helper.hpp>
#include <kmob/projection/projection.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace kmob;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
// Criterion 4 tallies every run, so lines are collected and printed in order at the end.
std::map<int, std::string> lines;

void report(int id, bool pass, const std::string& detail) {
    char head[32];
    std::snprintf(head, sizeof head, "criterion %2d: %s  ", id, pass ? "PASS" : "FAIL");
    lines[id] = head + detail;
    if (!pass) ++failures;
}

// Speed audit accumulated over every run the acceptance suite makes.
struct SpeedTally {
    std::size_t runs = 0, steps = 0, violations = 0, mover_violations = 0;
    double worst_excess = -1e300;

    void add(const RunResult& run) {
        const auto a = audit_speed(run);
        ++runs;
        steps += a.steps;
        violations += a.violations;
        mover_violations += a.mover_violations;
        worst_excess = std::max(worst_excess, a.max_displacement - run.params.online_speed());
    }
} speed;

// Projection audit accumulated over every projected run.
struct ProjectionTally {
    std::size_t runs = 0, steps = 0, violations = 0;
    double worst_ratio_to_radius = 0.0;

    void add(const RunResult& run) {
        if (!run.projected) return;
        const auto a = audit_projection(run);
        ++runs;
        steps += a.steps;
        violations += a.violations;
        worst_ratio_to_radius = std::max(worst_ratio_to_radius, a.max_distance / a.radius);
    }
} projection;

RunResult tracked_run(const Trace& trace, const ProblemParams& params, const RunOptions& opts) {
    auto r = run(trace, params, opts);
    speed.add(r);
    projection.add(r);
    return r;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Fast-mode potential on seeded local walks for one algorithm.
struct FastTally {
    std::size_t runs = 0, steps = 0, flagged = 0;
    double min_margin = 1e300;
};

FastTally fast_walks(Algo algo, const std::vector<double>& Ds) {
    FastTally out;
    std::uint64_t seed = 1;
    const std::vector<double> eps{0.1, 0.5};
    // 100 runs: cycle dim x k x eps x D.
    while (out.runs < 100) {
        for (int dim : {1, 2}) {
            for (int k : {1, 2, 3}) {
                for (double e : eps) {
                    for (double D : Ds) {
                        if (out.runs >= 100) break;
                        ProblemParams p;
                        p.k = k;
                        p.ms = 1.0;
                        p.mc = (1.0 - e) * p.ms;
                        p.delta = 0.0;
                        p.D = D;
                        p.dim = dim;
                        const int n = dim == 2 && k == 3 ? 30 : 60;
                        const auto trace = gen_local_walk(n, dim, p.mc, 1.0, seed, {k, 3.0 * p.mc});
                        ++seed;
                        RunOptions opts;
                        opts.algo = algo;
                        const auto r = tracked_run(trace, p, opts);
                        const auto m = check_fast_potential(r);
                        ++out.runs;
                        out.steps += m.checked;
                        out.flagged += m.flagged.size();
                        out.min_margin = std::min(out.min_margin, m.min_margin);
                    }
                }
            }
        }
    }
    return out;
}

void criterion_fast(int id, Algo algo, const std::vector<double>& Ds) {
    const auto t0 = Clock::now();
    const auto f = fast_walks(algo, Ds);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << to_string(algo) << " fast-mode potential: " << f.runs << " walks, " << f.steps << " steps, "
      << f.flagged << " flagged, min margin " << fmt("%.3g", f.min_margin) << ", " << fmt("%.2f", secs) << "s";
    report(id, f.flagged == 0 && f.runs == 100 && secs < 60.0, d.str());
}

void criterion_projection() {
    // 50 seeded slow-mode walks with projection on, half ums (unweighted) and half wms (weighted).
    std::size_t runs = 0, over = 0;
    double worst_cost_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        ProblemParams p;
        p.k = 1 + static_cast<int>(seed % 3);
        p.ms = 1.0;
        p.mc = seed % 2 ? 2.0 : 1.5;
        p.delta = 0.25;
        p.D = seed % 4 < 2 ? 1.0 : 2.0;
        p.dim = 1 + static_cast<int>(seed % 2);
        RunOptions opts;
        opts.algo = seed % 2 ? Algo::Ums : Algo::Wms;
        opts.project = ProjectMode::On;
        if (opts.algo == Algo::Wms) p.D = std::max(p.D, 2.0);
        const auto trace = gen_local_walk(150, p.dim, p.mc, 1.0, 1000 + seed, {p.k, 10.0});
        const auto r = tracked_run(trace, p, opts);
        const auto a = audit_projection(r);
        ++runs;
        worst_cost_ratio = std::max(worst_cost_ratio, a.cost_ratio / p.k);
        if (a.cost_ratio > 10.0 * p.k) ++over;
    }
    std::ostringstream d;
    d << "projection: " << projection.runs << " projected runs, " << projection.steps << " steps, "
      << projection.violations << " outside the outer circle (max d/radius "
      << fmt("%.3f", projection.worst_ratio_to_radius) << "); cost ratio over 50 runs: max ratio/k "
      << fmt("%.3f", worst_cost_ratio) << ", " << over << " above 10k";
    report(3, projection.violations == 0 && over == 0 && runs == 50, d.str());
}

double phase2_cost(const RunResult& r, std::size_t from) {
    double c = 0.0;
    for (std::size_t t = from; t < r.steps.size(); ++t) c += r.steps[t].serving + r.params.D * r.steps[t].movement;
    return c;
}

void criterion_thm3() {
    const auto t0 = Clock::now();
    std::vector<double> ratios;
    bool lower_ok = true;
    std::ostringstream d;
    d << "thm3 k=2:";
    for (int x : {64, 128, 256}) {
        double online = 0.0, cert = 0.0, phase2 = 0.0;
        const auto choices = all_choices(2);
        for (const auto& ch : choices) {
            auto inst = gen_thm3(2, x, 1.0, 1.0, ch);
            inst.params.delta = 0.5;
            const auto r = tracked_run(inst.trace, inst.params, {});
            online += r.ledger.grand_total();
            cert += trajectory_cost(inst.trace, *inst.trace.certificate, 1.0);
            phase2 += phase2_cost(r, inst.phase2_start);
        }
        const double n = static_cast<double>(choices.size());
        ratios.push_back(online / cert);
        const double bound = x * x / 264.0;
        lower_ok = lower_ok && phase2 / n >= bound;
        d << " x=" << x << " ratio " << fmt("%.3f", online / cert) << " phase2 " << fmt("%.1f", phase2 / n)
          << ">=" << fmt("%.1f", bound) << ";";
    }
    const double secs = seconds_since(t0);
    const bool increasing = ratios[0] < ratios[1] && ratios[1] < ratios[2];
    d << " " << fmt("%.2f", secs) << "s";
    report(5, increasing && lower_ok && secs < 60.0, d.str());
}

void criterion_thm4() {
    const auto t0 = Clock::now();
    std::vector<double> ratios;
    std::ostringstream d;
    d << "thm4 k=2 x=128:";
    for (double mc : {2.0, 4.0, 8.0}) {
        double online = 0.0, cert = 0.0;
        for (const auto& ch : all_choices(2)) {
            auto inst = gen_thm4(2, 128, 1.0, mc, 1.0, ch);
            inst.params.delta = 0.5;
            const auto r = tracked_run(inst.trace, inst.params, {});
            online += r.ledger.grand_total();
            cert += trajectory_cost(inst.trace, *inst.trace.certificate, 1.0);
        }
        ratios.push_back(online / cert);
        d << " mc/ms=" << mc << " ratio " << fmt("%.3f", online / cert) << ";";
    }
    const double secs = seconds_since(t0);
    d << " " << fmt("%.2f", secs) << "s";
    report(6, ratios[0] < ratios[1] && ratios[1] < ratios[2] && secs < 60.0, d.str());
}

void criterion_simple() {
    const auto inst = gen_simple_counterexample(400, 20, 1.0);
    const double cert = trajectory_cost(inst.trace, *inst.trace.certificate, inst.params.D);
    RunOptions opts;
    opts.sim = SimTag::Scripted;
    opts.script = inst.guide_script;
    opts.project = ProjectMode::Off;
    opts.algo = Algo::Simple;
    const auto simple = tracked_run(inst.trace, inst.params, opts);
    opts.algo = Algo::Ums;
    const auto ums = tracked_run(inst.trace, inst.params, opts);
    const double s = simple.ledger.grand_total();
    const double u = ums.ledger.grand_total();
    std::ostringstream d;
    d << "simple-cx x=400 y=20: simple " << fmt("%.1f", s) << " (>=7200), certificate " << fmt("%.1f", cert)
      << " (=420), simple ratio " << fmt("%.2f", s / cert) << " (>17), ums ratio " << fmt("%.3f", u / cert)
      << " (<5)";
    report(7, s >= 7200.0 && std::abs(cert - 420.0) < 1e-9 && s / cert > 17.0 && u / cert < 5.0, d.str());
}

void criterion_oracles() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::size_t instances = 0, mismatches = 0;
    for (int k = 1; k <= 6; ++k) {
        for (int rep = 0; rep < 200; ++rep) {
            const int dim = 1 + rep % 3;
            auto pt = [&] {
                std::vector<double> v(dim);
                for (auto& x : v) x = u(rng);
                return Point(v);
            };
            Configuration A, B;
            for (int i = 0; i < k; ++i) {
                A.push_back(pt());
                B.push_back(pt());
            }
            const double got = min_weight_matching(A, B).weight;
            const double want = oracle::brute_matching(A, B);
            ++instances;
            // Exact up to summation order of the same k distances.
            if (std::abs(got - want) > 1e-12 * (1.0 + want)) ++mismatches;
        }
    }

    // DP dominance on tiny line instances at delta = 0.
    std::size_t dp_instances = 0, dominated = 0, checks = 0;
    double worst_gap = 1e300;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int k = 1 + static_cast<int>(seed % 2);
        const int n = 8 + static_cast<int>(seed % 13);
        const double mc = seed % 3 == 0 ? 1.5 : 0.6;
        const auto raw = gen_local_walk(n, 1, mc, 1.0, 500 + seed, {k, 2.0});
        const GridSpec spec{0.0, 21};
        const auto trace = snap_to_grid(raw, dp_grid(raw, spec));
        ProblemParams p;
        p.k = k;
        p.ms = 1.0;
        p.delta = 0.0;
        p.D = seed % 4 == 0 ? 2.0 : 1.0;
        p.mc = 1e-9;
        for (std::size_t t = 1; t < trace.size(); ++t) {
            p.mc = std::max(p.mc, distance(trace.requests[t - 1], trace.requests[t]));
        }
        const auto opt = dp_optimum(trace, p, spec);
        const double floor = opt.cost - discretization_slack(opt.h, trace.size(), p);
        ++dp_instances;
        bool all = true;
        struct Variant {
            Algo algo;
            SimTag sim;
        };
        const std::vector<Variant> variants{{Algo::Ums, SimTag::DcLine}, {Algo::Ums, SimTag::Greedy},
                                            {Algo::Ums, SimTag::Wfa},    {Algo::Wms, SimTag::PmCounter},
                                            {Algo::Simple, SimTag::Greedy}, {Algo::Simple, SimTag::DcLine}};
        for (const auto& v : variants) {
            RunOptions opts;
            opts.algo = v.algo;
            opts.sim = v.sim;
            auto q = p;
            if (v.algo == Algo::Wms) q.D = std::max(q.D, 2.0);
            const auto r = tracked_run(trace, q, opts);
            const double f = q.D == p.D ? floor
                                        : dp_optimum(trace, q, spec).cost - discretization_slack(opt.h, trace.size(), q);
            ++checks;
            worst_gap = std::min(worst_gap, r.ledger.grand_total() - f);
            if (r.ledger.grand_total() < f) all = false;
        }
        if (all) ++dominated;
    }
    std::ostringstream d;
    d << "oracles: matching " << instances << " instances (k<=6), " << mismatches << " mismatches; dp lower bound on "
      << dominated << "/" << dp_instances << " line instances (" << checks << " algorithm runs, min online - floor "
      << fmt("%.3g", worst_gap) << ")";
    report(8, mismatches == 0 && instances == 1200 && dominated == dp_instances && dp_instances == 20, d.str());
}

void criterion_lemma() {
    std::ostringstream d;
    d << "lemma sampler:";
    bool ok = true;
    for (double delta : {0.1, 0.5, 0.9}) {
        const auto r = check_lemma_geo(10000, delta, 99);
        ok = ok && r.violations == 0 && r.samples == 10000;
        d << " delta=" << delta << " " << r.violations << "/" << r.samples << " violations;";
    }
    report(9, ok, d.str());
}

// One hand-built line scenario for the helper audit.
struct HelperCase {
    std::vector<Point> requests;
    std::vector<Configuration> offline;
    std::vector<Configuration> online;
};

HelperCase helper_case(int i, const ProblemParams& p) {
    HelperCase hc;
    const double L = 60.0 + 10.0 * (i % 5);
    // The request shuttles between the two offline servers with dwell periods.
    std::vector<double> path;
    auto dwell = [&](double x, int n) {
        for (int j = 0; j < n; ++j) path.push_back(x);
    };
    auto walk = [&](double from, double to) {
        const double step = p.mc * (i % 3 == 2 ? 0.5 : 1.0);
        const int n = static_cast<int>(std::ceil(std::abs(to - from) / step));
        for (int j = 1; j <= n; ++j) path.push_back(from + (to - from) * j / n);
    };
    dwell(0.0, 4 + i % 4);
    walk(0.0, L);
    dwell(L, 3 + i % 3);
    walk(L, 0.0);
    dwell(0.0, 3);
    if (i % 2 == 0) {
        walk(0.0, L / 2);
        dwell(L / 2, 5);
    }

    // Offline: one server stays at 0; the other sits at L, and in odd cases drifts
    // toward L/2 at speed ms once the request leaves it.
    double o2 = L;
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (i % 2 == 1 && t > path.size() / 2) o2 = std::max(L / 2, o2 - p.ms);
        hc.requests.push_back({path[t]});
        hc.offline.push_back({{0.0}, {o2}});
    }

    if (i < 10) {
        // Online parked far away: the guarded regime.
        const double far = 2000.0 + 400.0 * i;
        hc.online.assign(path.size(), Configuration{{-far}, {far + L}});
    } else {
        // Online servers of an actual run on the same requests, with the offline
        // trajectory as certificate.
        Trace t;
        t.requests = hc.requests;
        t.start = {{0.0}, {L}};
        auto q = p;
        q.mc = 1e-9;
        for (std::size_t s = 1; s < t.requests.size(); ++s) {
            q.mc = std::max(q.mc, distance(t.requests[s - 1], t.requests[s]));
        }
        RunOptions opts;
        opts.algo = i % 2 ? Algo::Ums : Algo::Wms;
        if (opts.algo == Algo::Wms) q.D = 2.0;
        const auto r = tracked_run(t, q, opts);
        hc.online = online_trajectory(r);
    }
    return hc;
}

void criterion_helper() {
    ProblemParams p;
    p.k = 2;
    p.ms = 1.0;
    p.mc = 2.0;
    p.delta = 0.5;
    p.D = 1.0;
    const double sigma = 1e-3;
    std::size_t fired_cases = 0, speed_v = 0, guard_v = 0, dist_v = 0, steps = 0, vacuous = 0;
    for (int i = 0; i < 20; ++i) {
        const auto hc = helper_case(i, p);
        const auto h = simulate_helper(hc.requests, hc.offline, hc.online, p, sigma);
        const auto a = audit_helper(h, hc.requests, hc.offline, hc.online, p, sigma);
        steps += a.steps;
        speed_v += a.speed_violations;
        guard_v += a.guard_speed_violations + a.guard_outer_violations;
        dist_v += a.distance_violations;
        if (a.guard_fired > 0) {
            ++fired_cases;
        } else {
            ++vacuous;
        }
    }
    std::ostringstream d;
    d << "helper (sigma=1e-3): 20 trajectories, " << steps << " steps, speed violations " << speed_v
      << ", guarded violations " << guard_v << ", distance violations " << dist_v << ", guard fired on "
      << fired_cases << " (vacuous on " << vacuous << ")";
    report(10, speed_v == 0 && guard_v == 0 && dist_v == 0 && fired_cases >= 5, d.str());
}

} // namespace

int main() {
    const auto t0 = Clock::now();
    criterion_fast(1, Algo::Ums, {1.0});
    criterion_fast(2, Algo::Wms, {2.0, 4.0});
    criterion_thm3();
    criterion_thm4();
    criterion_simple();
    criterion_oracles();
    criterion_lemma();
    criterion_helper();
    criterion_projection();

    std::ostringstream d;
    d << "speed caps over " << speed.runs << " runs, " << speed.steps << " steps: " << speed.violations
      << " above (1+delta)ms, " << speed.mover_violations << " above the branch cap (max excess "
      << fmt("%.3g", speed.worst_excess) << ")";
    report(4, speed.violations == 0 && speed.mover_violations == 0, d.str());

    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("total %.2fs, %d failing\n", seconds_since(t0), failures);
    return failures == 0 ? 0 : 1;
}
