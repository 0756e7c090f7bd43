#include <kmob/mobile/mobile.hpp>

#include <kmob/core/error.hpp>
#include <kmob/projection/projection.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kmob {

Algo parse_algo(std::string_view s) {
    if (s == "ums") return Algo::Ums;
    if (s == "wms") return Algo::Wms;
    if (s == "simple") return Algo::Simple;
    throw InputError("unknown algorithm '" + std::string(s) + "'");
}

std::string to_string(Algo a) {
    switch (a) {
        case Algo::Ums: return "ums";
        case Algo::Wms: return "wms";
        case Algo::Simple: return "simple";
    }
    return "?";
}

std::string to_string(Mode m) { return m == Mode::Fast ? "fast" : "slow"; }

std::string to_string(Branch b) {
    switch (b) {
        case Branch::Reach: return "reach";
        case Branch::Greedy: return "greedy";
        case Branch::Tentative: return "tentative";
        case Branch::Fallback: return "fallback";
        case Branch::Follow: return "follow";
    }
    return "?";
}

Branch parse_branch(std::string_view s) {
    for (Branch b : {Branch::Reach, Branch::Greedy, Branch::Tentative, Branch::Fallback, Branch::Follow}) {
        if (s == to_string(b)) return b;
    }
    throw InputError("unknown branch '" + std::string(s) + "'");
}

ProjectMode parse_project_mode(std::string_view s) {
    if (s == "auto") return ProjectMode::Auto;
    if (s == "on") return ProjectMode::On;
    if (s == "off") return ProjectMode::Off;
    throw InputError("--project expects auto, on or off");
}

Mode mode_of(const ProblemParams& params) {
    return params.mc < params.online_speed() ? Mode::Fast : Mode::Slow;
}

double derive_epsilon(const ProblemParams& params, Algo algo) {
    if (mode_of(params) == Mode::Slow) return 0.0;
    const double eps = (params.online_speed() - params.mc) / params.ms;
    return std::min(eps, algo == Algo::Wms ? 0.5 : 1.0);
}

MobileState::MobileState(const ProblemParams& p, Algo algorithm, std::unique_ptr<Guide> g, Configuration start)
    : params(p),
      algo(algorithm),
      mode(mode_of(p)),
      epsilon(derive_epsilon(p, algorithm)),
      a(std::move(start)),
      guide(std::move(g)),
      ledger(p.D) {
    if (!guide) throw InputError("mobile state needs a guide");
    if (a.size() != static_cast<std::size_t>(params.k) || guide->positions().size() != a.size()) {
        throw InputError("start configuration must list k positions");
    }
}

namespace {

struct Prepared {
    StepReport report;
    Configuration c;  // followed guide positions after the guide step
};

Prepared begin_step(MobileState& s, const Point& r) {
    Prepared p;
    auto& rep = p.report;
    rep.t = ++s.t;
    rep.request = r;
    rep.guide = s.guide->step(r);
    rep.base_guide = rep.guide;
    if (const auto* proj = dynamic_cast<const ProjectedGuide*>(s.guide.get())) {
        rep.base_guide = proj->last_base_cost();
        rep.c_raw = proj->base().positions();
    } else {
        rep.c_raw = s.guide->positions();
    }
    p.c = s.guide->positions();
    rep.matching = min_weight_matching(s.a, p.c);
    return p;
}

void follow_matching(const Configuration& a, const Configuration& c, const Matching& m, double cap,
                     Configuration& out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = move_toward(a[i], c[m.perm[i]], cap);
}

StepReport finish_step(MobileState& s, Prepared& p, Configuration next) {
    auto& rep = p.report;
    rep.displacement.resize(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
        rep.displacement[i] = distance(s.a[i], next[i]);
        rep.movement += rep.displacement[i];
    }
    rep.serving = nearest_distance(next, rep.request);
    s.a = std::move(next);
    rep.a = s.a;
    rep.c = std::move(p.c);
    s.ledger.record(rep.serving, rep.movement);
    return std::move(rep);
}

} // namespace

StepReport ums_step(MobileState& s, const Point& r) {
    auto p = begin_step(s, r);
    auto& rep = p.report;
    const double full = s.params.online_speed();
    const double eps_pos = 1e-12 * (1.0 + norm(r));

    // Guide servers on r, and the online server matched to each; with several we
    // take the online server closest to r.
    std::size_t j = s.a.size();
    double dj = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.a.size(); ++i) {
        if (distance(p.c[rep.matching.perm[i]], r) <= eps_pos) {
            const double d = distance(s.a[i], r);
            if (d < dj) {
                dj = d;
                j = i;
            }
        }
    }
    if (j == s.a.size()) throw ContractError("ums: guide left no server on the request");

    Configuration next(s.a.size());
    if (dj <= full * (1.0 + 1e-12)) {
        rep.branch = Branch::Reach;
        rep.mover = j;
        rep.mover_cap = full;
        follow_matching(s.a, p.c, rep.matching, full, next);
    } else {
        rep.branch = Branch::Greedy;
        rep.mover = nearest_index(s.a, r);
        rep.mover_cap = (1.0 + s.params.delta / 2.0) * s.params.ms;
        follow_matching(s.a, p.c, rep.matching, full, next);
        next[rep.mover] = move_toward(s.a[rep.mover], r, rep.mover_cap);
    }
    return finish_step(s, p, std::move(next));
}

StepReport wms_step(MobileState& s, const Point& r) {
    auto p = begin_step(s, r);
    auto& rep = p.report;
    const auto& prm = s.params;
    const std::size_t tilde = nearest_index(s.a, r);
    const double d0 = distance(s.a[tilde], r);

    double tilde_cap = 0.0;
    if (s.mode == Mode::Fast) {
        tilde_cap = std::min(prm.mc, (1.0 - s.epsilon) / prm.D * d0);
    } else {
        tilde_cap = std::min((1.0 + prm.delta / 2.0) * prm.ms, (1.0 - prm.delta / 2.0) / prm.D * d0);
    }
    const double others_cap = std::min(prm.online_speed(), d0 / prm.D);

    Configuration next(s.a.size());
    follow_matching(s.a, p.c, rep.matching, others_cap, next);
    next[tilde] = move_toward(s.a[tilde], r, tilde_cap);

    const double d_tilde = distance(next[tilde], r);
    bool overtaken = false;
    for (std::size_t i = 0; i < next.size() && !overtaken; ++i) {
        if (i != tilde && distance(next[i], r) < d_tilde) overtaken = true;
    }
    rep.mover = tilde;
    if (overtaken) {
        rep.branch = Branch::Fallback;
        rep.mover_cap = prm.ms;
        follow_matching(s.a, p.c, rep.matching, prm.ms, next);
    } else {
        rep.branch = Branch::Tentative;
        rep.mover_cap = tilde_cap;
    }
    return finish_step(s, p, std::move(next));
}

StepReport simple_step(MobileState& s, const Point& r) {
    auto p = begin_step(s, r);
    auto& rep = p.report;
    rep.branch = Branch::Follow;
    rep.mover = nearest_index(s.a, r);
    rep.mover_cap = s.params.online_speed();
    Configuration next(s.a.size());
    follow_matching(s.a, p.c, rep.matching, rep.mover_cap, next);
    return finish_step(s, p, std::move(next));
}

StepReport mobile_step(MobileState& state, const Point& r) {
    switch (state.algo) {
        case Algo::Ums: return ums_step(state, r);
        case Algo::Wms: return wms_step(state, r);
        case Algo::Simple: return simple_step(state, r);
    }
    throw InputError("unknown algorithm");
}

SimTag default_sim(const ProblemParams& params, Algo algo, std::size_t n) {
    return algo == Algo::Wms ? SimTag::PmCounter : default_kserver_tag(params, n);
}

RunResult run(const Trace& trace, const ProblemParams& params, const RunOptions& options) {
    params.validate();
    if (trace.requests.empty()) throw InputError("trace has no requests");
    if (trace.start.size() != static_cast<std::size_t>(params.k)) {
        throw InputError("start configuration must list k positions");
    }
    if (const auto v = validate_trace(trace, params)) {
        throw InputError("trace violates its bounds at index " + std::to_string(v->index) + " (measured " +
                         std::to_string(v->measured) + ")");
    }

    RunResult out;
    out.params = params;
    out.algo = options.algo;
    out.mode = mode_of(params);
    out.epsilon = derive_epsilon(params, options.algo);
    out.start = trace.start;
    out.ledger = CostLedger(params.D);
    out.guide_ledger = CostLedger(params.D);
    out.base_guide_ledger = CostLedger(params.D);

    const SimTag tag = options.sim.value_or(default_sim(params, options.algo, trace.size()));
    auto guide = make_guide(tag, trace.start, params, options.script);
    out.projected = options.project == ProjectMode::On ||
                    (options.project == ProjectMode::Auto && out.mode == Mode::Slow);
    if (out.projected) {
        guide = std::make_unique<ProjectedGuide>(std::move(guide), params, options.algo == Algo::Wms);
    }
    out.guide_name = guide->name();

    MobileState state(params, options.algo, std::move(guide), trace.start);
    out.steps.reserve(trace.size());
    for (const auto& r : trace.requests) {
        auto rep = mobile_step(state, r);
        out.guide_ledger.record(rep.guide.serving, rep.guide.movement);
        out.base_guide_ledger.record(rep.base_guide.serving, rep.base_guide.movement);
        out.steps.push_back(std::move(rep));
    }
    out.ledger = state.ledger;
    return out;
}

} // namespace kmob
