#include <kmob/kserver/guide.hpp>

#include <kmob/core/error.hpp>
#include <kmob/kserver/wfa.hpp>

#include <cstdlib>
#include <string>

namespace kmob {

SimTag parse_sim_tag(std::string_view tag) {
    if (tag == "greedy") return SimTag::Greedy;
    if (tag == "dc-line") return SimTag::DcLine;
    if (tag == "wfa") return SimTag::Wfa;
    if (tag == "pm-counter") return SimTag::PmCounter;
    if (tag == "scripted") return SimTag::Scripted;
    throw InputError("unknown simulator tag '" + std::string(tag) + "'");
}

std::string to_string(SimTag tag) {
    switch (tag) {
        case SimTag::Greedy: return "greedy";
        case SimTag::DcLine: return "dc-line";
        case SimTag::Wfa: return "wfa";
        case SimTag::PmCounter: return "pm-counter";
        case SimTag::Scripted: return "scripted";
    }
    return "?";
}

GuideCost greedy_step(Configuration& servers, const Point& r) {
    const std::size_t i = nearest_index(servers, r);
    const double d = distance(servers[i], r);
    servers[i] = r;
    return {0.0, d};
}

GuideCost dc_line_step(Configuration& servers, const Point& r) {
    if (r.dim() != 1) throw UnsupportedError("dc-line needs one-dimensional points");
    const double x = r[0];
    int left = -1;
    int right = -1;
    for (int i = 0; i < static_cast<int>(servers.size()); ++i) {
        if (servers[i].dim() != 1) throw UnsupportedError("dc-line needs one-dimensional points");
        const double p = servers[i][0];
        if (p == x) return {0.0, 0.0};
        // Strict comparisons keep the lowest index among co-located flank servers.
        if (p < x && (left < 0 || p > servers[left][0])) left = i;
        if (p > x && (right < 0 || p < servers[right][0])) right = i;
    }
    if (left < 0 || right < 0) {
        const int i = left < 0 ? right : left;
        const double d = std::abs(servers[i][0] - x);
        servers[i] = r;
        return {0.0, d};
    }
    const double gl = x - servers[left][0];
    const double gr = servers[right][0] - x;
    const double step = std::min(gl, gr);
    // The nearer flank lands exactly on r; assigning r avoids rounding drift.
    servers[left] = gl <= gr ? r : Point{servers[left][0] + step};
    servers[right] = gr <= gl ? r : Point{servers[right][0] - step};
    return {0.0, 2.0 * step};
}

DoubleCoverageGuide::DoubleCoverageGuide(Configuration start) : pos_(std::move(start)) {
    for (const auto& p : pos_) {
        if (p.dim() != 1) throw UnsupportedError("dc-line needs one-dimensional points");
    }
}

PageCounterGuide::PageCounterGuide(Configuration start, double D)
    : pos_(std::move(start)), credit_(pos_.size(), 0.0), D_(D) {
    if (!(D >= 1.0)) throw InputError("pm-counter needs D >= 1");
}

GuideCost PageCounterGuide::step(const Point& r) {
    const std::size_t i = nearest_index(pos_, r);
    const double d = distance(pos_[i], r);
    credit_[i] += d;
    GuideCost cost{d, 0.0};
    if (d > 0.0 && credit_[i] >= 2.0 * D_ * d) {
        pos_[i] = r;
        credit_[i] = 0.0;
        cost.movement = d;
    }
    return cost;
}

ScriptedGuide::ScriptedGuide(Configuration start, std::vector<int> script)
    : pos_(std::move(start)), script_(std::move(script)) {}

GuideCost ScriptedGuide::step(const Point& r) {
    if (t_ >= script_.size()) throw InputError("server script shorter than the trace");
    const int i = script_[t_++];
    if (i < 0 || i >= static_cast<int>(pos_.size())) throw InputError("server script names a bad index");
    const double d = distance(pos_[i], r);
    pos_[i] = r;
    return {0.0, d};
}

std::size_t resource_budget() {
    constexpr std::size_t fallback = 250000;
    const char* env = std::getenv("KMOB_BUDGET");
    if (env == nullptr || *env == '\0') return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) return fallback;
    return static_cast<std::size_t>(v);
}

std::unique_ptr<Guide> make_guide(SimTag tag, const Configuration& start, const ProblemParams& params,
                                  std::vector<int> script) {
    switch (tag) {
        case SimTag::Greedy: return std::make_unique<GreedyGuide>(start);
        case SimTag::DcLine: return std::make_unique<DoubleCoverageGuide>(start);
        case SimTag::Wfa: return std::make_unique<WorkFunctionGuide>(start, resource_budget());
        case SimTag::PmCounter: return std::make_unique<PageCounterGuide>(start, params.D);
        case SimTag::Scripted: return std::make_unique<ScriptedGuide>(start, std::move(script));
    }
    throw InputError("unknown simulator tag");
}

SimTag default_kserver_tag(const ProblemParams& params, std::size_t expected_steps) {
    if (params.dim == 1) return SimTag::DcLine;
    const auto k = static_cast<std::size_t>(params.k);
    if (k <= 4 && WorkFunctionGuide::config_count(k + expected_steps, k) <= resource_budget()) {
        return SimTag::Wfa;
    }
    return SimTag::Greedy;
}

} // namespace kmob
