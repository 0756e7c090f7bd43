#include <kmob/offline/dp.hpp>

#include <kmob/core/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kmob {

namespace {

constexpr int kMaxServers = 2;
constexpr std::size_t kMaxSteps = 30;
constexpr int kMaxGrid = 41;

std::size_t nearest_grid(const std::vector<double>& grid, double x) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return 0;
    if (it == grid.end()) return grid.size() - 1;
    const auto hi = static_cast<std::size_t>(it - grid.begin());
    return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

} // namespace

std::vector<double> dp_grid(const Trace& trace, const GridSpec& spec) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto widen = [&](const Point& p) {
        if (p.dim() != 1) throw UnsupportedError("the grid optimum works on the line only");
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    };
    for (const auto& p : trace.requests) widen(p);
    for (const auto& p : trace.start) widen(p);
    if (!(lo <= hi)) throw InputError("empty trace");

    double h = spec.h;
    int count = 0;
    if (spec.h > 0.0 && spec.points <= 0) {
        count = static_cast<int>(std::floor((hi - lo) / h + 1e-9)) + 1;
        if (lo + (count - 1) * h < hi - 1e-9 * (1.0 + std::abs(hi))) ++count;
    } else if (spec.points > 0 && spec.h <= 0.0) {
        count = spec.points;
        h = count > 1 ? (hi - lo) / (count - 1) : 0.0;
        if (count > 1 && h == 0.0) count = 1;
    } else {
        throw InputError("grid needs exactly one of h or a point count");
    }
    if (count > kMaxGrid) throw ResourceError("grid has more than 41 points");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = lo + i * h;
    return grid;
}

Trace snap_to_grid(const Trace& trace, const std::vector<double>& grid) {
    Trace out;
    for (const auto& r : trace.requests) out.requests.push_back(Point{grid[nearest_grid(grid, r[0])]});
    for (const auto& s : trace.start) out.start.push_back(Point{grid[nearest_grid(grid, s[0])]});
    return out;
}

double discretization_slack(double h, std::size_t n, const ProblemParams& params) {
    return h * static_cast<double>(n) * (params.D + 1.0) * params.k;
}

DpResult dp_optimum(const Trace& trace, const ProblemParams& params, const GridSpec& spec) {
    params.validate();
    if (params.dim != 1) throw UnsupportedError("the grid optimum works on the line only");
    if (params.k > kMaxServers) throw ResourceError("the grid optimum supports k <= 2");
    if (trace.size() > kMaxSteps) throw ResourceError("the grid optimum supports at most 30 requests");
    if (trace.start.size() != static_cast<std::size_t>(params.k)) throw InputError("start must list k positions");

    DpResult out;
    out.grid = dp_grid(trace, spec);
    const int G = static_cast<int>(out.grid.size());
    out.h = G > 1 ? out.grid[1] - out.grid[0] : 0.0;
    const int reach = out.h > 0.0 ? static_cast<int>(std::floor(params.ms / out.h + 1e-9)) : 0;
    const int k = params.k;
    const int states = k == 1 ? G : G * G;

    auto unpack = [&](int s, int& i0, int& i1) {
        i0 = s % G;
        i1 = k == 1 ? 0 : s / G;
    };
    auto pos = [&](int i) { return out.grid[i]; };

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> value(states, inf);
    const int s0 = static_cast<int>(nearest_grid(out.grid, trace.start[0][0])) +
                   (k == 1 ? 0 : G * static_cast<int>(nearest_grid(out.grid, trace.start[1][0])));
    value[s0] = 0.0;

    const std::size_t n = trace.size();
    std::vector<std::vector<int>> parent(n, std::vector<int>(states, -1));
    for (std::size_t t = 0; t < n; ++t) {
        const double r = trace.requests[t][0];
        std::vector<double> next(states, inf);
        for (int s = 0; s < states; ++s) {
            if (value[s] == inf) continue;
            int a0 = 0, a1 = 0;
            unpack(s, a0, a1);
            for (int b0 = std::max(0, a0 - reach); b0 <= std::min(G - 1, a0 + reach); ++b0) {
                const int lo1 = k == 1 ? 0 : std::max(0, a1 - reach);
                const int hi1 = k == 1 ? 0 : std::min(G - 1, a1 + reach);
                for (int b1 = lo1; b1 <= hi1; ++b1) {
                    double move = std::abs(pos(b0) - pos(a0));
                    double serve = std::abs(pos(b0) - r);
                    if (k == 2) {
                        move += std::abs(pos(b1) - pos(a1));
                        serve = std::min(serve, std::abs(pos(b1) - r));
                    }
                    const double v = value[s] + params.D * move + serve;
                    const int ns = b0 + (k == 1 ? 0 : G * b1);
                    if (v < next[ns]) {
                        next[ns] = v;
                        parent[t][ns] = s;
                    }
                }
            }
        }
        value = std::move(next);
    }

    int best = 0;
    for (int s = 1; s < states; ++s) {
        if (value[s] < value[best]) best = s;
    }
    out.cost = n == 0 ? 0.0 : value[best];
    out.trajectory.resize(n);
    int s = best;
    for (std::size_t t = n; t-- > 0;) {
        int i0 = 0, i1 = 0;
        unpack(s, i0, i1);
        Configuration c{Point{pos(i0)}};
        if (k == 2) c.push_back(Point{pos(i1)});
        out.trajectory[t] = std::move(c);
        s = parent[t][s];
    }
    return out;
}

} // namespace kmob
