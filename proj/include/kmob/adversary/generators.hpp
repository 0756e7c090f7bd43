#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/trace.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kmob {

/// A lower-bound instance: the trace with its certificate, the parameters it was
/// built for and the bounds the construction promises.
struct GeneratedInstance {
    std::string construction;
    ProblemParams params;
    Trace trace;
    double offline_cost_bound = 0.0;
    std::optional<double> online_cost_lower_bound;
    std::vector<int> choices;  ///< random choices made (which Z per group)
    std::vector<double> z;     ///< the chosen target points on the line
    std::size_t phase2_start = 0;  ///< 0-based index of the first request after phase 1
    std::vector<int> guide_script;  ///< the k-Server schedule the construction assumes, if any
};

/// Number of values each per-group choice can take: 4 for k=2, 2 otherwise.
[[nodiscard]] int choice_arity(int k);

/// Every combination of per-group choices, in lexicographic order.
[[nodiscard]] std::vector<std::vector<int>> all_choices(int k);

/// A seeded uniform draw of per-group choices.
[[nodiscard]] std::vector<int> sample_choices(int k, std::uint64_t seed);

/// Two phases on the line from 0: requests at 0, then requests at the chosen Z
/// points. For k=2, Z = {-3/4, -1/4, 1/4, 3/4}[choice] * x * ms with x requests,
/// then x/8. For k>2, 4(k-1) segments of length x*ms to the right, grouped in fours;
/// Z_g is the midpoint of inner segment 4g+1 or 4g+2, with x/4 requests each.
/// Throws InputError unless k>=2, x is a positive multiple of 8 and choices fit.
[[nodiscard]] GeneratedInstance gen_thm3(int k, int x, double D, double ms, const std::vector<int>& choices);

/// Like gen_thm3, but the request walks to each Z in steps of mc. For k>2 the line
/// holds 5(k-1) segments grouped in fives; Z_g is the midpoint of segment 5g+1 or
/// 5g+3. Throws InputError unless mc >= ms as well.
[[nodiscard]] GeneratedInstance gen_thm4(int k, int x, double ms, double mc, double D,
                                         const std::vector<int>& choices);

/// x steps right by ms, y steps back left, then x-2y steps in place, with two
/// servers starting at 0. The guide script has server 0 take the rightward part
/// and server 1 everything after. Throws InputError unless 0 < y < x/4.
[[nodiscard]] GeneratedInstance gen_simple_counterexample(int x, int y, double ms);

struct WalkOptions {
    int k = 1;
    double start_spread = 0.0;  ///< servers 1..k-1 start uniformly within this radius of the origin
};

/// Seeded random walk from the origin: each step has length uniform in
/// [0, step_scale*mc] and a uniform direction. Server 0 starts on the origin.
[[nodiscard]] Trace gen_local_walk(int n, int dim, double mc, double step_scale, std::uint64_t seed,
                                   const WalkOptions& opts = {});

} // namespace kmob
