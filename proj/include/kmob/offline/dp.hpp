#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/trace.hpp>

#include <vector>

namespace kmob {

/// Either a spacing h or a point count; exactly one must be positive.
struct GridSpec {
    double h = 0.0;
    int points = 0;
};

struct DpResult {
    double cost = 0.0;
    double h = 0.0;
    std::vector<double> grid;
    std::vector<Configuration> trajectory;  ///< offline configuration after each request
};

/// Exact optimum over a line grid spanning the requests and start positions.
/// Servers start on the grid points nearest their start positions and move at
/// most floor(ms/h) grid steps per request. Each step costs D times the movement
/// plus the distance from the request to the nearest server afterwards.
/// Throws UnsupportedError for dim != 1 and ResourceError when k > 2, n > 30 or
/// the grid exceeds 41 points.
[[nodiscard]] DpResult dp_optimum(const Trace& trace, const ProblemParams& params, const GridSpec& grid);

/// The grid dp_optimum would use.
[[nodiscard]] std::vector<double> dp_grid(const Trace& trace, const GridSpec& grid);

/// Copy of the trace with every request and start position moved to its nearest
/// grid point (lowest on ties). The certificate is dropped.
[[nodiscard]] Trace snap_to_grid(const Trace& trace, const std::vector<double>& grid);

/// Additive allowance h*n*(D+1)*k between a grid optimum and continuous costs.
[[nodiscard]] double discretization_slack(double h, std::size_t n, const ProblemParams& params);

} // namespace kmob
