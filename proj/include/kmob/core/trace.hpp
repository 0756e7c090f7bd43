#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/point.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace kmob {

/// A request sequence, the common start positions and optionally a feasible
/// offline trajectory (certificate[t] is the offline configuration after request t).
struct Trace {
    std::vector<Point> requests;
    Configuration start;
    std::optional<std::vector<Configuration>> certificate;

    [[nodiscard]] std::size_t size() const noexcept { return requests.size(); }
};

struct TraceViolation {
    enum class Kind { Locality, Certificate };
    Kind kind = Kind::Locality;
    std::size_t index = 0;   ///< 0-based request index (locality) or step (certificate)
    std::size_t server = 0;  ///< offending server for certificate violations
    double measured = 0.0;
};

/// Checks request locality (d(r_t, r_{t+1}) <= mc) and, when present, that the
/// certificate moves each server at most ms per step. Returns the first violation.
/// Throws InputError on empty traces, wrong sizes or dimension mismatches.
[[nodiscard]] std::optional<TraceViolation> validate_trace(const Trace& trace,
                                                           const ProblemParams& params);

/// Cost of an explicit trajectory: D * total movement + sum of nearest-server distances.
[[nodiscard]] double trajectory_cost(const Trace& trace, const std::vector<Configuration>& trajectory,
                                     double movement_weight);

} // namespace kmob
