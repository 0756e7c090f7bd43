#pragma once

#include <kmob/core/params.hpp>
#include <kmob/mobile/mobile.hpp>
#include <kmob/offline/helper.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace kmob {

/// Per-step margins of an amortized inequality; a negative margin beyond the
/// slack is flagged.
struct MarginReport {
    std::vector<double> margin;
    std::vector<double> psi;  ///< potential after each step (psi[0] is the start value)
    std::vector<std::size_t> flagged;  ///< 0-based steps whose margin fell below -1e-9 * scale
    double min_margin = 0.0;
    std::size_t checked = 0;  ///< steps the inequality was evaluated on

    [[nodiscard]] bool ok() const noexcept { return flagged.empty(); }
};

/// psi/bound coefficients of the fast-mode inequality C_Alg + dpsi <= bound * C_K.
struct FastCoefficients {
    double psi = 0.0;
    double bound = 0.0;
};

/// ums: psi = 2(1+delta)/eps * sum d(a_i, c_pi(i)), bound 2(1+delta)/eps.
/// wms: psi = sqrt2 * 4D(1+delta)/eps * sum d, bound sqrt2 * 11(1+delta)/eps.
/// At delta = 0 these are 2/eps and sqrt2 * 4D/eps, 2/eps and sqrt2 * 11/eps.
[[nodiscard]] FastCoefficients fast_coefficients(const ProblemParams& params, Algo algo);

/// Checks the fast-mode potential inequality on every step of a run, with psi
/// taken over the matching the run recorded. Throws UnsupportedError for slow-mode
/// runs and for the matching-only baseline.
[[nodiscard]] MarginReport check_fast_potential(const RunResult& run);

/// phi as printed for the slow-mode analysis, as a function of d = d(a^, o^):
/// 4d below the threshold T, else 4d^2/(delta*ms) - A (unweighted) or + A
/// (weighted), with the respective A.
[[nodiscard]] double phi_value(double d, const ProblemParams& params, double threshold, bool weighted);

/// |upper branch - lower branch| of phi at the threshold.
[[nodiscard]] double phi_boundary_gap(const ProblemParams& params, double threshold, bool weighted);

struct SlowPotentialReport {
    MarginReport margins;
    std::vector<double> phi;
    std::size_t vacuous = 0;  ///< steps where r was outside inner(o*) and nothing was checked
    double boundary_gap = 0.0;
    double Y = 0.0;
};

/// Diagnostic check of C_Alg + dphi + dpsi <= Y*mc/(delta*ms) * C_K + 2 d(o*, r) on
/// the steps with r inside inner(o*). psi = Y*mc/(delta*ms) * sum d(a_i, c_pi(i)),
/// with an extra factor D for wms. Y defaults to 8k/delta^2. Throws InputError
/// when the offline trajectory is missing or delta = 0.
[[nodiscard]] SlowPotentialReport check_slow_potential(const RunResult& run, const Trace& trace,
                                                       const std::vector<Configuration>& offline,
                                                       const HelperTrajectory& helper, double sigma,
                                                       std::optional<double> Y = std::nullopt);

/// Online servers after each step of a run.
[[nodiscard]] std::vector<Configuration> online_trajectory(const RunResult& run);

struct LemmaGeoReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;
};

/// Samples a, r', s' in the plane and a' on the segment from a to r', with
/// d(s', r') <= sqrt(delta)/2 * d(a', r'), and counts violations of
/// d(a, s') - d(a', s') >= (1 + delta/4)/(1 + delta/2) * d(a, a') beyond 1e-12
/// relative slack. Throws InputError unless 0 < delta < 1.
[[nodiscard]] LemmaGeoReport check_lemma_geo(std::size_t samples, double delta, std::uint64_t seed, int dim = 2);

struct SpeedAudit {
    std::size_t steps = 0;
    std::size_t violations = 0;        ///< any server above (1+delta)*ms
    std::size_t mover_violations = 0;  ///< the singled-out server above its branch cap
    double max_displacement = 0.0;

    [[nodiscard]] bool ok() const noexcept { return violations == 0 && mover_violations == 0; }
};

[[nodiscard]] SpeedAudit audit_speed(const RunResult& run);

struct ProjectionAudit {
    std::size_t steps = 0;
    std::size_t violations = 0;
    double max_distance = 0.0;
    double radius = 0.0;
    double cost_ratio = 0.0;  ///< followed guide cost / underlying guide cost (0 when the latter is 0)

    [[nodiscard]] bool ok() const noexcept { return violations == 0; }
};

/// max_i d(c_i, r_t) against the outer radius on every step of a projected run.
/// Throws InputError when the run was not projected.
[[nodiscard]] ProjectionAudit audit_projection(const RunResult& run);

} // namespace kmob
