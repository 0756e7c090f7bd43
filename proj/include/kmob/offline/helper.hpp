#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/point.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace kmob {

/// The analysis constants of the helper construction. `sigma` multiplies the four
/// large constants (48960, 1020, 51483, 107548) so that the guarded regimes can be
/// reached at small scales; sigma = 1 is the faithful setting. 48 and 145 are not
/// scaled.
struct HelperConstants {
    double sigma = 1.0;
    double mc = 1.0;
    double inner_factor = 0.0;   ///< inner(o_i) = inner_factor * d(o_i, o_i^a)
    double outer_factor = 0.0;   ///< outer(o_i) = outer_factor * d(o_i, o_i^a)
    double circle_factor = 0.0;  ///< holding circle radius = circle_factor * d(o_l, o_l^a)
    double long_cap = 0.0;       ///< (2 + 1020*sigma*k/delta) * mc
    double slow_cap = 0.0;       ///< (1 + delta/8) * ms
    double step3 = 0.0;          ///< 51483*sigma*k*mc/delta^2
    double phi_threshold = 0.0;  ///< 107548*sigma*k*mc/delta^2, times D when weighted
};

/// Throws InputError unless delta > 0 and sigma > 0.
[[nodiscard]] HelperConstants helper_constants(const ProblemParams& params, double sigma, bool weighted = false);

enum class TransitionKind { Short, Long };

[[nodiscard]] std::string to_string(TransitionKind kind);

/// Long iff t2 - t1 > inner_t1 / mc + 2. Throws InputError unless t1 < t2 and
/// inner_t1 >= 0.
[[nodiscard]] TransitionKind classify_transition(double inner_t1, std::size_t t1, std::size_t t2, double mc);

/// What the analysis sees at the end of one step.
struct HelperFrame {
    std::size_t o_star = 0;  ///< offline server closest to r (lowest index on ties)
    double g = 0.0;          ///< d(o*, o*^a), o*^a the online server closest to o*
    double inner = 0.0;
    double outer = 0.0;
    bool anchored = false;   ///< r within inner(o*)
};

/// Per-step frames for requests[t], offline[t] and online[t] (all of length n).
[[nodiscard]] std::vector<HelperFrame> helper_frames(const std::vector<Point>& requests,
                                                     const std::vector<Configuration>& offline,
                                                     const std::vector<Configuration>& online,
                                                     const HelperConstants& hc);

enum class HelperRule { Chase, SkipAhead, Stay, Follow, Straight, Circle };

[[nodiscard]] std::string to_string(HelperRule rule);

/// One planned move of the helper.
struct HelperDirective {
    HelperRule rule = HelperRule::Chase;
    std::size_t server = 0;  ///< Follow/Circle: the offline server o_l
    Point target;            ///< SkipAhead/Straight/Circle: the point aimed at
    double cap = 0.0;
    double radius = 0.0;     ///< Straight/Circle: holding circle radius around o_l
    std::size_t window_end = 0;  ///< Straight: last 0-based step of the window
};

/// Plans the helper for a whole run (it is an offline construct and may look ahead).
///
/// Anchored steps split the run into transitions. Long transitions are chased at
/// the long cap, reaching the closing request one step early. Stretches where
/// d(o*, o*^a) drops below step3 are handled the same way until it recovers to
/// twice that value. Sequences of short transitions follow the passing server at
/// the slow cap, or head for the receiving server when it had been far from o*
/// earlier in the sequence.
[[nodiscard]] std::vector<HelperDirective> plan_helper(const std::vector<Point>& requests,
                                                       const std::vector<Configuration>& offline,
                                                       const std::vector<Configuration>& online,
                                                       const std::vector<HelperFrame>& frames,
                                                       const HelperConstants& hc);

/// Applies one directive; every move is clamped at the long cap. Whether a
/// Straight window must hold the circle instead is decided by simulate_helper,
/// which dry-runs the window first.
[[nodiscard]] Point helper_step(const Point& o_hat, const HelperDirective& directive, const Point& r,
                                const Configuration& offline, const HelperConstants& hc);

struct HelperTrajectory {
    std::vector<Point> o_hat;  ///< n+1 positions; o_hat[0] = r_1
    std::vector<HelperDirective> plan;
    std::vector<HelperFrame> frames;
};

[[nodiscard]] HelperTrajectory simulate_helper(const std::vector<Point>& requests,
                                               const std::vector<Configuration>& offline,
                                               const std::vector<Configuration>& online,
                                               const ProblemParams& params, double sigma);

struct HelperAudit {
    std::size_t steps = 0;
    std::size_t speed_violations = 0;  ///< displacement above the long cap
    double max_speed = 0.0;
    std::size_t guard_fired = 0;       ///< r in inner(o*) and d(o*, o*^a) >= 2*step3
    std::size_t guard_speed_violations = 0;
    std::size_t guard_outer_violations = 0;
    std::size_t distance_violations = 0;  ///< d(a^, o^) > 2 d(o*, o*^a) + d(a*, r)
    double worst_distance_margin = 0.0;

    [[nodiscard]] bool ok() const noexcept {
        return speed_violations == 0 && guard_speed_violations == 0 && guard_outer_violations == 0 &&
               distance_violations == 0;
    }
};

/// Audits the helper's speed cap, the two guarded invariants and the distance
/// bound on every step, with 1e-9 relative slack.
[[nodiscard]] HelperAudit audit_helper(const HelperTrajectory& helper, const std::vector<Point>& requests,
                                       const std::vector<Configuration>& offline,
                                       const std::vector<Configuration>& online, const ProblemParams& params,
                                       double sigma);

} // namespace kmob
