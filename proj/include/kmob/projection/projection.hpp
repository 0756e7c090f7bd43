#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/point.hpp>
#include <kmob/kserver/guide.hpp>

#include <memory>

namespace kmob {

/// 4k*mc, or 16kD*mc for the weighted variant.
[[nodiscard]] double inner_radius(const ProblemParams& params, bool weighted);

/// (8k+1)*mc, or (32kD+1)*mc for the weighted variant.
[[nodiscard]] double outer_radius(const ProblemParams& params, bool weighted);

struct PhaseState {
    Point anchor;
    Configuration hat;  ///< projected positions
    bool weighted = false;
    bool started = false;
};

struct ProjectionStep {
    double serving = 0.0;   ///< min_i d(hat_i, r)
    double movement = 0.0;  ///< raw movement of the projected servers
    bool phase_end = false;
    std::size_t clamped = 0;  ///< servers pulled back onto the outer circle
};

/// Fresh projection state whose projected servers start at `start`.
[[nodiscard]] PhaseState make_phase_state(const Configuration& start, bool weighted);

/// Advances the projection after the guide moved to `c` for request r.
///
/// A phase ends when r has drifted at least the inner radius from the anchor; the
/// first call always ends a phase. Projected servers whose guide server lies inside
/// inner(r) copy it. At a phase end the others go to the nearest point of the
/// inner circle, otherwise they stay put. Anything then still outside the outer
/// circle is pulled onto it, so the outer bound holds on every step.
ProjectionStep project_step(const Configuration& c, PhaseState& phase, const Point& r,
                            const ProblemParams& params);

/// Wraps a guide so that its positions are the projected ones. Step costs are
/// those of the projected servers; the wrapped guide's costs are tracked apart.
class ProjectedGuide final : public Guide {
public:
    ProjectedGuide(std::unique_ptr<Guide> base, const ProblemParams& params, bool weighted);
    ProjectedGuide(const ProjectedGuide& other);

    GuideCost step(const Point& r) override;
    [[nodiscard]] const Configuration& positions() const noexcept override { return phase_.hat; }
    [[nodiscard]] bool is_kserver() const noexcept override { return base_->is_kserver(); }
    [[nodiscard]] std::string name() const override { return base_->name() + "+projection"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override { return std::make_unique<ProjectedGuide>(*this); }

    [[nodiscard]] const Guide& base() const noexcept { return *base_; }
    [[nodiscard]] const GuideCost& last_base_cost() const noexcept { return last_base_; }
    [[nodiscard]] const PhaseState& phase() const noexcept { return phase_; }
    [[nodiscard]] std::size_t phase_count() const noexcept { return phases_; }

private:
    std::unique_ptr<Guide> base_;
    ProblemParams params_;
    PhaseState phase_;
    GuideCost last_base_;
    std::size_t phases_ = 0;
};

} // namespace kmob
