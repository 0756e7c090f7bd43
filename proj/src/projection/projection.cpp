#include <kmob/projection/projection.hpp>

#include <kmob/core/error.hpp>

namespace kmob {

double inner_radius(const ProblemParams& params, bool weighted) {
    return weighted ? 16.0 * params.k * params.D * params.mc : 4.0 * params.k * params.mc;
}

double outer_radius(const ProblemParams& params, bool weighted) {
    return weighted ? (32.0 * params.k * params.D + 1.0) * params.mc : (8.0 * params.k + 1.0) * params.mc;
}

PhaseState make_phase_state(const Configuration& start, bool weighted) {
    PhaseState s;
    s.hat = start;
    s.weighted = weighted;
    return s;
}

namespace {

// Point at distance `radius` from r on the ray toward p (p != r).
Point onto_circle(const Point& r, const Point& p, double radius) {
    const double d = distance(r, p);
    return r + (p - r) * (radius / d);
}

} // namespace

ProjectionStep project_step(const Configuration& c, PhaseState& phase, const Point& r,
                            const ProblemParams& params) {
    if (c.size() != phase.hat.size()) throw InputError("projection: configuration size changed");
    const double r_in = inner_radius(params, phase.weighted);
    const double r_out = outer_radius(params, phase.weighted);

    ProjectionStep out;
    out.phase_end = !phase.started || distance(phase.anchor, r) >= r_in;
    const Configuration before = phase.hat;

    for (std::size_t i = 0; i < c.size(); ++i) {
        const double d = distance(c[i], r);
        if (d <= r_in) {
            phase.hat[i] = c[i];
        } else if (out.phase_end) {
            phase.hat[i] = onto_circle(r, c[i], r_in);
        }
        if (distance(phase.hat[i], r) > r_out) {
            phase.hat[i] = onto_circle(r, phase.hat[i], r_out);
            ++out.clamped;
        }
    }
    if (out.phase_end) {
        phase.anchor = r;
        phase.started = true;
    }
    out.movement = total_displacement(before, phase.hat);
    out.serving = nearest_distance(phase.hat, r);
    return out;
}

ProjectedGuide::ProjectedGuide(std::unique_ptr<Guide> base, const ProblemParams& params, bool weighted)
    : base_(std::move(base)), params_(params), phase_(make_phase_state(base_->positions(), weighted)) {}

ProjectedGuide::ProjectedGuide(const ProjectedGuide& other)
    : Guide(other),
      base_(other.base_->clone()),
      params_(other.params_),
      phase_(other.phase_),
      last_base_(other.last_base_),
      phases_(other.phases_) {}

GuideCost ProjectedGuide::step(const Point& r) {
    last_base_ = base_->step(r);
    const auto s = project_step(base_->positions(), phase_, r, params_);
    if (s.phase_end) ++phases_;
    return {s.serving, s.movement};
}

} // namespace kmob
