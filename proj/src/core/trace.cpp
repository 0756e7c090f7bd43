#include <kmob/core/trace.hpp>

#include <kmob/core/error.hpp>

#include <cmath>
#include <string>

namespace kmob {

void ProblemParams::validate() const {
    auto fail = [](const std::string& what) { throw InputError("invalid parameters: " + what); };
    if (k < 1) fail("k must be >= 1");
    if (dim < 1) fail("dim must be >= 1");
    if (!std::isfinite(ms) || ms <= 0.0) fail("ms must be > 0");
    if (!std::isfinite(mc) || mc <= 0.0) fail("mc must be > 0");
    if (!std::isfinite(delta) || delta < 0.0 || delta >= 1.0) fail("delta must lie in [0,1)");
    if (!std::isfinite(D) || D < 1.0) fail("D must be >= 1");
}

namespace {

void check_config(const Configuration& config, const ProblemParams& params, const char* what) {
    if (config.size() != static_cast<std::size_t>(params.k)) {
        throw InputError(std::string(what) + ": expected " + std::to_string(params.k) +
                         " positions, got " + std::to_string(config.size()));
    }
    for (const auto& p : config) {
        if (p.dim() != static_cast<std::size_t>(params.dim)) {
            throw InputError(std::string(what) + ": dimension mismatch");
        }
        if (!p.is_finite()) throw InputError(std::string(what) + ": non-finite coordinate");
    }
}

} // namespace

std::optional<TraceViolation> validate_trace(const Trace& trace, const ProblemParams& params) {
    params.validate();
    if (trace.requests.empty()) throw InputError("trace has no requests");
    check_config(trace.start, params, "start configuration");
    for (const auto& r : trace.requests) {
        if (r.dim() != static_cast<std::size_t>(params.dim)) {
            throw InputError("request dimension mismatch");
        }
        if (!r.is_finite()) throw InputError("request has non-finite coordinate");
    }
    if (trace.certificate) {
        if (trace.certificate->size() != trace.requests.size()) {
            throw InputError("certificate length differs from request count");
        }
        for (const auto& c : *trace.certificate) check_config(c, params, "certificate");
    }

    const double mc_limit = params.mc * (1.0 + kRelTol);
    for (std::size_t t = 1; t < trace.requests.size(); ++t) {
        const double d = distance(trace.requests[t - 1], trace.requests[t]);
        if (d > mc_limit) return TraceViolation{TraceViolation::Kind::Locality, t, 0, d};
    }
    if (trace.certificate) {
        const double ms_limit = params.ms * (1.0 + kRelTol);
        const Configuration* prev = &trace.start;
        for (std::size_t t = 0; t < trace.certificate->size(); ++t) {
            const auto& cur = (*trace.certificate)[t];
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const double d = distance((*prev)[i], cur[i]);
                if (d > ms_limit) return TraceViolation{TraceViolation::Kind::Certificate, t, i, d};
            }
            prev = &cur;
        }
    }
    return std::nullopt;
}

double trajectory_cost(const Trace& trace, const std::vector<Configuration>& trajectory,
                       double movement_weight) {
    if (trajectory.size() != trace.requests.size()) {
        throw InputError("trajectory length differs from request count");
    }
    double cost = 0.0;
    const Configuration* prev = &trace.start;
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        cost += movement_weight * total_displacement(*prev, trajectory[t]);
        cost += nearest_distance(trajectory[t], trace.requests[t]);
        prev = &trajectory[t];
    }
    return cost;
}

} // namespace kmob
