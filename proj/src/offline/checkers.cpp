#include <kmob/offline/checkers.hpp>

#include <kmob/core/error.hpp>
#include <kmob/projection/projection.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace kmob {

namespace {

double matched_sum(const Configuration& a, const Configuration& c, const Matching& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += distance(a[i], c[m.perm[i]]);
    return s;
}

void note_margin(MarginReport& rep, std::size_t t, double margin, double scale) {
    rep.margin.push_back(margin);
    if (rep.checked == 0 || margin < rep.min_margin) rep.min_margin = margin;
    ++rep.checked;
    if (margin < -kRelTol * std::max(1.0, scale)) rep.flagged.push_back(t);
}

} // namespace

FastCoefficients fast_coefficients(const ProblemParams& params, Algo algo) {
    const double eps = derive_epsilon(params, algo);
    if (!(eps > 0.0)) throw UnsupportedError("fast-mode inequality needs mc < (1+delta)*ms");
    const double aug = 1.0 + params.delta;
    if (algo == Algo::Ums) return {2.0 * aug / eps, 2.0 * aug / eps};
    if (algo == Algo::Wms) {
        return {std::numbers::sqrt2 * 4.0 * params.D * aug / eps, std::numbers::sqrt2 * 11.0 * aug / eps};
    }
    throw UnsupportedError("the matching-only baseline has no potential bound");
}

MarginReport check_fast_potential(const RunResult& run) {
    if (run.mode != Mode::Fast) throw UnsupportedError("fast-potential check on a slow-mode run");
    const auto coef = fast_coefficients(run.params, run.algo);
    const double D = run.params.D;

    MarginReport rep;
    double psi_prev = coef.psi * min_weight_matching(run.start, run.start).weight;
    rep.psi.push_back(psi_prev);
    for (std::size_t t = 0; t < run.steps.size(); ++t) {
        const auto& s = run.steps[t];
        const double psi = coef.psi * matched_sum(s.a, s.c, s.matching);
        const double c_alg = s.serving + D * s.movement;
        const double c_k = s.guide.total(D);
        const double margin = coef.bound * c_k - (c_alg + psi - psi_prev);
        note_margin(rep, t, margin, c_alg + psi + psi_prev + coef.bound * c_k);
        rep.psi.push_back(psi);
        psi_prev = psi;
    }
    return rep;
}

double phi_value(double d, const ProblemParams& params, double T, bool weighted) {
    if (d <= T) return 4.0 * d;
    const double q = 1.0 / (params.delta * params.ms);
    if (weighted) {
        const double A = 4.0 * (T - q * T * T);
        return 4.0 * q * d * d + A;
    }
    const double A = 4.0 * (q * T * T - T);
    return 4.0 * q * d * d - A;
}

double phi_boundary_gap(const ProblemParams& params, double T, bool weighted) {
    const double q = 1.0 / (params.delta * params.ms);
    const double upper = weighted ? 4.0 * q * T * T + 4.0 * (T - q * T * T) : 4.0 * q * T * T - 4.0 * (q * T * T - T);
    return std::abs(upper - 4.0 * T);
}

std::vector<Configuration> online_trajectory(const RunResult& run) {
    std::vector<Configuration> out;
    out.reserve(run.steps.size());
    for (const auto& s : run.steps) out.push_back(s.a);
    return out;
}

SlowPotentialReport check_slow_potential(const RunResult& run, const Trace& trace,
                                         const std::vector<Configuration>& offline, const HelperTrajectory& helper,
                                         double sigma, std::optional<double> Y) {
    const auto& p = run.params;
    if (!(p.delta > 0.0)) throw InputError("slow-potential check needs delta > 0");
    if (offline.size() != run.steps.size()) throw InputError("slow-potential check needs the offline trajectory");
    if (helper.o_hat.size() != run.steps.size() + 1) throw InputError("slow-potential check needs the helper trajectory");
    if (trace.size() != run.steps.size()) throw InputError("trace does not match the run");

    const bool weighted = run.algo == Algo::Wms;
    const auto hc = helper_constants(p, sigma, weighted);
    SlowPotentialReport rep;
    rep.Y = Y.value_or(8.0 * p.k / (p.delta * p.delta));
    const double base = rep.Y * p.mc / (p.delta * p.ms);
    const double psi_coef = base * (weighted ? p.D : 1.0);
    rep.boundary_gap = phi_boundary_gap(p, hc.phi_threshold, weighted);

    auto phi_at = [&](const Configuration& a, const Point& o_hat) {
        return phi_value(nearest_distance(a, o_hat), p, hc.phi_threshold, weighted);
    };
    double phi_prev = phi_at(run.start, helper.o_hat[0]);
    double psi_prev = psi_coef * min_weight_matching(run.start, run.start).weight;
    rep.phi.push_back(phi_prev);
    rep.margins.psi.push_back(psi_prev);
    for (std::size_t t = 0; t < run.steps.size(); ++t) {
        const auto& s = run.steps[t];
        const double phi = phi_at(s.a, helper.o_hat[t + 1]);
        const double psi = psi_coef * matched_sum(s.a, s.c, s.matching);
        const auto& f = helper.frames[t];
        if (f.anchored) {
            const double c_alg = s.serving + p.D * s.movement;
            const double bound = base * s.guide.total(p.D) + 2.0 * distance(offline[t][f.o_star], trace.requests[t]);
            const double margin = bound - (c_alg + (phi - phi_prev) + (psi - psi_prev));
            note_margin(rep.margins, t, margin, bound + c_alg + phi + phi_prev + psi + psi_prev);
        } else {
            ++rep.vacuous;
        }
        rep.phi.push_back(phi);
        rep.margins.psi.push_back(psi);
        phi_prev = phi;
        psi_prev = psi;
    }
    return rep;
}

LemmaGeoReport check_lemma_geo(std::size_t samples, double delta, std::uint64_t seed, int dim) {
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("lemma sampler needs 0 < delta < 1");
    if (dim < 1) throw InputError("lemma sampler needs dim >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto direction = [&]() {
        Point u = Point::zero(dim);
        double len = 0.0;
        while (len < 1e-12) {
            for (int j = 0; j < dim; ++j) u[j] = gauss(rng);
            len = norm(u);
        }
        return u * (1.0 / len);
    };

    const double factor = (1.0 + delta / 4.0) / (1.0 + delta / 2.0);
    LemmaGeoReport rep;
    rep.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        const Point r = direction() * (10.0 * unit(rng));
        const Point a = r + direction() * std::pow(10.0, -2.0 + 4.0 * unit(rng));
        // Exercise the end points of the move as well as the interior.
        const double u = unit(rng);
        const double lambda = u < 0.05 ? 0.0 : (u > 0.95 ? 1.0 : unit(rng));
        const Point a2 = move_toward(a, r, lambda * distance(a, r));
        const double rho = std::sqrt(delta) / 2.0 * distance(a2, r);
        const double reach = unit(rng) < 0.25 ? 1.0 : std::pow(unit(rng), 1.0 / dim);
        const Point s = r + direction() * (rho * reach);

        const double lhs = distance(a, s) - distance(a2, s);
        const double rhs = factor * distance(a, a2);
        const double margin = lhs - rhs;
        if (i == 0 || margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin < -1e-12 * (1.0 + distance(a, s))) ++rep.violations;
    }
    return rep;
}

SpeedAudit audit_speed(const RunResult& run) {
    const double cap = run.params.online_speed();
    SpeedAudit audit;
    for (const auto& s : run.steps) {
        ++audit.steps;
        for (double d : s.displacement) {
            audit.max_displacement = std::max(audit.max_displacement, d);
            if (d > cap + 1e-9) ++audit.violations;
        }
        if (s.mover < s.displacement.size() && s.displacement[s.mover] > s.mover_cap + 1e-9) {
            ++audit.mover_violations;
        }
    }
    return audit;
}

ProjectionAudit audit_projection(const RunResult& run) {
    if (!run.projected) throw InputError("projection audit on a run without projection");
    ProjectionAudit audit;
    audit.radius = outer_radius(run.params, run.algo == Algo::Wms);
    for (const auto& s : run.steps) {
        ++audit.steps;
        for (const auto& c : s.c) {
            const double d = distance(c, s.request);
            audit.max_distance = std::max(audit.max_distance, d);
            if (d > audit.radius + 1e-9) ++audit.violations;
        }
    }
    const double base = run.base_guide_ledger.grand_total();
    audit.cost_ratio = base > 0.0 ? run.guide_ledger.grand_total() / base : 0.0;
    return audit;
}

} // namespace kmob
