#include <kmob/adversary/generators.hpp>

#include <kmob/core/error.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace kmob {

namespace {

void check_x(int k, int x) {
    if (k < 2) throw InputError("construction needs k >= 2");
    if (x <= 0 || x % 8 != 0) throw InputError("x must be a positive multiple of 8");
}

void check_choices(int k, const std::vector<int>& choices) {
    if (choices.size() != static_cast<std::size_t>(k - 1)) throw InputError("need one choice per group");
    for (int c : choices) {
        if (c < 0 || c >= choice_arity(k)) throw InputError("choice out of range");
    }
}

Point at(double x) { return Point{x}; }

Configuration line_config(const std::vector<double>& xs) {
    Configuration c;
    for (double v : xs) c.push_back(at(v));
    return c;
}

// Certificate phase 1: server g+1 walks to z[g] at speed ms; server 0 stays at 0.
std::vector<double> phase1_positions(const std::vector<double>& z, double ms, std::size_t t) {
    std::vector<double> pos(z.size() + 1, 0.0);
    for (std::size_t g = 0; g < z.size(); ++g) {
        const double reach = ms * static_cast<double>(t);
        pos[g + 1] = std::abs(z[g]) <= reach ? z[g] : std::copysign(reach, z[g]);
    }
    return pos;
}

std::size_t phase1_length(int k, int x, const std::vector<double>& z, double ms) {
    double far = 0.0;
    for (double v : z) far = std::max(far, std::abs(v));
    const auto travel = static_cast<std::size_t>(std::ceil(far / ms - 1e-12));
    const std::size_t base = k == 2 ? static_cast<std::size_t>(x) : static_cast<std::size_t>(k) * x;
    return std::max(base, travel);
}

double max_gap(const std::vector<double>& z) {
    double prev = 0.0;
    double gap = 0.0;
    for (double v : z) {
        gap = std::max(gap, std::abs(v - prev));
        prev = v;
    }
    return gap;
}

std::vector<double> thm3_targets(int k, int x, double ms, const std::vector<int>& choices) {
    std::vector<double> z;
    const double unit = x * ms;
    if (k == 2) {
        static constexpr double kFrac[] = {-0.75, -0.25, 0.25, 0.75};
        z.push_back(kFrac[choices[0]] * unit);
    } else {
        for (int g = 0; g < k - 1; ++g) z.push_back((4.0 * g + 1.5 + choices[g]) * unit);
    }
    return z;
}

std::vector<double> thm4_targets(int k, int x, double ms, const std::vector<int>& choices) {
    if (k == 2) return thm3_targets(k, x, ms, choices);
    std::vector<double> z;
    const double unit = x * ms;
    for (int g = 0; g < k - 1; ++g) z.push_back((5.0 * g + 1.5 + 2.0 * choices[g]) * unit);
    return z;
}

} // namespace

int choice_arity(int k) { return k == 2 ? 4 : 2; }

std::vector<std::vector<int>> all_choices(int k) {
    if (k < 2) throw InputError("construction needs k >= 2");
    const int arity = choice_arity(k);
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k - 1, 0);
    while (true) {
        out.push_back(cur);
        int pos = k - 2;
        while (pos >= 0 && cur[pos] == arity - 1) cur[pos--] = 0;
        if (pos < 0) break;
        ++cur[pos];
    }
    return out;
}

std::vector<int> sample_choices(int k, std::uint64_t seed) {
    if (k < 2) throw InputError("construction needs k >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, choice_arity(k) - 1);
    std::vector<int> out(k - 1);
    for (auto& c : out) c = pick(rng);
    return out;
}

GeneratedInstance gen_thm3(int k, int x, double D, double ms, const std::vector<int>& choices) {
    check_x(k, x);
    check_choices(k, choices);
    if (!(ms > 0.0) || !(D >= 1.0)) throw InputError("need ms > 0 and D >= 1");

    GeneratedInstance inst;
    inst.construction = "thm3";
    inst.choices = choices;
    inst.z = thm3_targets(k, x, ms, choices);

    const std::size_t n1 = phase1_length(k, x, inst.z, ms);
    const int per_target = k == 2 ? x / 8 : x / 4;
    std::vector<Configuration> cert;
    for (std::size_t t = 1; t <= n1; ++t) {
        inst.trace.requests.push_back(at(0.0));
        cert.push_back(line_config(phase1_positions(inst.z, ms, t)));
    }
    inst.phase2_start = n1;
    const auto parked = phase1_positions(inst.z, ms, n1);
    for (double target : inst.z) {
        for (int i = 0; i < per_target; ++i) {
            inst.trace.requests.push_back(at(target));
            cert.push_back(line_config(parked));
        }
    }
    inst.trace.start = Configuration(k, at(0.0));
    inst.trace.certificate = std::move(cert);

    inst.params.k = k;
    inst.params.ms = ms;
    inst.params.mc = std::max(ms, max_gap(inst.z));
    inst.params.D = D;

    if (k == 2) {
        inst.offline_cost_bound = D * 0.75 * x * ms;
        inst.online_cost_lower_bound = static_cast<double>(x) * x * ms / 264.0;
    } else {
        double worst = 0.0;
        for (int g = 0; g < k - 1; ++g) worst += (4.0 * g + 2.5) * x * ms;
        inst.offline_cost_bound = D * worst;
    }
    return inst;
}

GeneratedInstance gen_thm4(int k, int x, double ms, double mc, double D, const std::vector<int>& choices) {
    check_x(k, x);
    check_choices(k, choices);
    if (!(ms > 0.0) || !(D >= 1.0)) throw InputError("need ms > 0 and D >= 1");
    if (!(mc >= ms)) throw InputError("construction needs mc >= ms");

    GeneratedInstance inst;
    inst.construction = "thm4";
    inst.choices = choices;
    inst.z = thm4_targets(k, x, ms, choices);

    const std::size_t n1 = phase1_length(k, x, inst.z, ms);
    const int per_target = k == 2 ? x / 8 : x / 4;
    std::vector<Configuration> cert;
    for (std::size_t t = 1; t <= n1; ++t) {
        inst.trace.requests.push_back(at(0.0));
        cert.push_back(line_config(phase1_positions(inst.z, ms, t)));
    }
    inst.phase2_start = n1;
    const auto parked = line_config(phase1_positions(inst.z, ms, n1));

    double pos = 0.0;
    for (double target : inst.z) {
        // Walk in steps of mc; the last step lands exactly on the target.
        while (pos != target) {
            pos = std::abs(target - pos) <= mc ? target : pos + std::copysign(mc, target - pos);
            inst.trace.requests.push_back(at(pos));
            cert.push_back(parked);
        }
        for (int i = 0; i < per_target; ++i) {
            inst.trace.requests.push_back(at(target));
            cert.push_back(parked);
        }
    }
    inst.trace.start = Configuration(k, at(0.0));
    inst.trace.certificate = std::move(cert);

    inst.params.k = k;
    inst.params.ms = ms;
    inst.params.mc = mc;
    inst.params.D = D;

    if (k == 2) {
        inst.offline_cost_bound = D * x * ms + static_cast<double>(x) * x * ms * ms / (2.0 * mc);
        const double y = x * (0.125 - ms / mc);
        if (y > 0.0) inst.online_cost_lower_bound = 0.5 * 0.5 * y * y * ms;
    } else {
        // Movement to the farthest choices, plus serving on each walk: at most
        // gap/2 per step over ceil(gap/mc) steps.
        double bound = 0.0;
        double prev = 0.0;
        for (int g = 0; g < k - 1; ++g) {
            const double far = (5.0 * g + 3.5) * x * ms;
            const double gap = far - prev;
            bound += D * far + gap * gap / (2.0 * mc) + gap / 2.0;
            prev = (5.0 * g + 1.5) * x * ms;
        }
        inst.offline_cost_bound = bound;
    }
    return inst;
}

GeneratedInstance gen_simple_counterexample(int x, int y, double ms) {
    if (x <= 0 || y <= 0 || 4 * y >= x) throw InputError("need 0 < y < x/4");
    if (!(ms > 0.0)) throw InputError("need ms > 0");

    GeneratedInstance inst;
    inst.construction = "simple-cx";
    std::vector<Configuration> cert;
    double pos = 0.0;
    auto emit = [&](double p, int server) {
        inst.trace.requests.push_back(at(p));
        cert.push_back(line_config({p, 0.0}));
        inst.guide_script.push_back(server);
    };
    for (int i = 1; i <= x; ++i) emit(pos = i * ms, 0);
    inst.phase2_start = inst.trace.requests.size();
    for (int i = 1; i <= y; ++i) emit(pos = (x - i) * ms, 1);
    for (int i = 0; i < x - 2 * y; ++i) emit(pos, 1);

    inst.trace.start = Configuration(2, at(0.0));
    inst.trace.certificate = std::move(cert);
    inst.params.k = 2;
    inst.params.ms = ms;
    inst.params.mc = ms;
    inst.offline_cost_bound = (x + y) * ms;
    inst.online_cost_lower_bound = x * ms + static_cast<double>(x - 3 * y) * y * ms;
    return inst;
}

Trace gen_local_walk(int n, int dim, double mc, double step_scale, std::uint64_t seed, const WalkOptions& opts) {
    if (n < 1 || dim < 1 || opts.k < 1) throw InputError("walk needs n, dim, k >= 1");
    if (!(mc > 0.0) || step_scale < 0.0 || step_scale > 1.0) throw InputError("walk needs mc > 0, step_scale in [0,1]");
    if (opts.start_spread < 0.0) throw InputError("start_spread must be >= 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto direction = [&]() {
        Point u = Point::zero(dim);
        if (dim == 1) {
            u[0] = unit(rng) < 0.5 ? -1.0 : 1.0;
            return u;
        }
        double len = 0.0;
        while (len < 1e-12) {
            for (int j = 0; j < dim; ++j) u[j] = gauss(rng);
            len = norm(u);
        }
        return u * (1.0 / len);
    };

    Trace trace;
    const Point origin = Point::zero(dim);
    trace.start.push_back(origin);
    for (int i = 1; i < opts.k; ++i) {
        // Uniform in the ball: radius ~ spread * U^(1/dim).
        const double radius = opts.start_spread * std::pow(unit(rng), 1.0 / dim);
        trace.start.push_back(origin + direction() * radius);
    }
    Point r = origin;
    trace.requests.push_back(r);
    for (int t = 1; t < n; ++t) {
        const double len = unit(rng) * step_scale * mc;
        r = r + direction() * len;
        trace.requests.push_back(r);
    }
    return trace;
}

} // namespace kmob
