#include <doctest.h>

#include "../support/oracles.hpp"

#include <kmob/adversary/generators.hpp>
#include <kmob/core/error.hpp>
#include <kmob/mobile/mobile.hpp>
#include <kmob/offline/checkers.hpp>
#include <kmob/offline/dp.hpp>
#include <kmob/offline/helper.hpp>

#include <algorithm>
#include <random>

using namespace kmob;

namespace {

ProblemParams line(int k, double ms, double mc, double delta = 0.0, double D = 1.0) {
    ProblemParams p;
    p.k = k;
    p.ms = ms;
    p.mc = mc;
    p.delta = delta;
    p.D = D;
    return p;
}

} // namespace

TEST_CASE("dp: stationary requests cost nothing") {
    Trace t{std::vector<Point>(6, Point{1}), {{1}, {1}}, std::nullopt};
    const auto r = dp_optimum(t, line(2, 1, 1), GridSpec{0.0, 11});
    CHECK(r.cost == 0.0);
    for (const auto& c : r.trajectory) CHECK(c == Configuration{{1}, {1}});
}

TEST_CASE("dp: a single far request is served or walked to at equal cost") {
    Trace t{{{5}}, {{0}}, std::nullopt};
    const auto r = dp_optimum(t, line(1, 1, 5), GridSpec{1.0, 0});
    CHECK(r.cost == doctest::Approx(5.0));
}

TEST_CASE("dp agrees with exhaustive search on tiny grids") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 15; ++rep) {
        const int k = 1 + rep % 2;
        const double D = rep % 3 == 0 ? 2.0 : 1.0;
        Trace raw;
        raw.start = {{u(rng)}};
        if (k == 2) raw.start.push_back({u(rng)});
        Point r{0};
        for (int i = 0; i < 5; ++i) {
            r = Point{std::clamp(r[0] + u(rng) * 0.5, -2.0, 2.0)};
            raw.requests.push_back(r);
        }
        const GridSpec spec{0.0, 9};
        const auto grid = dp_grid(raw, spec);
        const auto snapped = snap_to_grid(raw, grid);
        const auto p = line(k, 0.5, 10.0, 0.0, D);
        const auto res = dp_optimum(snapped, p, spec);

        std::vector<int> start_idx;
        for (const auto& s : snapped.start) {
            start_idx.push_back(static_cast<int>(std::find(grid.begin(), grid.end(), s[0]) - grid.begin()));
        }
        std::vector<double> reqs;
        for (const auto& q : snapped.requests) reqs.push_back(q[0]);
        const int reach = static_cast<int>(std::floor(p.ms / res.h + 1e-9));
        CHECK(res.cost == doctest::Approx(oracle::grid_optimum(grid, start_idx, reqs, reach, D)).epsilon(1e-9));
        CHECK(trajectory_cost(snapped, res.trajectory, D) == doctest::Approx(res.cost).epsilon(1e-9));
    }
}

TEST_CASE("dp input limits") {
    Trace t{{{0, 0}}, {{0, 0}}, std::nullopt};
    auto p = line(1, 1, 1);
    p.dim = 2;
    CHECK_THROWS_AS((void)dp_optimum(t, p, GridSpec{0.0, 5}), UnsupportedError);
    Trace one{{{0}}, {{0}}, std::nullopt};
    CHECK_THROWS_AS((void)dp_optimum(one, line(1, 1, 1), GridSpec{1.0, 5}), InputError);
    CHECK(discretization_slack(0.5, 10, line(2, 1, 1, 0, 3)) == doctest::Approx(0.5 * 10 * 4 * 2));
}

TEST_CASE("transition classification") {
    CHECK(classify_transition(5.0, 3, 4, 1.0) == TransitionKind::Short);
    CHECK(classify_transition(10.0, 0, 13, 1.0) == TransitionKind::Long);
    CHECK(classify_transition(10.0, 0, 12, 1.0) == TransitionKind::Short);
    CHECK_THROWS_AS((void)classify_transition(1.0, 4, 4, 1.0), InputError);
}

TEST_CASE("helper constants") {
    const auto hc = helper_constants(line(2, 1, 2, 0.5), 1.0);
    CHECK(hc.long_cap == doctest::Approx((2.0 + 1020.0 * 2 / 0.5) * 2));
    CHECK(hc.slow_cap == doctest::Approx(1.0625));
    CHECK(hc.step3 == doctest::Approx(51483.0 * 2 * 2 / 0.25));
    CHECK(hc.phi_threshold == doctest::Approx(107548.0 * 2 * 2 / 0.25));
    CHECK(helper_constants(line(2, 1, 2, 0.5, 3.0), 1.0, true).phi_threshold ==
          doctest::Approx(3 * 107548.0 * 2 * 2 / 0.25));
    CHECK_THROWS_AS((void)helper_constants(line(2, 1, 2, 0.0), 1.0), InputError);
}

TEST_CASE("helper chases through a long transition and lands on the request") {
    // Offline servers fixed at 0 and 100, online servers parked far away so the
    // inner circles are a few units wide. The request walks from 0 to 100 in steps of 2.
    const auto p = line(2, 1.0, 2.0, 0.5);
    const double sigma = 1e-3;
    std::vector<Point> reqs;
    for (int x = 0; x <= 100; x += 2) reqs.push_back({static_cast<double>(x)});
    for (int i = 0; i < 5; ++i) reqs.push_back({100});
    const std::vector<Configuration> offline(reqs.size(), Configuration{{0}, {100}});
    const std::vector<Configuration> online(reqs.size(), Configuration{{5000}, {5100}});

    const auto hc = helper_constants(p, sigma);
    const auto frames = helper_frames(reqs, offline, online, hc);
    std::size_t t1 = 0, t2 = 0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        if (frames[t].anchored && frames[t].o_star == 0) t1 = t;
        if (frames[t].anchored && frames[t].o_star == 1 && t2 == 0) t2 = t;
    }
    REQUIRE(t2 > t1);
    CHECK(classify_transition(frames[t1].inner, t1, t2, p.mc) == TransitionKind::Long);

    const auto h = simulate_helper(reqs, offline, online, p, sigma);
    REQUIRE(h.o_hat.size() == reqs.size() + 1);
    CHECK(distance(h.o_hat[t2 + 1], reqs[t2]) <= 1e-9);
    for (std::size_t t = 0; t < reqs.size(); ++t) CHECK(distance(h.o_hat[t], h.o_hat[t + 1]) <= hc.long_cap + 1e-9);

    const auto audit = audit_helper(h, reqs, offline, online, p, sigma);
    CHECK(audit.ok());
    CHECK(audit.guard_fired > 0);
}

TEST_CASE("fast potential holds on a stationary trace") {
    Trace t{std::vector<Point>(8, Point{0, 0}), {{0, 0}, {1, 0}}, std::nullopt};
    auto p = line(2, 1, 0.5);
    p.dim = 2;
    const auto run = kmob::run(t, p, {});
    const auto rep = check_fast_potential(run);
    CHECK(rep.ok());
    CHECK(rep.checked == 8);
    CHECK(rep.min_margin >= 0.0);
}

TEST_CASE("fast coefficients") {
    const auto u = fast_coefficients(line(2, 1, 0.5), Algo::Ums);
    CHECK(u.psi == doctest::Approx(4.0));
    CHECK(u.bound == doctest::Approx(4.0));
    const auto w = fast_coefficients(line(2, 1, 0.5, 0.0, 2.0), Algo::Wms);
    CHECK(w.psi == doctest::Approx(std::sqrt(2.0) * 4 * 2 / 0.5));
    CHECK(w.bound == doctest::Approx(std::sqrt(2.0) * 11 / 0.5));
    CHECK_THROWS_AS((void)fast_coefficients(line(2, 1, 2.0), Algo::Ums), UnsupportedError);
}

TEST_CASE("fast potential flags a tampered run") {
    auto p = line(1, 1, 0.5);
    const auto t = gen_local_walk(20, 1, 0.5, 1.0, 2, {1, 0.0});
    auto run = kmob::run(t, p, {});
    CHECK(check_fast_potential(run).ok());
    // Pretend the online server drifted away without the guide doing anything.
    run.steps[10].serving += 5.0;
    run.steps[10].movement += 5.0;
    run.steps[10].guide = {};
    run.steps[10].base_guide = {};
    CHECK_FALSE(check_fast_potential(run).ok());
}

TEST_CASE("phi is continuous at the threshold") {
    const auto p = line(2, 1, 2, 0.5, 3.0);
    for (bool weighted : {false, true}) {
        const double T = helper_constants(p, 1.0, weighted).phi_threshold;
        const double below = phi_value(T * (1 - 1e-12), p, T, weighted);
        const double at = phi_value(T, p, T, weighted);
        CHECK(std::abs(below - at) <= 1e-6 * std::abs(at));
        CHECK(phi_boundary_gap(p, T, weighted) <= 1e-6 * std::abs(at));
    }
}

TEST_CASE("lemma sampler") {
    for (double d : {0.1, 0.5, 0.9}) {
        const auto r = check_lemma_geo(2000, d, 5);
        CHECK(r.samples == 2000);
        CHECK(r.violations == 0);
    }
    CHECK_THROWS_AS((void)check_lemma_geo(10, 1.0, 1), InputError);
}

TEST_CASE("speed audit on a generated run") {
    const auto inst = gen_thm3(2, 64, 1.0, 1.0, {1});
    auto p = inst.params;
    p.delta = 0.5;
    const auto run = kmob::run(inst.trace, p, {});
    const auto a = audit_speed(run);
    CHECK(a.ok());
    CHECK(a.max_displacement <= 1.5 + 1e-9);
}
