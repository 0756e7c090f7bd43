#include <doctest.h>

#include <kmob/adversary/generators.hpp>
#include <kmob/core/error.hpp>
#include <kmob/kserver/guide.hpp>
#include <kmob/mobile/mobile.hpp>

using namespace kmob;

namespace {

ProblemParams make(int k, double ms, double mc, double delta, double D = 1.0, int dim = 1) {
    ProblemParams p;
    p.k = k;
    p.ms = ms;
    p.mc = mc;
    p.delta = delta;
    p.D = D;
    p.dim = dim;
    return p;
}

} // namespace

TEST_CASE("mode and epsilon") {
    CHECK(mode_of(make(1, 1, 0.5, 0)) == Mode::Fast);
    CHECK(mode_of(make(1, 1, 1.0, 0)) == Mode::Slow);
    CHECK(mode_of(make(1, 1, 1.2, 0.5)) == Mode::Fast);
    CHECK(derive_epsilon(make(1, 1, 0.5, 0), Algo::Ums) == doctest::Approx(0.5));
    CHECK(derive_epsilon(make(1, 1, 0.1, 0), Algo::Wms) == doctest::Approx(0.5));
    CHECK(derive_epsilon(make(1, 1, 0.1, 0), Algo::Ums) == doctest::Approx(0.9));
    CHECK(derive_epsilon(make(1, 1, 2.0, 0.5), Algo::Ums) == 0.0);
}

TEST_CASE("ums: a server that cannot reach the request moves the closest server at the reduced cap") {
    const auto p = make(1, 1.0, 5.0, 0.5);
    MobileState s(p, Algo::Ums, std::make_unique<GreedyGuide>(Configuration{{0}}), {{0}});
    const auto rep = ums_step(s, {5});
    CHECK(rep.branch == Branch::Greedy);
    CHECK(rep.mover_cap == 1.25);
    CHECK(s.a[0][0] == doctest::Approx(1.25));
    CHECK(rep.serving == doctest::Approx(3.75));
}

TEST_CASE("ums: a server already on the request stays") {
    const auto p = make(2, 1.0, 0.5, 0.0);
    MobileState s(p, Algo::Ums, std::make_unique<GreedyGuide>(Configuration{{0}, {3}}), {{0}, {3}});
    const auto rep = ums_step(s, {3});
    CHECK(rep.branch == Branch::Reach);
    CHECK(rep.displacement[1] == 0.0);
    CHECK(rep.serving == 0.0);
    CHECK(rep.movement == 0.0);
}

TEST_CASE("ums needs a guide server on the request") {
    const auto p = make(1, 1.0, 0.5, 0.0);
    MobileState s(p, Algo::Ums, std::make_unique<PageCounterGuide>(Configuration{{0}}, 1.0), {{0}});
    CHECK_THROWS_AS((void)ums_step(s, {0.5}), ContractError);
}

TEST_CASE("ums in fast mode serves every request once warmed up") {
    const auto p = make(2, 1.0, 0.8, 0.0, 1.0, 2);
    const auto trace = gen_local_walk(200, 2, p.mc, 1.0, 5, {2, 0.0});
    RunOptions opts;
    opts.sim = SimTag::Greedy;
    const auto res = run(trace, p, opts);
    CHECK(res.mode == Mode::Fast);
    CHECK_FALSE(res.projected);
    for (const auto& st : res.steps) {
        CHECK(st.branch == Branch::Reach);
        CHECK(st.serving == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("wms: slow mode step caps the closest server") {
    const auto p = make(1, 1.0, 10.0, 0.5, 2.0);
    MobileState s(p, Algo::Wms, std::make_unique<PageCounterGuide>(Configuration{{0}}, 2.0), {{0}});
    CHECK(s.mode == Mode::Slow);
    const auto rep = wms_step(s, {10});
    CHECK(rep.branch == Branch::Tentative);
    CHECK(rep.mover_cap == doctest::Approx(1.25));
    CHECK(s.a[0][0] == doctest::Approx(1.25));
    CHECK(rep.serving == doctest::Approx(8.75));
    CHECK(s.ledger.grand_total() == doctest::Approx(8.75 + 2.5));
}

TEST_CASE("wms: closest server on the request freezes everyone") {
    const auto p = make(2, 1.0, 0.5, 0.0, 2.0);
    MobileState s(p, Algo::Wms, std::make_unique<GreedyGuide>(Configuration{{-3}, {7}}), {{0}, {4}});
    const auto rep = wms_step(s, {4});
    CHECK(rep.movement == 0.0);
    CHECK(s.a == Configuration{{0}, {4}});
}

TEST_CASE("wms: falls back to the matching at ms when another server overtakes") {
    const auto p = make(2, 1.0, 0.5, 0.0, 2.0);
    MobileState s(p, Algo::Wms, std::make_unique<GreedyGuide>(Configuration{{2.5}, {2.9}}), {{1.01}, {2.9}});
    const auto rep = wms_step(s, {2});
    CHECK(rep.branch == Branch::Fallback);
    CHECK(rep.mover == 1);
    CHECK(rep.mover_cap == 1.0);
    CHECK(s.a[0][0] == doctest::Approx(2.0));
    CHECK(s.a[1][0] == doctest::Approx(2.9));
}

TEST_CASE("stationary trace costs nothing") {
    Trace t;
    t.start = {{0}, {0}};
    t.requests.assign(10, Point{0});
    for (auto algo : {Algo::Ums, Algo::Wms, Algo::Simple}) {
        RunOptions opts;
        opts.algo = algo;
        const auto res = run(t, make(2, 1.0, 0.5, 0.0, 2.0), opts);
        CHECK(res.ledger.grand_total() == 0.0);
    }
}

TEST_CASE("simple algorithm on the two-server counterexample pays the quadratic term") {
    const auto inst = gen_simple_counterexample(100, 10, 1.0);
    RunOptions opts;
    opts.algo = Algo::Simple;
    opts.sim = SimTag::Scripted;
    opts.project = ProjectMode::Off;
    opts.script = inst.guide_script;
    const auto res = run(inst.trace, inst.params, opts);
    CHECK(res.ledger.grand_total() >= 100.0 + (100.0 - 30.0) * 10.0);
}

TEST_CASE("run rejects traces that break locality") {
    Trace t;
    t.start = {{0}};
    t.requests = {{0}, {3}};
    CHECK_THROWS_AS((void)run(t, make(1, 1.0, 1.0, 0.0), {}), InputError);
}

TEST_CASE("slow mode enables projection automatically") {
    const auto p = make(1, 1.0, 2.0, 0.0);
    const auto t = gen_local_walk(30, 1, 2.0, 1.0, 1, {1, 0.0});
    const auto res = run(t, p, {});
    CHECK(res.mode == Mode::Slow);
    CHECK(res.projected);
    RunOptions off;
    off.project = ProjectMode::Off;
    CHECK_FALSE(run(t, p, off).projected);
}

TEST_CASE("algorithm and branch names") {
    CHECK(parse_algo("wms") == Algo::Wms);
    CHECK(to_string(Algo::Simple) == "simple");
    CHECK(parse_branch(to_string(Branch::Fallback)) == Branch::Fallback);
    CHECK(parse_project_mode("off") == ProjectMode::Off);
    CHECK_THROWS_AS((void)parse_algo("fast"), InputError);
}
