#include <doctest.h>

#include <kmob/core/error.hpp>
#include <kmob/core/trace_io.hpp>
#include <kmob/experiment/experiment.hpp>
#include <kmob/experiment/run_io.hpp>
#include <kmob/offline/checkers.hpp>

#include <filesystem>
#include <sstream>

using namespace kmob;

namespace {

ExperimentSpec parse(const std::string& text) {
    std::istringstream in(text);
    return spec_from_settings(read_settings(in));
}

} // namespace

TEST_CASE("config parsing") {
    const auto spec = parse(
        "# thm3 growth\n"
        "construction = thm3\n"
        "k = 2\n"
        "x = 64, 128\n"
        "delta = 0.5   # online augmentation\n"
        "seeds = 1,2,3\n"
        "checks = speed\n");
    CHECK(spec.construction == "thm3");
    CHECK(spec.params.delta == 0.5);
    CHECK(spec.seeds == std::vector<std::uint64_t>{1, 2, 3});
    REQUIRE(spec.axes.size() == 1);
    CHECK(spec.axes[0].first == "x");
    CHECK(spec.axes[0].second == std::vector<std::string>{"64", "128"});
    CHECK(spec.checks == std::vector<std::string>{"speed"});
}

TEST_CASE("later settings override earlier ones") {
    const auto spec = parse("k = 2\nx = 8,16\nk = 3\nx = 32\n");
    CHECK(spec.params.k == 3);
    CHECK(spec.axes.empty());
    CHECK(spec.x == 32);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse("colour = red\n"), InputError);
    CHECK_THROWS_AS(parse("k = two\n"), InputError);
    CHECK_THROWS_AS(parse("k 2\n"), InputError);
    CHECK_THROWS_AS(parse("x = 8, y\n"), InputError);
    CHECK_THROWS_AS(parse("seeds = \n"), InputError);
}

TEST_CASE("stationary trace gives an explicit null ratio") {
    const auto path = std::filesystem::temp_directory_path() / "kmob_stationary.trace";
    TraceFile f;
    f.params.k = 1;
    f.trace.start = {{0}};
    f.trace.requests.assign(5, Point{0});
    save_trace(path, f);

    ExperimentSpec spec;
    spec.construction = "trace";
    spec.trace_path = path.string();
    const auto recs = run_experiment(spec);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].online_cost == 0.0);
    CHECK(recs[0].reference_cost == 0.0);
    CHECK(recs[0].reference_kind == "dp");
    CHECK_FALSE(recs[0].ratio.has_value());
    CHECK(records_to_json(recs)["records"][0]["ratio"].is_null());
    std::filesystem::remove(path);
}

TEST_CASE("thm3 sweep ratios grow with x") {
    const auto spec = parse("construction = thm3\nk = 2\ndelta = 0.5\nx = 64,128,256\nchecks = speed\n");
    const auto recs = run_experiment(spec);
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
        CHECK(r.sub_runs == 4);
        CHECK(r.reference_kind == "certificate");
        CHECK(r.ok);
    }
    CHECK(*recs[0].ratio < *recs[1].ratio);
    CHECK(*recs[1].ratio < *recs[2].ratio);

    const auto csv = emit_ratio_table(recs);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "axis,value,mean_ratio,min_ratio,max_ratio,runs");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("x,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("aggregate json is reproducible") {
    const auto spec = parse("construction = walk\nk = 2\nmc = 0.5\nn = 25\ndim = 2\nseeds = 4,5\nchecks = speed,fast-potential\n");
    const auto a = records_to_json(run_experiment(spec)).dump(2);
    const auto b = records_to_json(run_experiment(spec)).dump(2);
    CHECK(a == b);
}

TEST_CASE("ratio table edge cases") {
    CHECK(emit_ratio_table({}) == "axis,value,mean_ratio,min_ratio,max_ratio,runs\n");

    RunRecord one;
    one.point = {{"x", "64"}};
    one.ratio = 2.5;
    CHECK(emit_ratio_table({one}) == "axis,value,mean_ratio,min_ratio,max_ratio,runs\nx,64,2.5,2.5,2.5,1\n");

    RunRecord other = one;
    other.point = {{"mc", "2"}};
    CHECK_THROWS_AS((void)emit_ratio_table({one, other}), InputError);

    RunRecord seed2 = one;
    seed2.ratio = 3.5;
    CHECK(emit_ratio_table({one, seed2}) ==
          "axis,value,mean_ratio,min_ratio,max_ratio,runs\nx,64,3,2.5,3.5,2\n");
}

TEST_CASE("failing sweep points are named") {
    const auto spec = parse("construction = thm3\nk = 2\nx = 64,60\n");
    try {
        (void)run_experiment(spec);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("x=60") != std::string::npos);
    }
}

TEST_CASE("run json round trip") {
    const auto spec = parse("construction = walk\nk = 2\nmc = 0.5\nn = 15\n");
    const auto inst = build_instances(spec, 3).front();
    const auto run = kmob::run(inst.trace, inst.params, {});
    const auto j = run_to_json(run, inst.trace);
    const auto back = run_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.run.ledger.grand_total() == run.ledger.grand_total());
    CHECK(back.run.steps.size() == run.steps.size());
    CHECK(back.trace.requests == inst.trace.requests);
    const auto m1 = check_fast_potential(run);
    const auto m2 = check_fast_potential(back.run);
    CHECK(m1.margin == m2.margin);
    CHECK(run_to_json(back.run, back.trace).dump() == j.dump());

    std::ostringstream csv;
    write_step_csv(csv, run, m1.psi);
    CHECK(csv.str().rfind("t,serving,movement,psi\n1,", 0) == 0);
    CHECK(fmt17(0.1) == "0.10000000000000001");
}
