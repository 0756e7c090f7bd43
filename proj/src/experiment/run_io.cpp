#include <kmob/experiment/run_io.hpp>

#include <kmob/core/error.hpp>
#include <kmob/io/json_points.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace kmob {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json params_to_json(const ProblemParams& p) {
    return json{{"dim", p.dim}, {"k", p.k}, {"ms", p.ms}, {"mc", p.mc}, {"delta", p.delta}, {"D", p.D}};
}

ProblemParams params_from_json(const json& j) {
    ProblemParams p;
    try {
        p.dim = j.at("dim").get<int>();
        p.k = j.at("k").get<int>();
        p.ms = j.at("ms").get<double>();
        p.mc = j.at("mc").get<double>();
        p.delta = j.at("delta").get<double>();
        p.D = j.at("D").get<double>();
    } catch (const json::exception& e) {
        throw InputError(std::string("params: ") + e.what());
    }
    p.validate();
    return p;
}

namespace {

json guide_cost_json(const GuideCost& c) { return json{{"serving", c.serving}, {"movement", c.movement}}; }

GuideCost guide_cost_from(const json& j) { return {j.at("serving").get<double>(), j.at("movement").get<double>()}; }

} // namespace

json run_to_json(const RunResult& run, const Trace& trace) {
    json out;
    out["params"] = params_to_json(run.params);
    out["algo"] = to_string(run.algo);
    out["mode"] = to_string(run.mode);
    out["epsilon"] = run.epsilon;
    out["projected"] = run.projected;
    out["guide"] = run.guide_name;
    out["totals"] = json{{"serving", run.ledger.serving_total()},
                         {"movement", run.ledger.movement_total()},
                         {"grand", run.ledger.grand_total()},
                         {"guide", run.guide_ledger.grand_total()},
                         {"base_guide", run.base_guide_ledger.grand_total()}};
    out["start"] = io::config_to_json(trace.start);
    json reqs = json::array();
    for (const auto& r : trace.requests) reqs.push_back(io::point_to_json(r));
    out["requests"] = std::move(reqs);
    if (trace.certificate) {
        json cert = json::array();
        for (const auto& c : *trace.certificate) cert.push_back(io::config_to_json(c));
        out["certificate"] = std::move(cert);
    }
    json steps = json::array();
    for (const auto& s : run.steps) {
        steps.push_back(json{{"t", s.t},
                             {"matching", s.matching.perm},
                             {"a", io::config_to_json(s.a)},
                             {"c", io::config_to_json(s.c)},
                             {"c_raw", io::config_to_json(s.c_raw)},
                             {"displacement", s.displacement},
                             {"mover", s.mover},
                             {"mover_cap", s.mover_cap},
                             {"branch", to_string(s.branch)},
                             {"serving", s.serving},
                             {"movement", s.movement},
                             {"guide_cost", guide_cost_json(s.guide)},
                             {"base_guide_cost", guide_cost_json(s.base_guide)}});
    }
    out["steps"] = std::move(steps);
    return out;
}

RunArtifact run_from_json(const json& j) {
    RunArtifact art;
    auto& run = art.run;
    try {
        run.params = params_from_json(j.at("params"));
        const int dim = run.params.dim;
        run.algo = parse_algo(j.at("algo").get<std::string>());
        const auto mode = j.at("mode").get<std::string>();
        if (mode != "fast" && mode != "slow") throw InputError("mode must be fast or slow");
        run.mode = mode == "fast" ? Mode::Fast : Mode::Slow;
        run.epsilon = j.at("epsilon").get<double>();
        run.projected = j.at("projected").get<bool>();
        run.guide_name = j.at("guide").get<std::string>();
        art.trace.start = io::config_from_json(j.at("start"), dim);
        run.start = art.trace.start;
        for (const auto& r : j.at("requests")) art.trace.requests.push_back(io::point_from_json(r, dim));
        if (j.contains("certificate")) {
            std::vector<Configuration> cert;
            for (const auto& c : j.at("certificate")) cert.push_back(io::config_from_json(c, dim));
            art.trace.certificate = std::move(cert);
        }
        run.ledger = CostLedger(run.params.D);
        run.guide_ledger = CostLedger(run.params.D);
        run.base_guide_ledger = CostLedger(run.params.D);
        const auto& steps = j.at("steps");
        if (steps.size() != art.trace.requests.size()) throw InputError("step count differs from request count");
        for (std::size_t t = 0; t < steps.size(); ++t) {
            const auto& js = steps[t];
            StepReport s;
            s.t = js.at("t").get<std::size_t>();
            s.request = art.trace.requests[t];
            s.matching.perm = js.at("matching").get<std::vector<int>>();
            s.a = io::config_from_json(js.at("a"), dim);
            s.c = io::config_from_json(js.at("c"), dim);
            s.c_raw = io::config_from_json(js.at("c_raw"), dim);
            s.displacement = js.at("displacement").get<std::vector<double>>();
            s.mover = js.at("mover").get<std::size_t>();
            s.mover_cap = js.at("mover_cap").get<double>();
            s.branch = parse_branch(js.at("branch").get<std::string>());
            s.serving = js.at("serving").get<double>();
            s.movement = js.at("movement").get<double>();
            s.guide = guide_cost_from(js.at("guide_cost"));
            s.base_guide = guide_cost_from(js.at("base_guide_cost"));
            const std::size_t k = static_cast<std::size_t>(run.params.k);
            if (s.a.size() != k || s.c.size() != k || s.matching.perm.size() != k || s.displacement.size() != k) {
                throw InputError("step " + std::to_string(t + 1) + " does not hold k servers");
            }
            for (int p : s.matching.perm) {
                if (p < 0 || p >= run.params.k) throw InputError("matching index out of range");
            }
            double w = 0.0;
            for (std::size_t i = 0; i < k; ++i) w += distance(s.a[i], s.c[s.matching.perm[i]]);
            s.matching.weight = w;
            run.ledger.record(s.serving, s.movement);
            run.guide_ledger.record(s.guide.serving, s.guide.movement);
            run.base_guide_ledger.record(s.base_guide.serving, s.base_guide.movement);
            run.steps.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("run file: ") + e.what());
    }
    return art;
}

void save_run(const std::filesystem::path& path, const RunResult& run, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << run_to_json(run, trace).dump(1) << '\n';
}

RunArtifact load_run(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open run file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("run file: ") + e.what());
    }
    return run_from_json(j);
}

void write_step_csv(std::ostream& out, const RunResult& run, const std::vector<double>& psi) {
    out << "t,serving,movement,psi\n";
    for (std::size_t t = 0; t < run.steps.size(); ++t) {
        const auto& s = run.steps[t];
        out << s.t << ',' << fmt17(s.serving) << ',' << fmt17(s.movement) << ',';
        if (psi.size() == run.steps.size() + 1) out << fmt17(psi[t + 1]);
        out << '\n';
    }
}

} // namespace kmob
