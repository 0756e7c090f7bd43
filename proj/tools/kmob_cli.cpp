// Command-line front end: simulate, generate, optimum, verify, sweep.

#include <kmob/adversary/generators.hpp>
#include <kmob/core/error.hpp>
#include <kmob/core/trace_io.hpp>
#include <kmob/experiment/experiment.hpp>
#include <kmob/experiment/run_io.hpp>
#include <kmob/io/json_points.hpp>
#include <kmob/mobile/mobile.hpp>
#include <kmob/offline/checkers.hpp>
#include <kmob/offline/dp.hpp>
#include <kmob/offline/helper.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kViolation = 1, kInput = 2, kResource = 3 };

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw kmob::InputError("cannot write '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json margins_to_json(const kmob::MarginReport& m) {
    return {{"checked", m.checked},
            {"flagged", m.flagged},
            {"min_margin", m.min_margin},
            {"margin", m.margin},
            {"psi", m.psi},
            {"ok", m.ok()}};
}

// Offline trajectory for the slow-mode checks: the certificate if present,
// otherwise the grid optimum on the line.
std::vector<kmob::Configuration> offline_for(const kmob::Trace& trace, const kmob::ProblemParams& params) {
    if (trace.certificate) return *trace.certificate;
    if (params.dim != 1 || params.k > 2) {
        throw kmob::UnsupportedError("run has no certificate and the grid optimum needs dim 1 and k <= 2");
    }
    return kmob::dp_optimum(trace, params, kmob::GridSpec{0.0, 41}).trajectory;
}

// Flags shared by simulate and sweep that feed ProblemParams.
struct ParamFlags {
    int k = 0;
    double ms = 0, mc = 0, delta = 0, D = 0;
    CLI::Option* k_opt = nullptr;
    CLI::Option* ms_opt = nullptr;
    CLI::Option* mc_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
    CLI::Option* D_opt = nullptr;

    void add(CLI::App* app) {
        k_opt = app->add_option("--k", k, "number of servers");
        ms_opt = app->add_option("--ms", ms, "offline server speed");
        mc_opt = app->add_option("--mc", mc, "request locality");
        delta_opt = app->add_option("--delta", delta, "online speed augmentation");
        D_opt = app->add_option("--D", D, "movement weight");
    }
    void apply(kmob::ProblemParams& p) const {
        if (k_opt->count()) p.k = k;
        if (ms_opt->count()) p.ms = ms;
        if (mc_opt->count()) p.mc = mc;
        if (delta_opt->count()) p.delta = delta;
        if (D_opt->count()) p.D = D;
    }
    std::vector<kmob::Setting> settings() const {
        std::vector<kmob::Setting> s;
        if (k_opt->count()) s.emplace_back("k", std::to_string(k));
        if (ms_opt->count()) s.emplace_back("ms", kmob::fmt17(ms));
        if (mc_opt->count()) s.emplace_back("mc", kmob::fmt17(mc));
        if (delta_opt->count()) s.emplace_back("delta", kmob::fmt17(delta));
        if (D_opt->count()) s.emplace_back("D", kmob::fmt17(D));
        return s;
    }
};

std::vector<kmob::Setting> read_config_file(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw kmob::InputError("cannot open config '" + path + "'");
    return kmob::read_settings(in);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-mobile server simulator"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run an online algorithm on a trace");
    std::string sim_trace, sim_out, sim_csv, sim_config, sim_algo, sim_guide, sim_project;
    std::uint64_t sim_seed = 0;
    ParamFlags sim_params;
    sim->add_option("--trace", sim_trace, "trace file");
    sim->add_option("--out", sim_out, "run JSON (stdout if omitted)");
    sim->add_option("--csv", sim_csv, "per-step CSV t,serving,movement,psi");
    sim->add_option("--config", sim_config, "key = value file; flags override it");
    sim->add_option("--algo", sim_algo, "ums | wms | simple");
    sim->add_option("--sim", sim_guide, "greedy | dc-line | wfa | pm-counter | scripted");
    sim->add_option("--project", sim_project, "auto | on | off");
    sim->add_option("--seed", sim_seed, "accepted for symmetry; simulation is deterministic");
    sim_params.add(sim);

    // generate
    auto* gen = app.add_subcommand("generate", "write a lower-bound or random-walk trace");
    std::string gen_construction = "walk", gen_out;
    int gen_x = 64, gen_y = 0, gen_k = 2, gen_n = 20, gen_dim = 1;
    double gen_ms = 1.0, gen_mc = 0.0, gen_D = 1.0, gen_delta = 0.0, gen_step = 1.0, gen_spread = 0.0;
    std::uint64_t gen_seed = 1;
    std::vector<int> gen_choices;
    gen->add_option("--construction", gen_construction, "thm3 | thm4 | simple-cx | walk")
        ->check(CLI::IsMember({"thm3", "thm4", "simple-cx", "walk"}));
    gen->add_option("--x", gen_x);
    gen->add_option("--y", gen_y, "simple-cx backtrack length (default ceil(sqrt x))");
    gen->add_option("--k", gen_k);
    gen->add_option("--n", gen_n, "walk length");
    gen->add_option("--dim", gen_dim, "walk dimension");
    gen->add_option("--ms", gen_ms);
    gen->add_option("--mc", gen_mc, "request locality (default ms)");
    gen->add_option("--D", gen_D);
    gen->add_option("--delta", gen_delta);
    gen->add_option("--step-scale", gen_step, "walk step length as a fraction of mc");
    gen->add_option("--start-spread", gen_spread, "walk start radius of servers 1..k-1");
    gen->add_option("--choices", gen_choices, "explicit Z choices (otherwise drawn from the seed)");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out, "trace file; metadata goes to <out>.meta.json")->required();

    // optimum
    auto* opt = app.add_subcommand("optimum", "grid optimum on the line (k <= 2)");
    std::string opt_trace, opt_out;
    double opt_h = 0.0;
    int opt_points = 0;
    opt->add_option("--trace", opt_trace)->required();
    auto* grid_h = opt->add_option("--grid", opt_h, "grid spacing h");
    auto* grid_n = opt->add_option("--points", opt_points, "number of grid points");
    grid_h->excludes(grid_n);
    opt->add_option("--out", opt_out);

    // verify
    auto* ver = app.add_subcommand("verify", "check a property on a recorded run");
    std::string ver_property, ver_run, ver_out;
    double ver_sigma = 1.0;
    std::optional<double> ver_Y;
    double ver_delta = 0.5;
    std::size_t ver_samples = 10000;
    std::uint64_t ver_seed = 1;
    ver->add_option("--property", ver_property)
        ->required()
        ->check(CLI::IsMember(
            {"fast-potential", "slow-potential", "helper-invariants", "lemma-geo", "projection-bound"}));
    ver->add_option("--run", ver_run, "run JSON written by simulate");
    ver->add_option("--sigma", ver_sigma, "helper constant scale");
    ver->add_option("--Y", ver_Y, "slow potential coefficient");
    ver->add_option("--delta", ver_delta, "lemma-geo delta");
    ver->add_option("--samples", ver_samples, "lemma-geo sample count");
    ver->add_option("--seed", ver_seed, "lemma-geo seed");
    ver->add_option("--out", ver_out);

    // sweep
    auto* swp = app.add_subcommand("sweep", "run a config over sweep axes and seeds");
    std::string swp_config, swp_out, swp_table;
    std::vector<std::string> swp_set;
    ParamFlags swp_params;
    swp->add_option("--config", swp_config, "key = value file")->required();
    swp->add_option("--set", swp_set, "extra key=value, overrides the file");
    swp->add_option("--out", swp_out, "aggregate JSON (stdout if omitted)");
    swp->add_option("--table", swp_table, "ratio table CSV");
    swp_params.add(swp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*sim) {
            auto settings = read_config_file(sim_config);
            std::string trace_path = sim_trace;
            std::string algo = "ums", guide = "auto", project = "auto";
            for (const auto& [key, value] : settings) {
                if (key == "trace" && trace_path.empty()) trace_path = value;
                if (key == "algo") algo = value;
                if (key == "sim") guide = value;
                if (key == "project") project = value;
            }
            if (!sim_algo.empty()) algo = sim_algo;
            if (!sim_guide.empty()) guide = sim_guide;
            if (!sim_project.empty()) project = sim_project;
            if (trace_path.empty()) throw kmob::InputError("simulate needs --trace");

            auto file = kmob::load_trace(trace_path);
            kmob::ExperimentSpec probe;
            probe.params = file.params;
            for (const auto& [key, value] : settings) {
                if (key == "k" || key == "ms" || key == "mc" || key == "delta" || key == "D") {
                    kmob::apply_setting(probe, key, value);
                }
            }
            auto params = probe.params;
            sim_params.apply(params);

            kmob::RunOptions opts;
            opts.algo = kmob::parse_algo(algo);
            if (guide != "auto") opts.sim = kmob::parse_sim_tag(guide);
            opts.project = kmob::parse_project_mode(project);
            if (opts.sim == kmob::SimTag::Scripted) {
                throw kmob::UnsupportedError("the scripted guide needs a script; use sweep with a construction");
            }
            if (opts.algo == kmob::Algo::Wms && params.D < 2.0) {
                std::cerr << "warning: wms with D < 2 runs unmodified; --algo ums suits this regime\n";
            }
            const auto run = kmob::run(file.trace, params, opts);
            write_json(sim_out, kmob::run_to_json(run, file.trace));
            if (!sim_csv.empty()) {
                std::vector<double> psi;
                if (run.mode == kmob::Mode::Fast && run.algo != kmob::Algo::Simple) {
                    psi = kmob::check_fast_potential(run).psi;
                }
                std::ostringstream csv;
                kmob::write_step_csv(csv, run, psi);
                write_text(sim_csv, csv.str());
            }
            return kOk;
        }

        if (*gen) {
            kmob::GeneratedInstance inst;
            const double mc = gen_mc > 0.0 ? gen_mc : gen_ms;
            auto pick = [&](int k) { return gen_choices.empty() ? kmob::sample_choices(k, gen_seed) : gen_choices; };
            if (gen_construction == "thm3") {
                inst = kmob::gen_thm3(gen_k, gen_x, gen_D, gen_ms, pick(gen_k));
            } else if (gen_construction == "thm4") {
                inst = kmob::gen_thm4(gen_k, gen_x, gen_ms, mc, gen_D, pick(gen_k));
            } else if (gen_construction == "simple-cx") {
                const int y = gen_y > 0 ? gen_y : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(gen_x))));
                inst = kmob::gen_simple_counterexample(gen_x, y, gen_ms);
                inst.params.D = gen_D;
            } else {
                inst.construction = "walk";
                inst.params.k = gen_k;
                inst.params.ms = gen_ms;
                inst.params.mc = mc;
                inst.params.D = gen_D;
                inst.params.dim = gen_dim;
                inst.trace = kmob::gen_local_walk(gen_n, gen_dim, mc, gen_step, gen_seed, {gen_k, gen_spread});
            }
            inst.params.delta = gen_delta;
            inst.params.validate();
            kmob::save_trace(gen_out, {inst.params, inst.trace});

            json meta{{"construction", inst.construction},
                      {"params", kmob::params_to_json(inst.params)},
                      {"seed", gen_seed},
                      {"offline_cost_bound", inst.offline_cost_bound},
                      {"online_cost_lower_bound", inst.online_cost_lower_bound
                                                      ? json(*inst.online_cost_lower_bound)
                                                      : json(nullptr)},
                      {"choices", inst.choices},
                      {"z", inst.z},
                      {"phase2_start", inst.phase2_start},
                      {"guide_script", inst.guide_script}};
            if (inst.trace.certificate) {
                json cert = json::array();
                for (const auto& c : *inst.trace.certificate) cert.push_back(kmob::io::config_to_json(c));
                meta["certificate"] = cert;
                meta["certificate_cost"] = kmob::trajectory_cost(inst.trace, *inst.trace.certificate, inst.params.D);
            }
            write_json(gen_out + ".meta.json", meta);
            return kOk;
        }

        if (*opt) {
            auto file = kmob::load_trace(opt_trace);
            if (opt_h <= 0.0 && opt_points <= 0) opt_points = 41;
            const auto res = kmob::dp_optimum(file.trace, file.params, kmob::GridSpec{opt_h, opt_points});
            json traj = json::array();
            for (const auto& c : res.trajectory) traj.push_back(kmob::io::config_to_json(c));
            write_json(opt_out, {{"cost", res.cost},
                                 {"h", res.h},
                                 {"grid_points", res.grid.size()},
                                 {"slack", kmob::discretization_slack(res.h, file.trace.size(), file.params)},
                                 {"trajectory", traj}});
            return kOk;
        }

        if (*ver) {
            if (ver_property == "lemma-geo") {
                const auto rep = kmob::check_lemma_geo(ver_samples, ver_delta, ver_seed);
                write_json(ver_out, {{"property", ver_property},
                                     {"delta", ver_delta},
                                     {"samples", rep.samples},
                                     {"violations", rep.violations},
                                     {"worst_margin", rep.worst_margin},
                                     {"ok", rep.violations == 0}});
                return rep.violations == 0 ? kOk : kViolation;
            }
            if (ver_run.empty()) throw kmob::InputError("--run is required for " + ver_property);
            const auto art = kmob::load_run(ver_run);
            const auto& run = art.run;
            json out{{"property", ver_property}};
            bool ok = true;
            if (ver_property == "fast-potential") {
                const auto rep = kmob::check_fast_potential(run);
                const auto coef = kmob::fast_coefficients(run.params, run.algo);
                out["psi_coefficient"] = coef.psi;
                out["bound"] = coef.bound;
                out["report"] = margins_to_json(rep);
                ok = rep.ok();
            } else if (ver_property == "projection-bound") {
                const auto rep = kmob::audit_projection(run);
                const auto speed = kmob::audit_speed(run);
                out["steps"] = rep.steps;
                out["violations"] = rep.violations;
                out["max_distance"] = rep.max_distance;
                out["radius"] = rep.radius;
                out["cost_ratio"] = rep.cost_ratio;
                out["speed_violations"] = speed.violations + speed.mover_violations;
                ok = rep.ok() && speed.ok();
            } else {
                const auto offline = offline_for(art.trace, run.params);
                const auto online = kmob::online_trajectory(run);
                const auto helper =
                    kmob::simulate_helper(art.trace.requests, offline, online, run.params, ver_sigma);
                if (ver_property == "helper-invariants") {
                    const auto a =
                        kmob::audit_helper(helper, art.trace.requests, offline, online, run.params, ver_sigma);
                    out["steps"] = a.steps;
                    out["speed_violations"] = a.speed_violations;
                    out["max_speed"] = a.max_speed;
                    out["guard_fired"] = a.guard_fired;
                    out["guard_speed_violations"] = a.guard_speed_violations;
                    out["guard_outer_violations"] = a.guard_outer_violations;
                    out["distance_violations"] = a.distance_violations;
                    out["worst_distance_margin"] = a.worst_distance_margin;
                    out["vacuous"] = a.guard_fired == 0;
                    ok = a.ok();
                } else {
                    const auto rep =
                        kmob::check_slow_potential(run, art.trace, offline, helper, ver_sigma, ver_Y);
                    out["Y"] = rep.Y;
                    out["vacuous_steps"] = rep.vacuous;
                    out["boundary_gap"] = rep.boundary_gap;
                    out["phi"] = rep.phi;
                    out["report"] = margins_to_json(rep.margins);
                    // Diagnostic only: the constants are not claimed tight at this scale.
                    out["diagnostic"] = true;
                    ok = true;
                }
            }
            out["ok"] = ok;
            write_json(ver_out, out);
            return ok ? kOk : kViolation;
        }

        if (*swp) {
            auto settings = read_config_file(swp_config);
            for (const auto& s : swp_params.settings()) settings.push_back(s);
            for (const auto& kv : swp_set) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw kmob::InputError("--set expects key=value, got '" + kv + "'");
                settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
            const auto spec = kmob::spec_from_settings(settings);
            const auto records = kmob::run_experiment(spec);
            const auto agg = kmob::records_to_json(records);
            write_json(swp_out, agg);
            if (!swp_table.empty()) write_text(swp_table, kmob::emit_ratio_table(records));
            return agg["all_ok"].get<bool>() ? kOk : kViolation;
        }
    } catch (const kmob::ResourceError& e) {
        std::cerr << "resource budget exceeded: " << e.what() << "\n";
        return kResource;
    } catch (const kmob::ContractError& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kViolation;
    } catch (const kmob::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kInput;
    } catch (const kmob::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    }
    return kOk;
}
