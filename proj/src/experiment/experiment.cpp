#include <kmob/experiment/experiment.hpp>

#include <kmob/core/error.hpp>
#include <kmob/core/trace_io.hpp>
#include <kmob/experiment/run_io.hpp>
#include <kmob/offline/checkers.hpp>
#include <kmob/offline/dp.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace kmob {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InputError("setting '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw InputError("setting '" + key + "' expects an integer");
    return static_cast<int>(d);
}

std::uint64_t to_seed(const std::string& v) {
    try {
        std::size_t used = 0;
        const auto s = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return s;
    } catch (const std::exception&) {
        throw InputError("seed '" + v + "' is not a non-negative integer");
    }
}

bool is_list_key(const std::string& key) { return key == "seeds" || key == "checks"; }

} // namespace

void apply_setting(ExperimentSpec& s, const std::string& key, const std::string& value) {
    if (key == "construction") {
        static const std::vector<std::string> known{"thm3", "thm4", "simple-cx", "walk", "trace"};
        if (std::find(known.begin(), known.end(), value) == known.end()) {
            throw InputError("unknown construction '" + value + "'");
        }
        s.construction = value;
    } else if (key == "trace") {
        s.trace_path = value;
    } else if (key == "algo") {
        s.algo = parse_algo(value);
    } else if (key == "sim") {
        if (value == "auto") {
            s.sim.reset();
        } else {
            s.sim = parse_sim_tag(value);
        }
    } else if (key == "project") {
        s.project = parse_project_mode(value);
    } else if (key == "k") {
        s.params.k = to_int(key, value);
    } else if (key == "ms") {
        s.params.ms = to_double(key, value);
    } else if (key == "mc") {
        s.params.mc = to_double(key, value);
    } else if (key == "delta") {
        s.params.delta = to_double(key, value);
    } else if (key == "D") {
        s.params.D = to_double(key, value);
    } else if (key == "dim") {
        s.params.dim = to_int(key, value);
    } else if (key == "x") {
        s.x = to_int(key, value);
    } else if (key == "y") {
        s.y = to_int(key, value);
    } else if (key == "n") {
        s.n = to_int(key, value);
    } else if (key == "step_scale") {
        s.step_scale = to_double(key, value);
    } else if (key == "start_spread") {
        s.start_spread = to_double(key, value);
    } else if (key == "z") {
        if (value != "enumerate" && value != "sample") throw InputError("z expects enumerate or sample");
        s.enumerate_z = value == "enumerate";
    } else if (key == "reference") {
        if (value != "auto" && value != "certificate" && value != "dp" && value != "none") {
            throw InputError("reference expects auto, certificate, dp or none");
        }
        s.reference = value;
    } else if (key == "grid_points") {
        s.grid_points = to_int(key, value);
    } else if (key == "seeds") {
        s.seeds.clear();
        for (const auto& v : split_list(value)) s.seeds.push_back(to_seed(v));
        if (s.seeds.empty()) throw InputError("seeds must not be empty");
    } else if (key == "checks") {
        s.checks.clear();
        for (const auto& v : split_list(value)) {
            if (v != "speed" && v != "fast-potential" && v != "projection-bound") {
                throw InputError("unknown check '" + v + "'");
            }
            s.checks.push_back(v);
        }
    } else {
        throw InputError("unknown setting '" + key + "'");
    }
}

std::vector<Setting> read_settings(std::istream& in) {
    std::vector<Setting> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

ExperimentSpec spec_from_settings(const std::vector<Setting>& settings) {
    ExperimentSpec spec;
    std::vector<Setting> scalars;
    for (const auto& [key, value] : settings) {
        auto it = std::find_if(spec.axes.begin(), spec.axes.end(), [&](const auto& a) { return a.first == key; });
        const bool sweep = !is_list_key(key) && value.find(',') != std::string::npos;
        if (sweep) {
            auto values = split_list(value);
            // Validate every value up front so errors point at the config, not a run.
            for (const auto& v : values) {
                ExperimentSpec probe;
                apply_setting(probe, key, v);
            }
            if (it != spec.axes.end()) {
                it->second = std::move(values);
            } else {
                spec.axes.emplace_back(key, std::move(values));
            }
        } else {
            if (it != spec.axes.end()) spec.axes.erase(it);
            scalars.emplace_back(key, value);
        }
    }
    for (const auto& [key, value] : scalars) {
        if (std::find_if(spec.axes.begin(), spec.axes.end(), [&](const auto& a) { return a.first == key; }) ==
            spec.axes.end()) {
            apply_setting(spec, key, value);
        }
    }
    return spec;
}

std::vector<GeneratedInstance> build_instances(const ExperimentSpec& spec, std::uint64_t seed) {
    std::vector<GeneratedInstance> out;
    const auto& p = spec.params;
    auto with_run_params = [&](GeneratedInstance inst) {
        inst.params.delta = p.delta;
        inst.params.D = p.D;
        return inst;
    };
    if (spec.construction == "thm3" || spec.construction == "thm4") {
        const auto choices = spec.enumerate_z ? all_choices(p.k) : std::vector<std::vector<int>>{sample_choices(p.k, seed)};
        for (const auto& c : choices) {
            auto inst = spec.construction == "thm3" ? gen_thm3(p.k, spec.x, p.D, p.ms, c)
                                                    : gen_thm4(p.k, spec.x, p.ms, p.mc, p.D, c);
            out.push_back(with_run_params(std::move(inst)));
        }
    } else if (spec.construction == "simple-cx") {
        const int y = spec.y > 0 ? spec.y : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.x))));
        out.push_back(with_run_params(gen_simple_counterexample(spec.x, y, p.ms)));
    } else if (spec.construction == "walk") {
        GeneratedInstance inst;
        inst.construction = "walk";
        inst.params = p;
        inst.trace = gen_local_walk(spec.n, p.dim, p.mc, spec.step_scale, seed, {p.k, spec.start_spread});
        out.push_back(std::move(inst));
    } else {
        if (spec.trace_path.empty()) throw InputError("construction 'trace' needs a trace path");
        auto file = load_trace(spec.trace_path);
        GeneratedInstance inst;
        inst.construction = "trace";
        inst.params = file.params;
        inst.trace = std::move(file.trace);
        out.push_back(std::move(inst));
    }
    return out;
}

namespace {

struct Reference {
    double cost = 0.0;
    std::string kind = "none";
};

Reference reference_cost(const ExperimentSpec& spec, const GeneratedInstance& inst) {
    const auto& p = inst.params;
    const bool has_cert = inst.trace.certificate.has_value();
    const bool dp_ok = p.dim == 1 && p.k <= 2 && inst.trace.size() <= 30;
    std::string want = spec.reference;
    if (want == "auto") want = has_cert ? "certificate" : (dp_ok ? "dp" : "none");
    if (want == "certificate") {
        if (!has_cert) throw InputError("reference 'certificate' but the instance has none");
        return {trajectory_cost(inst.trace, *inst.trace.certificate, p.D), "certificate"};
    }
    if (want == "dp") return {dp_optimum(inst.trace, p, GridSpec{0.0, spec.grid_points}).cost, "dp"};
    return {};
}

RunRecord run_point(const ExperimentSpec& spec, std::uint64_t seed) {
    RunRecord rec;
    rec.seed = seed;
    double online = 0.0;
    double reference = 0.0;
    const auto instances = build_instances(spec, seed);
    for (const auto& inst : instances) {
        RunOptions opts;
        opts.algo = spec.algo;
        opts.sim = spec.sim;
        opts.project = spec.project;
        if (opts.sim == SimTag::Scripted) opts.script = inst.guide_script;
        const auto run = kmob::run(inst.trace, inst.params, opts);
        online += run.ledger.grand_total();
        const auto ref = reference_cost(spec, inst);
        reference += ref.cost;
        rec.reference_kind = ref.kind;

        for (const auto& check : spec.checks) {
            bool ok = true;
            if (check == "speed") {
                ok = audit_speed(run).ok();
            } else if (check == "fast-potential") {
                ok = run.mode == Mode::Fast && check_fast_potential(run).ok();
            } else if (check == "projection-bound") {
                ok = !run.projected || audit_projection(run).ok();
            }
            auto [it, inserted] = rec.checks.emplace(check, ok);
            if (!inserted) it->second = it->second && ok;
            rec.ok = rec.ok && ok;
        }
    }
    rec.sub_runs = instances.size();
    rec.online_cost = online / static_cast<double>(instances.size());
    rec.reference_cost = reference / static_cast<double>(instances.size());
    if (rec.reference_kind != "none" && rec.reference_cost > 0.0) rec.ratio = rec.online_cost / rec.reference_cost;
    return rec;
}

std::string point_label(const std::vector<Setting>& point, std::uint64_t seed) {
    std::string s;
    for (const auto& [k, v] : point) s += k + "=" + v + " ";
    return s + "seed=" + std::to_string(seed);
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
    if (spec.seeds.empty()) throw InputError("seeds must not be empty");
    std::vector<RunRecord> out;
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (const auto& axis : spec.axes) {
        if (axis.second.empty()) return out;
    }
    while (true) {
        ExperimentSpec point = spec;
        std::vector<Setting> values;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const auto& [key, list] = spec.axes[a];
            apply_setting(point, key, list[idx[a]]);
            values.emplace_back(key, list[idx[a]]);
        }
        for (auto seed : spec.seeds) {
            try {
                point.params.validate();
                auto rec = run_point(point, seed);
                rec.point = values;
                out.push_back(std::move(rec));
            } catch (const ResourceError& e) {
                throw ResourceError(point_label(values, seed) + ": " + e.what());
            } catch (const UnsupportedError& e) {
                throw UnsupportedError(point_label(values, seed) + ": " + e.what());
            } catch (const ContractError& e) {
                throw ContractError(point_label(values, seed) + ": " + e.what());
            } catch (const InputError& e) {
                throw InputError(point_label(values, seed) + ": " + e.what());
            }
        }
        // Odometer over the axes, last axis fastest.
        std::size_t a = spec.axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < spec.axes[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
        if (spec.axes.empty()) return out;
    }
}

nlohmann::json records_to_json(const std::vector<RunRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    bool all_ok = true;
    for (const auto& r : records) {
        nlohmann::json point = nlohmann::json::object();
        for (const auto& [k, v] : r.point) point[k] = v;
        arr.push_back({{"point", point},
                       {"seed", r.seed},
                       {"sub_runs", r.sub_runs},
                       {"online_cost", r.online_cost},
                       {"reference_cost", r.reference_cost},
                       {"reference", r.reference_kind},
                       {"ratio", r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr)},
                       {"checks", r.checks},
                       {"ok", r.ok}});
        all_ok = all_ok && r.ok;
    }
    return {{"records", arr}, {"all_ok", all_ok}};
}

std::string emit_ratio_table(const std::vector<RunRecord>& records) {
    std::string csv = "axis,value,mean_ratio,min_ratio,max_ratio,runs\n";
    if (records.empty()) return csv;

    auto keys_of = [](const RunRecord& r) {
        std::string k;
        for (const auto& [key, value] : r.point) k += (k.empty() ? "" : "+") + key;
        return k;
    };
    auto value_of = [](const RunRecord& r) {
        std::string v;
        for (const auto& [key, value] : r.point) v += (v.empty() ? "" : "+") + value;
        return v;
    };
    const std::string axis = keys_of(records.front());
    struct Row {
        std::string value;
        double sum = 0.0, lo = 0.0, hi = 0.0;
        std::size_t runs = 0;
    };
    std::vector<Row> rows;
    for (const auto& r : records) {
        if (keys_of(r) != axis) throw InputError("records mix different sweep axes");
        const auto v = value_of(r);
        auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& row) { return row.value == v; });
        if (it == rows.end()) {
            rows.push_back({v});
            it = rows.end() - 1;
        }
        if (!r.ratio) continue;
        const double q = *r.ratio;
        it->lo = it->runs == 0 ? q : std::min(it->lo, q);
        it->hi = it->runs == 0 ? q : std::max(it->hi, q);
        it->sum += q;
        ++it->runs;
    }
    const std::string axis_name = axis.empty() ? "none" : axis;
    for (const auto& row : rows) {
        if (row.runs == 0) continue;
        csv += axis_name + "," + row.value + "," + fmt17(row.sum / static_cast<double>(row.runs)) + "," +
               fmt17(row.lo) + "," + fmt17(row.hi) + "," + std::to_string(row.runs) + "\n";
    }
    return csv;
}

} // namespace kmob
