#pragma once

#include <kmob/adversary/generators.hpp>
#include <kmob/mobile/mobile.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kmob {

using Setting = std::pair<std::string, std::string>;

/// What to run: an instance source, an algorithm, parameters, seeds and sweep axes.
/// Every key of the flat config format maps onto one field (see apply_setting).
struct ExperimentSpec {
    std::string construction = "walk";  ///< thm3 | thm4 | simple-cx | walk | trace
    std::string trace_path;
    Algo algo = Algo::Ums;
    std::optional<SimTag> sim;
    ProjectMode project = ProjectMode::Auto;
    ProblemParams params;
    int x = 64;
    int y = 0;  ///< simple-cx; 0 means ceil(sqrt(x))
    int n = 20;
    double step_scale = 1.0;
    double start_spread = 0.0;
    bool enumerate_z = true;
    std::string reference = "auto";  ///< auto | certificate | dp | none
    int grid_points = 41;
    std::vector<std::uint64_t> seeds{1};
    std::vector<std::string> checks;  ///< speed | fast-potential | projection-bound
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
};

/// Sets one key. Throws InputError for unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
[[nodiscard]] std::vector<Setting> read_settings(std::istream& in);

/// Builds a spec from settings. A comma-separated value turns its key into a sweep
/// axis (seeds and checks are plain lists). Later settings override earlier ones.
[[nodiscard]] ExperimentSpec spec_from_settings(const std::vector<Setting>& settings);

struct RunRecord {
    std::vector<Setting> point;  ///< axis values of this run
    std::uint64_t seed = 0;
    std::size_t sub_runs = 0;    ///< instances averaged (all Z choices in enumerate mode)
    double online_cost = 0.0;
    double reference_cost = 0.0;
    std::string reference_kind;  ///< certificate | dp | none
    std::optional<double> ratio;  ///< online / reference; empty when the reference is 0 or absent
    std::map<std::string, bool> checks;
    bool ok = true;
};

/// Runs the cross product of sweep axes and seeds, in axis order then seed order.
/// Module errors are rethrown with the failing point and seed in the message.
[[nodiscard]] std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

[[nodiscard]] nlohmann::json records_to_json(const std::vector<RunRecord>& records);

/// CSV with columns axis,value,mean_ratio,min_ratio,max_ratio,runs, one row per
/// distinct axis value in first-seen order. Records without a ratio are skipped.
/// Multiple axes are joined with '+'. Throws InputError when records disagree on
/// their axes. No records gives the header alone.
[[nodiscard]] std::string emit_ratio_table(const std::vector<RunRecord>& records);

/// Instances a spec point expands to for one seed (several in enumerate mode).
[[nodiscard]] std::vector<GeneratedInstance> build_instances(const ExperimentSpec& spec, std::uint64_t seed);

} // namespace kmob
