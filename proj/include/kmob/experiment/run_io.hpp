#pragma once

#include <kmob/core/trace.hpp>
#include <kmob/mobile/mobile.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace kmob {

/// Formats a double with 17 significant digits ("%.17g"), the form used in every CSV.
[[nodiscard]] std::string fmt17(double v);

/// A run together with the trace it ran on; this is what `simulate` writes and
/// `verify` reads back.
struct RunArtifact {
    RunResult run;
    Trace trace;
};

[[nodiscard]] nlohmann::json params_to_json(const ProblemParams& p);
[[nodiscard]] ProblemParams params_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json run_to_json(const RunResult& run, const Trace& trace);

/// Inverse of run_to_json. Ledgers are rebuilt from the per-step records.
/// Throws InputError on malformed input.
[[nodiscard]] RunArtifact run_from_json(const nlohmann::json& j);

void save_run(const std::filesystem::path& path, const RunResult& run, const Trace& trace);
[[nodiscard]] RunArtifact load_run(const std::filesystem::path& path);

/// Per-step CSV: t,serving,movement,psi. `psi` may be empty (column left blank)
/// or hold n+1 values, psi[0] being the start value.
void write_step_csv(std::ostream& out, const RunResult& run, const std::vector<double>& psi = {});

} // namespace kmob
