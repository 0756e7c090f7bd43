#pragma once

#include <kmob/core/ledger.hpp>
#include <kmob/core/matching.hpp>
#include <kmob/core/params.hpp>
#include <kmob/core/trace.hpp>
#include <kmob/kserver/guide.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kmob {

/// ums and wms are the two online algorithms. simple is the matching-only variant
/// (every server follows its matched guide server, no greedy move), kept as the
/// baseline that the counterexample instance defeats.
enum class Algo { Ums, Wms, Simple };

enum class Mode { Fast, Slow };

/// Which rule moved the servers in a step.
enum class Branch {
    Reach,      ///< ums: the server matched to the request's guide server can reach it
    Greedy,     ///< ums: the closest server heads for the request at the reduced cap
    Tentative,  ///< wms: tentative movement committed
    Fallback,   ///< wms: tentative movement discarded, everyone follows the matching at ms
    Follow,     ///< simple: everyone follows the matching
};

enum class ProjectMode { Auto, On, Off };

[[nodiscard]] Algo parse_algo(std::string_view s);
[[nodiscard]] std::string to_string(Algo a);
[[nodiscard]] std::string to_string(Mode m);
[[nodiscard]] std::string to_string(Branch b);
[[nodiscard]] Branch parse_branch(std::string_view s);
[[nodiscard]] ProjectMode parse_project_mode(std::string_view s);

/// Fast iff mc < (1+delta)*ms. At equality the servers have no slack over the
/// request and the slow-mode machinery applies.
[[nodiscard]] Mode mode_of(const ProblemParams& params);

/// epsilon = ((1+delta)*ms - mc)/ms, clamped to (0,1] (ums/simple) or (0,1/2] (wms).
/// Returns 0 in slow mode.
[[nodiscard]] double derive_epsilon(const ProblemParams& params, Algo algo);

struct StepReport {
    std::size_t t = 0;  ///< 1-based step index
    Point request;
    Matching matching;  ///< online index -> guide index, computed against the pre-move servers
    Configuration a;    ///< online servers after the step
    Configuration c;    ///< guide positions the servers followed (projected when enabled)
    Configuration c_raw;  ///< positions of the underlying guide
    std::vector<double> displacement;
    std::size_t mover = 0;   ///< server the branch singles out (matched server or the closest one)
    double mover_cap = 0.0;  ///< speed cap applied to `mover`
    Branch branch = Branch::Follow;
    double serving = 0.0;
    double movement = 0.0;  ///< raw distance; cost is D * movement
    GuideCost guide;        ///< cost of the followed guide positions
    GuideCost base_guide;   ///< cost of the underlying guide
};

struct MobileState {
    ProblemParams params;
    Algo algo = Algo::Ums;
    Mode mode = Mode::Fast;
    double epsilon = 0.0;
    Configuration a;
    std::unique_ptr<Guide> guide;
    CostLedger ledger;
    std::size_t t = 0;

    MobileState(const ProblemParams& p, Algo algorithm, std::unique_ptr<Guide> g, Configuration start);
};

/// One step of UMS. Throws ContractError when the guide leaves no server on r.
StepReport ums_step(MobileState& state, const Point& r);

/// One step of WMS. The fallback fires when a server other than the closest one
/// ends strictly closer to r.
StepReport wms_step(MobileState& state, const Point& r);

/// One step of the matching-only baseline.
StepReport simple_step(MobileState& state, const Point& r);

StepReport mobile_step(MobileState& state, const Point& r);

struct RunOptions {
    Algo algo = Algo::Ums;
    std::optional<SimTag> sim;  ///< default: dc-line/wfa/greedy for ums, pm-counter for wms
    ProjectMode project = ProjectMode::Auto;
    std::vector<int> script;    ///< for SimTag::Scripted
};

struct RunResult {
    ProblemParams params;
    Algo algo = Algo::Ums;
    Mode mode = Mode::Fast;
    double epsilon = 0.0;
    bool projected = false;
    std::string guide_name;
    Configuration start;
    CostLedger ledger;
    CostLedger guide_ledger;       ///< followed guide, weighted by D
    CostLedger base_guide_ledger;  ///< underlying guide, weighted by D
    std::vector<StepReport> steps;
};

/// Runs an algorithm over a trace. Slow mode wraps the guide in the projection
/// (weighted for wms) unless `project` is Off. Throws InputError when the trace
/// fails validation.
[[nodiscard]] RunResult run(const Trace& trace, const ProblemParams& params, const RunOptions& options);

/// Guide choice used by run() when none is given.
[[nodiscard]] SimTag default_sim(const ProblemParams& params, Algo algo, std::size_t n);

} // namespace kmob
