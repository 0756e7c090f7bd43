#pragma once

#include <kmob/core/params.hpp>
#include <kmob/core/point.hpp>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace kmob {

enum class SimTag { Greedy, DcLine, Wfa, PmCounter, Scripted };

/// Parses greedy | dc-line | wfa | pm-counter | scripted. Throws InputError otherwise.
[[nodiscard]] SimTag parse_sim_tag(std::string_view tag);
[[nodiscard]] std::string to_string(SimTag tag);

/// Cost of one guide step. Movement is raw distance; the caller applies D.
struct GuideCost {
    double serving = 0.0;
    double movement = 0.0;

    [[nodiscard]] double total(double D) const noexcept { return serving + D * movement; }
};

/// A simulated algorithm the mobile servers follow (the c_i).
///
/// k-Server guides always end a step with some server exactly on the request and
/// report zero serving cost. Page-migration guides may serve from a distance.
class Guide {
public:
    virtual ~Guide() = default;

    virtual GuideCost step(const Point& r) = 0;
    [[nodiscard]] virtual const Configuration& positions() const noexcept = 0;
    [[nodiscard]] virtual bool is_kserver() const noexcept = 0;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual std::unique_ptr<Guide> clone() const = 0;
};

// Stateless k-Server rules, usable without a Guide object.

/// Nearest server (lowest index on ties) jumps to r.
GuideCost greedy_step(Configuration& servers, const Point& r);

/// Double Coverage on the line. Throws UnsupportedError for dim != 1.
GuideCost dc_line_step(Configuration& servers, const Point& r);

class GreedyGuide final : public Guide {
public:
    explicit GreedyGuide(Configuration start) : pos_(std::move(start)) {}
    GuideCost step(const Point& r) override { return greedy_step(pos_, r); }
    [[nodiscard]] const Configuration& positions() const noexcept override { return pos_; }
    [[nodiscard]] bool is_kserver() const noexcept override { return true; }
    [[nodiscard]] std::string name() const override { return "greedy"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override { return std::make_unique<GreedyGuide>(*this); }

private:
    Configuration pos_;
};

class DoubleCoverageGuide final : public Guide {
public:
    /// Throws UnsupportedError unless every start point is one-dimensional.
    explicit DoubleCoverageGuide(Configuration start);
    GuideCost step(const Point& r) override { return dc_line_step(pos_, r); }
    [[nodiscard]] const Configuration& positions() const noexcept override { return pos_; }
    [[nodiscard]] bool is_kserver() const noexcept override { return true; }
    [[nodiscard]] std::string name() const override { return "dc-line"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override {
        return std::make_unique<DoubleCoverageGuide>(*this);
    }

private:
    Configuration pos_;
};

/// Page-migration heuristic: the nearest page serves and banks the distance as
/// credit; once the credit reaches 2*D*d it migrates onto the request.
class PageCounterGuide final : public Guide {
public:
    PageCounterGuide(Configuration start, double D);
    GuideCost step(const Point& r) override;
    [[nodiscard]] const Configuration& positions() const noexcept override { return pos_; }
    [[nodiscard]] bool is_kserver() const noexcept override { return false; }
    [[nodiscard]] std::string name() const override { return "pm-counter"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override {
        return std::make_unique<PageCounterGuide>(*this);
    }
    [[nodiscard]] const std::vector<double>& credits() const noexcept { return credit_; }

private:
    Configuration pos_;
    std::vector<double> credit_;
    double D_;
};

/// Server script[t] jumps onto the t-th request. Used to replay a fixed k-Server
/// schedule; throws InputError when the script runs out or names a bad index.
class ScriptedGuide final : public Guide {
public:
    ScriptedGuide(Configuration start, std::vector<int> script);
    GuideCost step(const Point& r) override;
    [[nodiscard]] const Configuration& positions() const noexcept override { return pos_; }
    [[nodiscard]] bool is_kserver() const noexcept override { return true; }
    [[nodiscard]] std::string name() const override { return "scripted"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override { return std::make_unique<ScriptedGuide>(*this); }

private:
    Configuration pos_;
    std::vector<int> script_;
    std::size_t t_ = 0;
};

/// Configuration budget for the work function table: KMOB_BUDGET if set to a
/// positive integer, 250000 otherwise.
[[nodiscard]] std::size_t resource_budget();

/// Builds a guide. `script` is only used by SimTag::Scripted.
[[nodiscard]] std::unique_ptr<Guide> make_guide(SimTag tag, const Configuration& start, const ProblemParams& params,
                                                std::vector<int> script = {});

/// dc-line on the line; wfa in higher dimensions when the table for `expected_steps`
/// requests fits the budget; greedy otherwise.
[[nodiscard]] SimTag default_kserver_tag(const ProblemParams& params, std::size_t expected_steps);

} // namespace kmob
