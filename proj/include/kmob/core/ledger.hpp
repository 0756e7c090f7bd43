#pragma once

#include <vector>

namespace kmob {

/// Per-step serving and movement costs. Movement is stored as raw distance and
/// weighted by D only in the totals, so grand_total = serving + D * movement.
class CostLedger {
public:
    struct Entry {
        double serving = 0.0;
        double movement = 0.0;
    };

    explicit CostLedger(double movement_weight = 1.0) : weight_(movement_weight) {}

    /// Throws InputError on negative or non-finite entries.
    void record(double serving, double movement);

    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] double movement_weight() const noexcept { return weight_; }
    [[nodiscard]] double serving_total() const noexcept { return serving_; }
    [[nodiscard]] double movement_total() const noexcept { return movement_; }
    [[nodiscard]] double grand_total() const noexcept { return serving_ + weight_ * movement_; }

    /// Grand total re-summed from the per-step entries.
    [[nodiscard]] double recomputed_total() const noexcept;

private:
    double weight_;
    double serving_ = 0.0;
    double movement_ = 0.0;
    std::vector<Entry> entries_;
};

} // namespace kmob
