#include <kmob/core/ledger.hpp>

#include <kmob/core/error.hpp>

#include <cmath>

namespace kmob {

void CostLedger::record(double serving, double movement) {
    if (!std::isfinite(serving) || !std::isfinite(movement) || serving < 0.0 || movement < 0.0) {
        throw InputError("ledger entries must be finite and non-negative");
    }
    entries_.push_back({serving, movement});
    serving_ += serving;
    movement_ += movement;
}

double CostLedger::recomputed_total() const noexcept {
    double total = 0.0;
    for (const auto& e : entries_) total += e.serving + weight_ * e.movement;
    return total;
}

} // namespace kmob
