#pragma once

#include <cstddef>

namespace kmob {

/// Problem instance parameters. Every speed cap and cost weight derives from these.
struct ProblemParams {
    int k = 1;           ///< number of servers
    double ms = 1.0;     ///< offline per-step movement bound
    double mc = 1.0;     ///< bound on the distance between consecutive requests
    double delta = 0.0;  ///< resource augmentation: online servers move up to (1+delta)*ms
    double D = 1.0;      ///< movement cost weight
    int dim = 1;

    /// Throws InputError unless k>=1, ms>0, mc>0, 0<=delta<1, D>=1, dim>=1, all finite.
    void validate() const;

    [[nodiscard]] double online_speed() const noexcept { return (1.0 + delta) * ms; }
};

} // namespace kmob
