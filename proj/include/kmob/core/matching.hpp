#pragma once

#include <kmob/core/point.hpp>

#include <vector>

namespace kmob {

/// perm[i] is the index in B matched to A[i].
struct Matching {
    std::vector<int> perm;
    double weight = 0.0;
};

/// Minimum-weight perfect matching under Euclidean distances (Hungarian method).
/// Among optimal matchings the lexicographically smallest permutation is returned,
/// so repeated runs agree. Throws InputError when |A| != |B|.
[[nodiscard]] Matching min_weight_matching(const Configuration& A, const Configuration& B);

/// Hungarian method on a square cost matrix; returns the assignment row -> column
/// and stores the optimal total in `total`.
[[nodiscard]] std::vector<int> hungarian(const std::vector<std::vector<double>>& cost, double& total);

} // namespace kmob
