#include <kmob/core/matching.hpp>

#include <kmob/core/error.hpp>

#include <limits>

namespace kmob {

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost, double& total) {
    const int n = static_cast<int>(cost.size());
    std::vector<int> assignment(n, -1);
    total = 0.0;
    if (n == 0) return assignment;

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (int j = 1; j <= n; ++j) {
        if (p[j] != 0) assignment[p[j] - 1] = j - 1;
    }
    // Sum the actual entries rather than trusting -v[0], which drifts by rounding.
    for (int i = 0; i < n; ++i) total += cost[i][assignment[i]];
    return assignment;
}

namespace {

// Optimal cost of matching rows [first_row, n) to the columns not marked used.
double residual_optimum(const std::vector<std::vector<double>>& cost, int first_row,
                        const std::vector<char>& used_cols) {
    const int n = static_cast<int>(cost.size());
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
        if (!used_cols[j]) cols.push_back(j);
    }
    const int m = n - first_row;
    std::vector<std::vector<double>> sub(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) sub[i][j] = cost[first_row + i][cols[j]];
    }
    double total = 0.0;
    (void)hungarian(sub, total);
    return total;
}

} // namespace

Matching min_weight_matching(const Configuration& A, const Configuration& B) {
    if (A.size() != B.size()) throw InputError("matching: configuration sizes differ");
    const int n = static_cast<int>(A.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost[i][j] = distance(A[i], B[j]);
    }

    double optimum = 0.0;
    const auto assignment = hungarian(cost, optimum);
    const double slack = 1e-10 * (1.0 + optimum);

    // Fix rows in order, each to the smallest column that still admits an optimal completion.
    Matching out;
    out.perm.assign(n, -1);
    std::vector<char> used(n, false);
    double fixed = 0.0;
    for (int i = 0; i < n; ++i) {
        int chosen = -1;
        for (int j = 0; j < n && chosen < 0; ++j) {
            if (used[j]) continue;
            used[j] = true;
            const double rest = (i + 1 < n) ? residual_optimum(cost, i + 1, used) : 0.0;
            used[j] = false;
            if (fixed + cost[i][j] + rest <= optimum + slack) chosen = j;
        }
        if (chosen < 0) chosen = assignment[i];  // unreachable barring NaN input
        used[chosen] = true;
        fixed += cost[i][chosen];
        out.perm[i] = chosen;
    }
    out.weight = fixed;
    return out;
}

} // namespace kmob
