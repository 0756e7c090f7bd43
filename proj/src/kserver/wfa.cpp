#include <kmob/kserver/wfa.hpp>

#include <kmob/core/error.hpp>
#include <kmob/core/matching.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace kmob {

namespace {

constexpr int kMaxServers = 4;
constexpr int kMaxPoints = 1 << 16;

// Calls f on every non-decreasing index tuple of length k over [0, n).
// k = 0 yields the empty tuple once.
void for_each_multiset(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
    if (n <= 0) return;
    std::vector<int> idx(k, 0);
    while (true) {
        f(idx);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - 1) --pos;
        if (pos < 0) return;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[pos];
    }
}

} // namespace

std::size_t WorkFunctionGuide::config_count(std::size_t n_points, std::size_t k) {
    // C(n + k - 1, k), saturating.
    double c = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
        c = c * static_cast<double>(n_points + k - j) / static_cast<double>(j);
    }
    if (c >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
        return std::numeric_limits<std::size_t>::max() / 2;
    }
    return static_cast<std::size_t>(std::llround(c));
}

WorkFunctionGuide::WorkFunctionGuide(Configuration start, std::size_t budget)
    : pos_(std::move(start)), k_(pos_.size()), budget_(budget) {
    if (k_ == 0) throw InputError("wfa needs at least one server");
    if (k_ > static_cast<std::size_t>(kMaxServers)) throw ResourceError("wfa supports at most 4 servers");
    for (const auto& p : pos_) pos_idx_.push_back(add_point(p));
    check_budget(points_.size());

    // w_0(X) = cheapest way to move the start configuration onto X.
    const int n = static_cast<int>(points_.size());
    for_each_multiset(n, static_cast<int>(k_), [&](const std::vector<int>& idx) {
        std::vector<std::vector<double>> cost(k_, std::vector<double>(k_));
        for (std::size_t i = 0; i < k_; ++i) {
            for (std::size_t j = 0; j < k_; ++j) cost[i][j] = dist_[pos_idx_[i]][idx[j]];
        }
        double total = 0.0;
        (void)hungarian(cost, total);
        w_[key_of(idx)] = total;
    });
}

WorkFunctionGuide::Key WorkFunctionGuide::key_of(std::vector<int> idx) const {
    std::sort(idx.begin(), idx.end());
    Key key = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) key |= static_cast<Key>(idx[j]) << (16 * j);
    return key;
}

std::vector<int> WorkFunctionGuide::unpack(Key key) const {
    std::vector<int> idx(k_);
    for (std::size_t j = 0; j < k_; ++j) idx[j] = static_cast<int>((key >> (16 * j)) & 0xFFFF);
    return idx;
}

int WorkFunctionGuide::index_of(const Point& p) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] == p) return static_cast<int>(i);
    }
    return -1;
}

int WorkFunctionGuide::add_point(const Point& p) {
    if (const int i = index_of(p); i >= 0) return i;
    if (points_.size() + 1 >= static_cast<std::size_t>(kMaxPoints)) throw ResourceError("wfa point set too large");
    for (std::size_t i = 0; i < points_.size(); ++i) dist_[i].push_back(distance(points_[i], p));
    points_.push_back(p);
    std::vector<double> row(points_.size());
    for (std::size_t j = 0; j < points_.size(); ++j) row[j] = distance(p, points_[j]);
    dist_.push_back(std::move(row));
    return static_cast<int>(points_.size() - 1);
}

void WorkFunctionGuide::check_budget(std::size_t n_points) const {
    if (config_count(n_points, k_) > budget_) {
        throw ResourceError("wfa table would exceed the configuration budget of " + std::to_string(budget_));
    }
}

double WorkFunctionGuide::work(const Configuration& config) const {
    if (config.size() != k_) throw InputError("wfa: configuration size differs from k");
    std::vector<int> idx;
    for (const auto& p : config) {
        const int i = index_of(p);
        if (i < 0) throw InputError("wfa: configuration uses an unknown point");
        idx.push_back(i);
    }
    return w_.at(key_of(idx));
}

GuideCost WorkFunctionGuide::step(const Point& r) {
    const int k = static_cast<int>(k_);
    int ri = index_of(r);
    if (ri < 0) {
        check_budget(points_.size() + 1);
        ri = add_point(r);
        // Extend w to configurations holding the new point m times, m = 1..k:
        // w(Y + p) = min_x w(Y + x) + d(x, p) over the old points x.
        const int n_old = ri;
        for (int m = 1; m <= k; ++m) {
            for_each_multiset(n_old, k - m, [&](const std::vector<int>& rest) {
                std::vector<int> base(rest);
                base.insert(base.end(), m - 1, ri);
                double best = std::numeric_limits<double>::infinity();
                for (int x = 0; x < n_old; ++x) {
                    base.push_back(x);
                    best = std::min(best, w_.at(key_of(base)) + dist_[x][ri]);
                    base.pop_back();
                }
                base.push_back(ri);
                w_[key_of(base)] = best;
            });
        }
    }

    // w_t(X) = min_{x in X} w_{t-1}(X - x + r) + d(r, x)
    std::unordered_map<Key, double> next;
    next.reserve(w_.size());
    for (const auto& entry : w_) {
        auto idx = unpack(entry.first);
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j) {
            const int x = idx[j];
            idx[j] = ri;
            best = std::min(best, w_.at(key_of(idx)) + dist_[x][ri]);
            idx[j] = x;
        }
        next.emplace(entry.first, best);
    }
    w_ = std::move(next);

    for (int i = 0; i < k; ++i) {
        if (pos_idx_[i] == ri) return {0.0, 0.0};
    }

    int chosen = -1;
    double chosen_val = 0.0;
    Configuration chosen_cfg;
    for (int i = 0; i < k; ++i) {
        auto idx = pos_idx_;
        idx[i] = ri;
        const double val = w_.at(key_of(idx)) + dist_[pos_idx_[i]][ri];
        Configuration cfg = pos_;
        cfg[i] = r;
        const double tol = 1e-12 * (1.0 + std::abs(val));
        if (chosen < 0 || val < chosen_val - tol ||
            (std::abs(val - chosen_val) <= tol && cfg < chosen_cfg)) {
            chosen = i;
            chosen_val = val;
            chosen_cfg = std::move(cfg);
        }
    }
    const double d = dist_[pos_idx_[chosen]][ri];
    pos_idx_[chosen] = ri;
    pos_[chosen] = r;
    return {0.0, d};
}

} // namespace kmob
