#pragma once

#include <kmob/kserver/guide.hpp>

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace kmob {

/// Work Function Algorithm over the finite point set {start positions} u {requests}.
///
/// Configurations are multisets of point indices, packed 16 bits per server into a
/// 64-bit key, so k <= 4. The whole table is rebuilt on every request; cost per
/// step is O(#configurations * k). Exceeding the configuration budget raises
/// ResourceError.
class WorkFunctionGuide final : public Guide {
public:
    WorkFunctionGuide(Configuration start, std::size_t budget);

    GuideCost step(const Point& r) override;
    [[nodiscard]] const Configuration& positions() const noexcept override { return pos_; }
    [[nodiscard]] bool is_kserver() const noexcept override { return true; }
    [[nodiscard]] std::string name() const override { return "wfa"; }
    [[nodiscard]] std::unique_ptr<Guide> clone() const override {
        return std::make_unique<WorkFunctionGuide>(*this);
    }

    /// Current work function value of a configuration whose points are all known.
    /// Throws InputError for unknown points.
    [[nodiscard]] double work(const Configuration& config) const;

    [[nodiscard]] std::size_t table_size() const noexcept { return w_.size(); }

    /// Number of multisets of size k over n points.
    [[nodiscard]] static std::size_t config_count(std::size_t n_points, std::size_t k);

private:
    using Key = std::uint64_t;

    [[nodiscard]] Key key_of(std::vector<int> idx) const;
    [[nodiscard]] std::vector<int> unpack(Key key) const;
    [[nodiscard]] int index_of(const Point& p) const;
    int add_point(const Point& p);
    void check_budget(std::size_t n_points) const;

    Configuration pos_;
    std::vector<int> pos_idx_;
    std::vector<Point> points_;
    std::vector<std::vector<double>> dist_;
    std::unordered_map<Key, double> w_;
    std::size_t k_;
    std::size_t budget_;
};

} // namespace kmob
