#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kmob {

/// Relative tolerance used for floating-point acceptance checks throughout.
inline constexpr double kRelTol = 1e-9;

/// A position in d-dimensional Euclidean space.
class Point {
public:
    Point() = default;
    Point(std::initializer_list<double> coords) : coords_(coords) {}
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}

    [[nodiscard]] static Point zero(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
    [[nodiscard]] double& operator[](std::size_t i) { return coords_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return coords_; }
    [[nodiscard]] bool is_finite() const noexcept;

    Point& operator+=(const Point& other);
    Point& operator-=(const Point& other);
    Point& operator*=(double s) noexcept;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

[[nodiscard]] Point operator+(Point lhs, const Point& rhs);
[[nodiscard]] Point operator-(Point lhs, const Point& rhs);
[[nodiscard]] Point operator*(Point p, double s);
[[nodiscard]] Point operator*(double s, Point p);

/// Positions of the k servers of one party at one instant.
using Configuration = std::vector<Point>;

/// Euclidean distance. Throws InputError on dimension mismatch.
[[nodiscard]] double distance(const Point& p, const Point& q);

[[nodiscard]] double norm(const Point& p) noexcept;

/// Moves p straight toward target by at most cap. Returns target itself when it is
/// within reach, so a reached target compares equal afterwards.
[[nodiscard]] Point move_toward(const Point& p, const Point& target, double cap);

/// Index of the point in `config` closest to `q`; lowest index wins ties.
[[nodiscard]] std::size_t nearest_index(const Configuration& config, const Point& q);

/// Distance from `q` to the closest point of `config`.
[[nodiscard]] double nearest_distance(const Configuration& config, const Point& q);

/// Sum of per-server displacements between two configurations of equal size.
[[nodiscard]] double total_displacement(const Configuration& from, const Configuration& to);

} // namespace kmob
