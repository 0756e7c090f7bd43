#include <kmob/core/point.hpp>

#include <kmob/core/error.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace kmob {

namespace {

void require_same_dim(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                         std::to_string(q.dim()));
    }
}

} // namespace

bool Point::is_finite() const noexcept {
    for (double c : coords_) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}

Point& Point::operator+=(const Point& other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

Point& Point::operator-=(const Point& other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (double& c : coords_) c *= s;
    return *this;
}

Point operator+(Point lhs, const Point& rhs) { return lhs += rhs; }
Point operator-(Point lhs, const Point& rhs) { return lhs -= rhs; }
Point operator*(Point p, double s) { return p *= s; }
Point operator*(double s, Point p) { return p *= s; }

double distance(const Point& p, const Point& q) {
    require_same_dim(p, q);
    if (p.dim() == 1) return std::abs(p[0] - q[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double d = p[i] - q[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double norm(const Point& p) noexcept {
    double sum = 0.0;
    for (double c : p.coords()) sum += c * c;
    return std::sqrt(sum);
}

Point move_toward(const Point& p, const Point& target, double cap) {
    const double d = distance(p, target);
    if (d <= cap) return target;
    if (cap <= 0.0) return p;
    const double f = cap / d;
    Point out = p;
    for (std::size_t i = 0; i < p.dim(); ++i) out[i] = p[i] + f * (target[i] - p[i]);
    return out;
}

std::size_t nearest_index(const Configuration& config, const Point& q) {
    if (config.empty()) throw InputError("nearest_index: empty configuration");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config.size(); ++i) {
        const double d = distance(config[i], q);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double nearest_distance(const Configuration& config, const Point& q) {
    return distance(config[nearest_index(config, q)], q);
}

double total_displacement(const Configuration& from, const Configuration& to) {
    if (from.size() != to.size()) throw InputError("configuration size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) sum += distance(from[i], to[i]);
    return sum;
}

} // namespace kmob
