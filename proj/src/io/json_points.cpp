#include <kmob/io/json_points.hpp>

#include <kmob/core/error.hpp>

namespace kmob::io {

using nlohmann::json;

json point_to_json(const Point& p) { return json(p.values()); }

json config_to_json(const Configuration& c) {
    json arr = json::array();
    for (const auto& p : c) arr.push_back(point_to_json(p));
    return arr;
}

Point point_from_json(const json& j, int dim) {
    if (!j.is_array() || j.empty()) throw InputError("point must be a non-empty array of numbers");
    std::vector<double> coords;
    coords.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw InputError("point coordinate is not a number");
        coords.push_back(v.get<double>());
    }
    Point p(std::move(coords));
    if (dim > 0 && p.dim() != static_cast<std::size_t>(dim)) {
        throw InputError("point dimension " + std::to_string(p.dim()) + " != " + std::to_string(dim));
    }
    if (!p.is_finite()) throw InputError("point has non-finite coordinate");
    return p;
}

Configuration config_from_json(const json& j, int dim) {
    if (!j.is_array()) throw InputError("configuration must be an array of points");
    Configuration c;
    for (const auto& p : j) c.push_back(point_from_json(p, dim));
    return c;
}

} // namespace kmob::io
