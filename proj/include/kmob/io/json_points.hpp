#pragma once

#include <kmob/core/point.hpp>

#include <json.hpp>

namespace kmob::io {

// Points are plain JSON arrays of reals; configurations are arrays of points.
// A non-zero `dim` makes the readers reject points of any other dimension.

[[nodiscard]] nlohmann::json point_to_json(const Point& p);
[[nodiscard]] nlohmann::json config_to_json(const Configuration& c);
[[nodiscard]] Point point_from_json(const nlohmann::json& j, int dim = 0);
[[nodiscard]] Configuration config_from_json(const nlohmann::json& j, int dim = 0);

} // namespace kmob::io
