#pragma once

#include "torsionlab/bounds.hpp"
#include "torsionlab/geometry.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace torsionlab {

using Json = nlohmann::ordered_json;

/// Polygon files look like {"vertices": [[x, y], ...]}; either orientation.
ConvexPolygon polygon_from_json(const Json& j);
ConvexPolygon parse_polygon(const std::string& text);
ConvexPolygon load_polygon(const std::string& path);
Json polygon_to_json(const ConvexPolygon& p);

Json point_to_json(const Point2& x);

/// Serializes with every floating-point number printed as %.17g, so reruns
/// give byte-identical files.
std::string dump_json(const Json& j, int indent = 2);

/// Writes the file or throws InputError.
void write_text(const std::string& path, const std::string& content);

/// Outline of p with an optional marked boundary point.
std::string render_svg(const ConvexPolygon& p, const std::optional<Point2>& mark = std::nullopt);

/// T, M, bound_raw, bound_c, bound_raw_exact, M_inside, bound_raw_inside per row.
std::string bound_curve_csv(const BoundResult& r);

}  // namespace torsionlab
