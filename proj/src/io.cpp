#include "torsionlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace torsionlab {

ConvexPolygon polygon_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw InputError("polygon JSON must be an object with a \"vertices\" array");
    std::vector<Point2> pts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw InputError("each vertex must be a pair of numbers [x, y]");
        pts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return ConvexPolygon::from_points(pts);
}

ConvexPolygon parse_polygon(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed polygon JSON: ") + e.what());
    }
    return polygon_from_json(j);
}

ConvexPolygon load_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open polygon file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_polygon(buf.str());
}

Json point_to_json(const Point2& x) { return Json::array({x.x(), x.y()}); }

Json polygon_to_json(const ConvexPolygon& p) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) v.push_back(point_to_json(p.vertex(i)));
    return Json{{"vertices", v}};
}

namespace {

std::string format_double(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // keep integral values typed as floating point
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void dump(const Json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(std::size_t(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? std::string(std::size_t(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += std::string(",") + nl;
                first = false;
                out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump(it.value(), indent, depth + 1, out);
            }
            out += nl + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // short numeric arrays (points) stay on one line
            const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
            out += "[";
            if (!flat) out += nl;
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : std::string(",") + nl;
                first = false;
                if (!flat) out += pad;
                dump(e, indent, depth + 1, out);
            }
            if (!flat) out += nl + close;
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump(j, indent, 0, out);
    out += "\n";
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
    if (!out) throw InputError("failed writing " + path);
}

std::string render_svg(const ConvexPolygon& p, const std::optional<Point2>& mark) {
    const Eigen::Vector2d lo = p.vertices().rowwise().minCoeff();
    const Eigen::Vector2d hi = p.vertices().rowwise().maxCoeff();
    const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
    const double size = 400, margin = 20, scale = (size - 2 * margin) / span;
    auto sx = [&](double x) { return margin + (x - lo.x()) * scale; };
    auto sy = [&](double y) { return size - margin - (y - lo.y()) * scale; };
    std::ostringstream s;
    s.precision(10);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << " " << size << "\">\n";
    s << "  <polygon fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (Eigen::Index i = 0; i < p.size(); ++i) s << (i ? " " : "") << sx(p.vertex(i).x()) << "," << sy(p.vertex(i).y());
    s << "\"/>\n";
    if (mark) s << "  <circle cx=\"" << sx(mark->x()) << "\" cy=\"" << sy(mark->y()) << "\" r=\"5\" fill=\"black\"/>\n";
    s << "</svg>\n";
    return s.str();
}

std::string bound_curve_csv(const BoundResult& r) {
    std::string out = "T,M,bound_raw,bound_c,bound_raw_exact,M_inside,bound_raw_inside\n";
    for (const auto& b : r.curve) {
        out += format_double(b.T) + "," + format_double(b.M) + "," + format_double(b.bound_raw) + "," +
               format_double(b.bound_c) + "," + format_double(b.bound_raw_exact) + "," + format_double(b.M_inside) + "," +
               format_double(b.bound_raw_inside) + "\n";
    }
    return out;
}

}  // namespace torsionlab
