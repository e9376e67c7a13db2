#pragma once

// Shared fixtures for the unit tests and the acceptance runner.

#include "torsionlab/geometry.hpp"
#include "torsionlab/oracles.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace torsionlab::testing {

inline ConvexPolygon unit_square() { return ConvexPolygon::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline ConvexPolygon decagon() {
    return ConvexPolygon::from_points({{0.536, 0}, {0.84, 0.3}, {0.8, 0.67}, {0.58, 1}, {0.21, 1.21},
                                       {-0.21, 1.21}, {-0.58, 1}, {-0.8, 0.67}, {-0.84, 0.3}, {-0.536, 0}});
}

inline ConvexPolygon rectangle(double w, double h) {
    return ConvexPolygon::from_points({{0, 0}, {w, 0}, {w, h}, {0, h}});
}

/// Convex polygon with `k` random tangent lines to the disk of radius rho at the
/// origin, each pushed out by up to 50%, scaled up to unit area. Returns false
/// if the tangent polygon already exceeds unit area or is unbounded.
inline bool random_disk_containing_polygon(std::mt19937_64& rng, double rho, int k, ConvexPolygon& out) {
    std::uniform_real_distribution<double> unif(0, 1);
    std::vector<double> ang(static_cast<std::size_t>(k));
    for (auto& a : ang) a = 2 * pi * unif(rng);
    std::sort(ang.begin(), ang.end());
    for (int i = 0; i < k; ++i) {
        const double gap = (i + 1 < k ? ang[std::size_t(i + 1)] : ang[0] + 2 * pi) - ang[std::size_t(i)];
        if (gap >= 0.95 * pi) return false;
    }
    std::vector<double> h(static_cast<std::size_t>(k));
    for (auto& v : h) v = rho * (1 + 0.5 * unif(rng));
    // vertices are intersections of consecutive support lines x·n_i = h_i
    std::vector<Point2> pts;
    for (int i = 0; i < k; ++i) {
        const std::size_t a = std::size_t(i), b = std::size_t((i + 1) % k);
        Eigen::Matrix2d m;
        m << std::cos(ang[a]), std::sin(ang[a]), std::cos(ang[b]), std::sin(ang[b]);
        pts.push_back(m.partialPivLu().solve(Eigen::Vector2d(h[a], h[b])));
    }
    const auto hull = convex_hull(pts);
    if (hull.size() < 3) return false;
    const ConvexPolygon p = ConvexPolygon::from_points(hull);
    const double A = area(p);
    if (A > 1) return false;
    out = p.scaled(1 / std::sqrt(A));
    return true;
}

/// Hull of k random points in the unit disk, rescaled to unit area.
inline ConvexPolygon random_convex_polygon(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> unif(0, 1);
    for (;;) {
        std::vector<Point2> pts;
        for (int i = 0; i < k; ++i) {
            const double t = 2 * pi * unif(rng), r = 0.5 + 0.5 * std::sqrt(unif(rng));
            pts.emplace_back(r * std::cos(t), r * std::sin(t));
        }
        const auto hull = convex_hull(pts);
        if (hull.size() < 3) continue;
        const ConvexPolygon p = ConvexPolygon::from_points(hull);
        // skip slivers and near-duplicate vertices
        bool ok = area(p) > 0.3;
        for (Eigen::Index i = 0; i < p.size() && ok; ++i) ok = p.edge(i).norm() > 0.05;
        if (ok) return with_area(p, 1.0);
    }
}

struct NamedDomain {
    std::string name;
    ConvexPolygon polygon;
};

/// Twenty unit-area domains for the audit suite.
inline std::vector<NamedDomain> audit_corpus() {
    std::vector<NamedDomain> c;
    auto add = [&](std::string n, const ConvexPolygon& p) {
        const ConvexPolygon q = with_area(p, 1.0);
        c.push_back({std::move(n), q.translated(-centroid(q))});
    };
    add("disk256", regular_ngon(256, 1));
    add("square", unit_square());
    add("square_rotated", unit_square().rotated(0.3));
    add("equilateral", regular_ngon(3, 1));
    add("right_isosceles", ConvexPolygon::from_points({{0, 0}, {1, 0}, {0, 1}}));
    add("obtuse_triangle", ConvexPolygon::from_points({{0, 0}, {3, 0}, {0.6, 0.8}}));
    add("rectangle_2x1", rectangle(2, 1));
    add("rectangle_5x1", rectangle(5, 1));
    add("rectangle_10x1", rectangle(10, 1));
    add("pentagon", regular_ngon(5, 1));
    add("hexagon", regular_ngon(6, 1));
    add("decagon", decagon());
    add("ellipse64", ellipse_polygon(EllipseTorsion(0.75), 64));
    add("cone_hull_0.4", cone_hull(0.4, 1, 40).polygon_approx);
    add("cone_hull_0.5", cone_hull(0.5, 1, 40).polygon_approx);
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 5; ++i) add("random" + std::to_string(i), random_convex_polygon(rng, 5 + i));
    return c;
}

}  // namespace torsionlab::testing
