#pragma once

#include "torsionlab/common.hpp"

#include <vector>

namespace torsionlab {

/// Convex polygon with counterclockwise vertices stored as columns.
///
/// Construction validates: at least 3 finite vertices, no repeated vertices,
/// positive shoelace area, and every turn nonnegative up to 1e-12 * diam^2.
/// Collinear vertices are accepted.
class ConvexPolygon {
public:
    explicit ConvexPolygon(Eigen::Matrix2Xd vertices);

    /// Accepts either orientation; clockwise input is reversed.
    static ConvexPolygon from_points(const std::vector<Point2>& pts);

    Eigen::Index size() const { return vertices_.cols(); }
    const Eigen::Matrix2Xd& vertices() const { return vertices_; }
    Point2 vertex(Eigen::Index i) const { return vertices_.col(((i % size()) + size()) % size()); }
    /// Edge i runs from vertex(i) to vertex(i + 1).
    Vec2 edge(Eigen::Index i) const { return vertex(i + 1) - vertex(i); }
    /// Inward unit normal of edge i (left of the counterclockwise tangent).
    Vec2 inward_normal(Eigen::Index i) const;

    double diameter() const { return diameter_; }
    double scale() const { return diameter(); }

    ConvexPolygon translated(const Vec2& t) const;
    ConvexPolygon scaled(double s, const Point2& about = Point2::Zero()) const;
    ConvexPolygon rotated(double angle, const Point2& about = Point2::Zero()) const;
    /// Same polygon with the vertex list cyclically shifted by k.
    ConvexPolygon reindexed(Eigen::Index k) const;

private:
    Eigen::Matrix2Xd vertices_;
    double diameter_ = 0;
};

struct DiskSpec {
    Point2 center = Point2::Zero();
    double radius = 1;
};

struct ConeHull {
    double rho = 0;
    double apex_distance = 0;
    ConvexPolygon polygon_approx;
};

double area(const ConvexPolygon& p);
double perimeter(const ConvexPolygon& p);
Point2 centroid(const ConvexPolygon& p);

struct Inradius {
    double radius;
    Point2 center;
};
/// Chebyshev center: the largest inscribed disk.
Inradius inradius_and_center(const ConvexPolygon& p);

/// Signed distance to the boundary, positive inside.
double signed_distance(const ConvexPolygon& p, const Point2& x);
inline bool contains(const ConvexPolygon& p, const Point2& x) { return signed_distance(p, x) > 0; }

/// Exact |p ∩ disk|.
double circle_polygon_intersection_area(const ConvexPolygon& p, const DiskSpec& d);

struct AsymmetryResult {
    double value;
    Point2 ball_center;
    int evaluations;
};
/// Fraenkel asymmetry inf |B Δ p| / |p| over balls with |B| = |p|.
AsymmetryResult fraenkel_asymmetry_detail(const ConvexPolygon& p);
inline double fraenkel_asymmetry(const ConvexPolygon& p) { return fraenkel_asymmetry_detail(p).value; }

/// ∫_p ‖x − origin‖² dx.
double polar_momentum(const ConvexPolygon& p, const Point2& origin = Point2::Zero());

/// |{x ∈ p : ‖x‖ ≤ r}|.
double sublevel_area(const ConvexPolygon& p, double r);

/// Area of the convex hull of the disk of radius rho at the origin and a point
/// at distance d ≥ rho.
double cone_hull_area(double rho, double d);
ConeHull cone_hull(double rho, double target_area, int n_arc);

/// Regular n-gon about the origin with the given area and a horizontal bottom edge.
ConvexPolygon regular_ngon(int n, double target_area);

/// Smallest disk containing all vertices.
DiskSpec min_enclosing_disk(const ConvexPolygon& p);

/// Convex hull (Andrew's monotone chain); drops interior and collinear points.
std::vector<Point2> convex_hull(std::vector<Point2> pts);

/// Uniformly rescaled about the centroid to the given area.
ConvexPolygon with_area(const ConvexPolygon& p, double target_area);

}  // namespace torsionlab
