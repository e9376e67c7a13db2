#pragma once

#include "torsionlab/common.hpp"
#include "torsionlab/geometry.hpp"

#include <cmath>
#include <cstdint>

namespace torsionlab {

template <typename Scalar>
struct DiskField {
    Scalar u;
    Scalar grad;  // |∇u|
};

/// Torsion function of the disk of radius R at distance r from the center:
/// u = strength (R² − r²)/4, |∇u| = strength r/2.
template <typename Scalar>
DiskField<Scalar> disk_closed_form(Scalar R, Scalar strength, Scalar r) {
    if (!(R > Scalar(0))) throw InputError("disk_closed_form: radius must be positive");
    if (r < Scalar(0) || r > R) throw InputError("disk_closed_form: r must lie in [0, R]");
    return {strength * (R * R - r * r) / Scalar(4), strength * r / Scalar(2)};
}

/// u = 1 − (a x² + (1 − a) y²)/2 solves −Δu = 1 in the ellipse where u > 0,
/// with semi-axes √(2/a) along x and √(2/(1 − a)) along y.
struct EllipseTorsion {
    double a;

    explicit EllipseTorsion(double a_);
    double semi_axis_x() const { return std::sqrt(2 / a); }
    double semi_axis_y() const { return std::sqrt(2 / (1 - a)); }
    double area() const { return 2 * pi / std::sqrt(a * (1 - a)); }
    double u(const Point2& x) const { return 1 - 0.5 * (a * x.x() * x.x() + (1 - a) * x.y() * x.y()); }
    Vec2 grad(const Point2& x) const { return {-a * x.x(), -(1 - a) * x.y()}; }
    /// Largest boundary gradient, attained at the ends of the short axis.
    double max_grad() const { return std::sqrt(2 * std::max(a, 1 - a)); }
};

/// Inscribed n-gon with vertices equally spaced in arclength, offset by half a
/// step so that each end of the x axis is an edge midpoint.
ConvexPolygon ellipse_polygon(const EllipseTorsion& e, int n);

/// Scale-free gradient constant of the ellipse family: √(2a)·(a(1 − a))^{1/4}/√(2π).
double ellipse_c(double a);

struct OptimalEllipse {
    double a_star;
    double c_star;
};
/// Maximizer of ellipse_c over (0, 1), located as the root of d/da log ellipse_c.
OptimalEllipse optimal_ellipse();

struct WosConfig {
    long long n_paths = 1'000'000;
    double stop_distance = 1e-6;
    std::uint64_t seed = 1;
};

struct WosEstimate {
    double mean;
    double std_error;
    double mean_steps;
};

/// Walk-on-spheres estimate of the expected exit time of planar Brownian motion
/// from x, i.e. the torsion function at strength 2. Each path has its own
/// generator keyed by (seed, path index); paths are summed in chunks of 4096
/// reduced in chunk order, so the result does not depend on the thread count.
WosEstimate wos_lifetime(const ConvexPolygon& p, const Point2& x, const WosConfig& cfg);

}  // namespace torsionlab
