#pragma once

#include "torsionlab/common.hpp"
#include "torsionlab/geometry.hpp"

#include <cmath>

namespace torsionlab {

/// Edge-local coordinates of an evaluation point x relative to segment [a, b]:
/// alpha = (a − x)·t, beta = (b − x)·t, sigma = (x − a)·n, with t the unit
/// tangent and n the inward unit normal.
template <typename Scalar>
struct SegmentQuadParams {
    Scalar alpha;
    Scalar beta;
    Scalar sigma;
    Vector2<Scalar> tangent;
    Vector2<Scalar> normal;
};

template <typename Scalar>
SegmentQuadParams<Scalar> segment_params(const Vector2<Scalar>& a, const Vector2<Scalar>& b,
                                         const Vector2<Scalar>& x) {
    const Vector2<Scalar> t = (b - a).normalized();
    const Vector2<Scalar> n(-t.y(), t.x());
    return {(a - x).dot(t), (b - x).dot(t), (x - a).dot(n), t, n};
}

namespace detail {

// x log sqrt(x^2 + s^2) with the 0 log 0 = 0 convention
template <typename Scalar>
Scalar x_log_hypot(Scalar x, Scalar s) {
    if (x == Scalar(0)) return Scalar(0);
    return x * std::log(std::hypot(x, s));
}

}  // namespace detail

/// ∫_alpha^beta (log sqrt(t² + sigma²) − 1/2) dt.
///
/// Antiderivative t·log sqrt(t² + σ²) − 3t/2 + σ·atan(t/σ); for σ = 0 the atan
/// term vanishes and the log term is integrable through t = 0.
template <typename Scalar>
Scalar segment_log_integral(const SegmentQuadParams<Scalar>& q) {
    const Scalar a = q.alpha, b = q.beta, s = q.sigma;
    Scalar v = detail::x_log_hypot(b, s) - detail::x_log_hypot(a, s) - Scalar(1.5) * (b - a);
    if (s != Scalar(0)) v += s * (std::atan(b / s) - std::atan(a / s));
    return v;
}

/// (∫ t/(t² + σ²) dt, ∫ σ/(t² + σ²) dt) over [alpha, beta].
/// Throws OnBoundarySegmentError when σ = 0 and 0 ∈ [alpha, beta].
template <typename Scalar>
Vector2<Scalar> segment_vector_integral(const SegmentQuadParams<Scalar>& q) {
    const Scalar a = q.alpha, b = q.beta, s = q.sigma;
    if (s == Scalar(0)) {
        if (a <= Scalar(0) && b >= Scalar(0)) throw OnBoundarySegmentError("segment_vector_integral: point lies on the segment");
        return {std::log(std::abs(b) / std::abs(a)), Scalar(0)};
    }
    const Scalar as = std::abs(s);
    const Scalar angle = std::atan2(b, as) - std::atan2(a, as);
    return {std::log(std::hypot(b, s) / std::hypot(a, s)), s > 0 ? angle : -angle};
}

/// Newtonian potential of a constant source over a polygon,
/// φ = −(strength/2π) ∫ log|x − x′| dx′, so that −Δφ = strength.
struct VolumePotential {
    ConvexPolygon polygon;
    double strength = 1;
};

double phi(const ConvexPolygon& p, double strength, const Point2& x);
inline double phi(const VolumePotential& v, const Point2& x) { return phi(v.polygon, v.strength, x); }

/// ∇φ. Valid on the boundary away from vertices; throws VertexEvaluationError
/// within 1e-14·diam of a vertex.
Vec2 grad_phi(const ConvexPolygon& p, double strength, const Point2& x);
inline Vec2 grad_phi(const VolumePotential& v, const Point2& x) { return grad_phi(v.polygon, v.strength, x); }

struct PotentialValue {
    double value;
    Vec2 grad;
};
/// φ and ∇φ in one pass over the edges.
PotentialValue phi_with_grad(const ConvexPolygon& p, double strength, const Point2& x);

}  // namespace torsionlab
