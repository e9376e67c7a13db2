#include "torsionlab/potential.hpp"

namespace torsionlab {

double phi(const ConvexPolygon& p, double strength, const Point2& x) {
    double s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const auto q = segment_params<double>(p.vertex(i), p.vertex(i + 1), x);
        // (x′ − x)·n is constant along the edge and equals −σ
        s += -q.sigma * segment_log_integral(q);
    }
    return strength * s / (4 * pi);
}

Vec2 grad_phi(const ConvexPolygon& p, double strength, const Point2& x) {
    const double vertex_tol = 1e-14 * p.diameter();
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if ((x - p.vertex(i)).norm() <= vertex_tol) throw VertexEvaluationError("grad_phi: evaluation at a polygon vertex");

    Vec2 g = Vec2::Zero();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const auto q = segment_params<double>(p.vertex(i), p.vertex(i + 1), x);
        g -= q.normal * segment_log_integral(q);
        // σ·∫(σn − t v)/(t² + σ²) vanishes on the edge that carries x
        if (q.sigma != 0) {
            const Vec2 I = segment_vector_integral(q);
            g -= q.sigma * (q.normal * I(1) - q.tangent * I(0));
        }
    }
    return strength * g / (4 * pi);
}

PotentialValue phi_with_grad(const ConvexPolygon& p, double strength, const Point2& x) {
    const double vertex_tol = 1e-14 * p.diameter();
    double v = 0;
    Vec2 g = Vec2::Zero();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if ((x - p.vertex(i)).norm() <= vertex_tol) throw VertexEvaluationError("grad_phi: evaluation at a polygon vertex");
        const auto q = segment_params<double>(p.vertex(i), p.vertex(i + 1), x);
        const double L = segment_log_integral(q);
        v -= q.sigma * L;
        g -= q.normal * L;
        if (q.sigma != 0) {
            const Vec2 I = segment_vector_integral(q);
            g -= q.sigma * (q.normal * I(1) - q.tangent * I(0));
        }
    }
    const double c = strength / (4 * pi);
    return {c * v, c * g};
}

}  // namespace torsionlab
