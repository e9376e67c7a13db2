#pragma once

#include "torsionlab/common.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/potential.hpp"

#include <vector>

namespace torsionlab {

struct MeshResolution {
    int panels_per_edge = 16;
    int nodes_per_panel = 8;
    /// Exponent p of the panel map s ↦ s^p / (s^p + (1 − s)^p); 1 is uniform.
    double grading = 4;
};

/// A Gauss-Legendre panel on edge `edge`, covering edge parameters [s0, s1]
/// (0 at vertex(edge), 1 at vertex(edge + 1)).
struct Panel {
    Eigen::Index edge;
    double s0;
    double s1;
    Eigen::Index first_node;
};

/// Nyström discretization of the polygon boundary. Nodes never sit on vertices.
struct BoundaryMesh {
    ConvexPolygon polygon;
    std::vector<Panel> panels;
    Eigen::Matrix2Xd nodes;
    Eigen::Matrix2Xd normals;  // inward, unit
    Eigen::VectorXd weights;   // arclength weights
    Eigen::VectorXi node_panel;
    Eigen::VectorXd node_param;  // edge parameter of each node
    double grading = 2;
    int nodes_per_panel = 8;

    Eigen::Index size() const { return nodes.cols(); }
    Point2 point_on_edge(Eigen::Index edge, double s) const {
        return polygon.vertex(edge) + s * polygon.edge(edge);
    }
    double panel_length(std::size_t j) const {
        return (panels[j].s1 - panels[j].s0) * polygon.edge(panels[j].edge).norm();
    }
};

BoundaryMesh build_mesh(const ConvexPolygon& p, int panels_per_edge, int nodes_per_panel, double grading);
inline BoundaryMesh build_mesh(const ConvexPolygon& p, const MeshResolution& r = {}) {
    return build_mesh(p, r.panels_per_edge, r.nodes_per_panel, r.grading);
}

/// ∮ (x0 − x′)·n(x′)/|x0 − x′|² ds over the mesh (2π inside, 0 outside).
double gauss_winding_integral(const BoundaryMesh& mesh, const Point2& x0);

/// Double-layer density for ψ with ψ = −φ on the boundary:
///   π σ(x0) + ∮ K(x0, x′) σ(x′) ds = −φ(x0),  K = (x0 − x′)·n(x′)/|x0 − x′|².
struct DensitySolution {
    BoundaryMesh mesh;
    Eigen::VectorXd sigma;
    double strength = 1;
    double residual = 0;  // relative residual of the discrete system
    double rcond = 0;     // reciprocal condition estimate
};

DensitySolution solve_dirichlet_density(const ConvexPolygon& p, const BoundaryMesh& mesh, double strength);

/// u = φ + ψ with plain Nyström sums. Accurate when x is at least three local
/// panel lengths from the boundary; use eval_u_near otherwise.
double eval_u(const DensitySolution& d, const Point2& x);

/// u(x) with adaptive quadrature on panels close to x.
double eval_u_near(const DensitySolution& d, const Point2& x);

struct FieldValue {
    double u;
    Vec2 grad;
};
/// u and ∇u with near-panel correction.
FieldValue eval_u_grad(const DensitySolution& d, const Point2& x);

/// Inward normal derivative q = ∂u/∂ν on the boundary, from the second-kind
/// equation  q/2 − (1/2π) ∮ (x0 − y)·n(x0)/|x0 − y|² q(y) ds = ∂φ/∂ν(x0).
struct FluxSolution {
    BoundaryMesh mesh;
    Eigen::VectorXd q;
    double strength = 1;
    double residual = 0;
    double rcond = 0;
};

FluxSolution solve_boundary_flux(const ConvexPolygon& p, const BoundaryMesh& mesh, double strength);

/// Nyström interpolant of q at edge parameter s ∈ (0, 1).
double flux_at(const FluxSolution& f, Eigen::Index edge, double s);

/// u(x) = φ(x) + (1/2π) ∮ log|x − y| q(y) ds, an independent route to u from the flux.
double eval_u_single_layer(const FluxSolution& f, const Point2& x);

struct MaxGradient {
    double value;
    Point2 point;
    Eigen::Index edge;
    double param;
};
/// Largest boundary flux: node maximum refined by golden section between the
/// neighbouring nodes on the same edge.
MaxGradient max_boundary_gradient(const FluxSolution& f);

}  // namespace torsionlab
