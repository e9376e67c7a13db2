#include "torsionlab/bie.hpp"
#include "torsionlab/optim.hpp"
#include "torsionlab/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace torsionlab {

namespace {

// Panels closer than this many panel lengths get adaptive product integration.
constexpr double kNearFactor = 3.0;
constexpr int kSubOrder = 16;
constexpr int kMaxDepth = 60;

double grading_map(double s, double p) {
    if (p == 1) return s;
    const double a = std::pow(s, p), b = std::pow(1 - s, p);
    return a / (a + b);
}

double segment_distance(const Point2& x, const Point2& a, const Point2& b) {
    const Vec2 e = b - a;
    const double L2 = e.squaredNorm();
    const double t = L2 > 0 ? std::clamp((x - a).dot(e) / L2, 0.0, 1.0) : 0.0;
    return (x - (a + t * e)).norm();
}

template <int Dim>
using KernelValue = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using PanelWeights = Eigen::Matrix<double, Dim, Eigen::Dynamic>;

bool is_near(const BoundaryMesh& m, std::size_t j, const Point2& x) {
    const Panel& P = m.panels[j];
    const Point2 y0 = m.point_on_edge(P.edge, P.s0), y1 = m.point_on_edge(P.edge, P.s1);
    return segment_distance(x, y0, y1) < kNearFactor * (y1 - y0).norm();
}

// Adaptive product rule on panel j for a target x: bisects the panel parameter
// u ∈ [-1, 1] while a piece is closer to x than its own length, then applies a
// 16-point rule. visit(u, y, ds_weight) is called once per quadrature point.
template <typename Visit>
void adaptive_panel_points(const BoundaryMesh& m, std::size_t j, const Point2& x, Visit&& visit) {
    const Panel& P = m.panels[j];
    const Point2 a = m.polygon.vertex(P.edge);
    const Vec2 e = m.polygon.edge(P.edge);
    auto point = [&](double u) -> Point2 { return a + (P.s0 + 0.5 * (u + 1) * (P.s1 - P.s0)) * e; };
    const double ds_du = 0.5 * (P.s1 - P.s0) * e.norm();
    const auto& sub = gauss_legendre(kSubOrder);
    std::vector<std::tuple<double, double, int>> stack{{-1.0, 1.0, 0}};
    while (!stack.empty()) {
        const auto [u0, u1, depth] = stack.back();
        stack.pop_back();
        const Point2 p0 = point(u0), p1 = point(u1);
        if (depth < kMaxDepth && segment_distance(x, p0, p1) < (p1 - p0).norm()) {
            const double um = 0.5 * (u0 + u1);
            stack.emplace_back(um, u1, depth + 1);
            stack.emplace_back(u0, um, depth + 1);
            continue;
        }
        const double half = 0.5 * (u1 - u0), mid = 0.5 * (u0 + u1);
        for (int g = 0; g < sub.size(); ++g) {
            const double u = mid + half * sub.nodes(g);
            visit(u, point(u), sub.weights(g) * half * ds_du);
        }
    }
}

// Weights W (Dim x nodes_per_panel) such that ∫_panel kernel(y, n) f(y) ds ≈ W f_nodes
// for f the polynomial interpolant of the nodal values. Far panels use the native
// rule; near panels are integrated adaptively against the Lagrange basis.
template <int Dim, typename Kernel>
PanelWeights<Dim> panel_weights(const BoundaryMesh& m, std::size_t j, const Point2& x, Kernel&& kernel) {
    const Panel& P = m.panels[j];
    const int npp = m.nodes_per_panel;
    const Vec2 n = m.polygon.inward_normal(P.edge);
    PanelWeights<Dim> W(Dim, npp);
    if (!is_near(m, j, x)) {
        for (int k = 0; k < npp; ++k) {
            const Eigen::Index idx = P.first_node + k;
            W.col(k) = kernel(Point2(m.nodes.col(idx)), n) * m.weights(idx);
        }
        return W;
    }
    W.setZero();
    const auto& base = gauss_legendre(npp);
    std::vector<double> ell(npp);
    adaptive_panel_points(m, j, x, [&](double u, const Point2& y, double w) {
        lagrange_basis(base, u, ell.data());
        const KernelValue<Dim> kv = kernel(y, n) * w;
        for (int k = 0; k < npp; ++k) W.col(k) += kv * ell[k];
    });
    return W;
}

// Σ over panels (optionally skipping one edge) of ∫ kernel · density, with the
// adaptive rule on near panels when `near` is set.
template <int Dim, typename Kernel>
KernelValue<Dim> apply_layer(const BoundaryMesh& m, const Eigen::VectorXd& density, const Point2& x, Kernel&& kernel,
                             bool near, Eigen::Index skip_edge = -1) {
    KernelValue<Dim> acc = KernelValue<Dim>::Zero();
    const int npp = m.nodes_per_panel;
    const auto& base = gauss_legendre(npp);
    for (std::size_t j = 0; j < m.panels.size(); ++j) {
        const Panel& P = m.panels[j];
        if (P.edge == skip_edge) continue;
        const Vec2 n = m.polygon.inward_normal(P.edge);
        if (near && is_near(m, j, x)) {
            const double* values = density.data() + P.first_node;
            adaptive_panel_points(m, j, x, [&](double u, const Point2& y, double w) {
                acc += kernel(y, n) * (w * lagrange_interpolate(base, values, u));
            });
            continue;
        }
        for (int k = 0; k < npp; ++k) {
            const Eigen::Index idx = P.first_node + k;
            acc += kernel(Point2(m.nodes.col(idx)), n) * (m.weights(idx) * density(idx));
        }
    }
    return acc;
}

KernelValue<1> double_layer(const Point2& x, const Point2& y, const Vec2& ny) {
    const Vec2 r = x - y;
    return KernelValue<1>(r.dot(ny) / r.squaredNorm());
}

// (double layer, its x-gradient)
KernelValue<3> double_layer_with_grad(const Point2& x, const Point2& y, const Vec2& ny) {
    const Vec2 r = x - y;
    const double r2 = r.squaredNorm();
    const double rn = r.dot(ny);
    const Vec2 g = ny / r2 - (2 * rn / (r2 * r2)) * r;
    return KernelValue<3>(rn / r2, g.x(), g.y());
}

void check_solution(const char* what, const Eigen::MatrixXd& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                    double rcond, double& residual) {
    if (!x.allFinite() || rcond < 1e-14) {
        std::ostringstream msg;
        msg << what << ": ill-conditioned system (reciprocal condition estimate " << rcond << ")";
        throw NumericalError(msg.str());
    }
    residual = (A * x - b).norm() / std::max(b.norm(), 1e-300);
    if (residual > 1e-10) {
        std::ostringstream msg;
        msg << what << ": residual " << residual << " exceeds 1e-10";
        throw NumericalError(msg.str());
    }
}

void require_interior(const ConvexPolygon& p, const Point2& x) {
    if (!(signed_distance(p, x) > 0)) {
        std::ostringstream msg;
        msg << "point (" << x.x() << ", " << x.y() << ") is not inside the domain";
        throw OutsideDomainError(msg.str());
    }
}

}  // namespace

BoundaryMesh build_mesh(const ConvexPolygon& p, int panels_per_edge, int nodes_per_panel, double grading) {
    if (panels_per_edge < 1) throw InputError("build_mesh: panels_per_edge must be >= 1");
    if (nodes_per_panel < 2) throw InputError("build_mesh: nodes_per_panel must be >= 2");
    if (!(grading >= 1)) throw InputError("build_mesh: grading must be >= 1");

    BoundaryMesh m{p, {}, {}, {}, {}, {}, {}, grading, nodes_per_panel};
    const auto& g = gauss_legendre(nodes_per_panel);
    const Eigen::Index N = p.size() * panels_per_edge * nodes_per_panel;
    m.nodes.resize(2, N);
    m.normals.resize(2, N);
    m.weights.resize(N);
    m.node_panel.resize(N);
    m.node_param.resize(N);

    Eigen::Index idx = 0;
    for (Eigen::Index e = 0; e < p.size(); ++e) {
        const double L = p.edge(e).norm();
        const Vec2 n = p.inward_normal(e);
        for (int k = 0; k < panels_per_edge; ++k) {
            const double s0 = grading_map(double(k) / panels_per_edge, grading);
            const double s1 = grading_map(double(k + 1) / panels_per_edge, grading);
            m.panels.push_back({e, s0, s1, idx});
            for (int i = 0; i < nodes_per_panel; ++i, ++idx) {
                const double s = s0 + 0.5 * (g.nodes(i) + 1) * (s1 - s0);
                m.nodes.col(idx) = m.point_on_edge(e, s);
                m.normals.col(idx) = n;
                m.weights(idx) = 0.5 * g.weights(i) * (s1 - s0) * L;
                m.node_panel(idx) = static_cast<int>(m.panels.size() - 1);
                m.node_param(idx) = s;
            }
        }
    }
    return m;
}

double gauss_winding_integral(const BoundaryMesh& mesh, const Point2& x0) {
    double s = 0;
    for (Eigen::Index j = 0; j < mesh.size(); ++j) {
        const Vec2 r = x0 - mesh.nodes.col(j);
        s += r.dot(mesh.normals.col(j)) / r.squaredNorm() * mesh.weights(j);
    }
    return s;
}

DensitySolution solve_dirichlet_density(const ConvexPolygon& p, const BoundaryMesh& mesh, double strength) {
    if (!(strength > 0)) throw InputError("strength must be positive");
    const Eigen::Index N = mesh.size();
    const int npp = mesh.nodes_per_panel;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        const Point2 xi = mesh.nodes.col(i);
        const Eigen::Index own_edge = mesh.panels[mesh.node_panel(i)].edge;
        for (std::size_t j = 0; j < mesh.panels.size(); ++j) {
            // K vanishes identically when source and target share an edge line
            if (mesh.panels[j].edge == own_edge) continue;
            const auto W = panel_weights<1>(mesh, j, xi, [&](const Point2& y, const Vec2& ny) { return double_layer(xi, y, ny); });
            A.block(i, mesh.panels[j].first_node, 1, npp) = W;
        }
        // interior limit of the double layer picks up +π σ(x0)
        A(i, i) += pi;
        rhs(i) = -phi(p, strength, xi);
    });
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    DensitySolution d{mesh, lu.solve(rhs), strength, 0, lu.rcond()};
    check_solution("solve_dirichlet_density", A, d.sigma, rhs, d.rcond, d.residual);
    return d;
}

double eval_u(const DensitySolution& d, const Point2& x) {
    require_interior(d.mesh.polygon, x);
    const auto psi = apply_layer<1>(d.mesh, d.sigma, x,
                                    [&](const Point2& y, const Vec2& ny) { return double_layer(x, y, ny); }, false);
    return phi(d.mesh.polygon, d.strength, x) + psi(0);
}

double eval_u_near(const DensitySolution& d, const Point2& x) {
    require_interior(d.mesh.polygon, x);
    const auto psi = apply_layer<1>(d.mesh, d.sigma, x,
                                    [&](const Point2& y, const Vec2& ny) { return double_layer(x, y, ny); }, true);
    return phi(d.mesh.polygon, d.strength, x) + psi(0);
}

FieldValue eval_u_grad(const DensitySolution& d, const Point2& x) {
    require_interior(d.mesh.polygon, x);
    const auto v = apply_layer<3>(d.mesh, d.sigma, x,
                                  [&](const Point2& y, const Vec2& ny) { return double_layer_with_grad(x, y, ny); }, true);
    const PotentialValue pv = phi_with_grad(d.mesh.polygon, d.strength, x);
    return {pv.value + v(0), pv.grad + v.tail<2>()};
}

FluxSolution solve_boundary_flux(const ConvexPolygon& p, const BoundaryMesh& mesh, double strength) {
    if (!(strength > 0)) throw InputError("strength must be positive");
    const Eigen::Index N = mesh.size();
    const int npp = mesh.nodes_per_panel;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        const Point2 xi = mesh.nodes.col(i);
        const Vec2 ni = mesh.normals.col(i);
        const Eigen::Index own_edge = mesh.panels[mesh.node_panel(i)].edge;
        for (std::size_t j = 0; j < mesh.panels.size(); ++j) {
            if (mesh.panels[j].edge == own_edge) continue;
            const auto W = panel_weights<1>(mesh, j, xi, [&](const Point2& y, const Vec2&) {
                const Vec2 r = xi - y;
                return KernelValue<1>(r.dot(ni) / r.squaredNorm());
            });
            B.block(i, mesh.panels[j].first_node, 1, npp) = -W / (2 * pi);
        }
        B(i, i) += 0.5;
        rhs(i) = grad_phi(p, strength, xi).dot(ni);
    });
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    FluxSolution f{mesh, lu.solve(rhs), strength, 0, lu.rcond()};
    check_solution("solve_boundary_flux", B, f.q, rhs, f.rcond, f.residual);
    return f;
}

double flux_at(const FluxSolution& f, Eigen::Index edge, double s) {
    if (!(s > 0 && s < 1)) throw InputError("flux_at: edge parameter must lie in (0, 1)");
    const Point2 x0 = f.mesh.point_on_edge(edge, s);
    const Vec2 n0 = f.mesh.polygon.inward_normal(edge);
    const auto layer = apply_layer<1>(
        f.mesh, f.q, x0,
        [&](const Point2& y, const Vec2&) {
            const Vec2 r = x0 - y;
            return KernelValue<1>(r.dot(n0) / r.squaredNorm());
        },
        true, edge);
    return 2 * (grad_phi(f.mesh.polygon, f.strength, x0).dot(n0) + layer(0) / (2 * pi));
}

double eval_u_single_layer(const FluxSolution& f, const Point2& x) {
    require_interior(f.mesh.polygon, x);
    const auto layer = apply_layer<1>(
        f.mesh, f.q, x, [&](const Point2& y, const Vec2&) { return KernelValue<1>(std::log((x - y).norm())); }, true);
    return phi(f.mesh.polygon, f.strength, x) + layer(0) / (2 * pi);
}

MaxGradient max_boundary_gradient(const FluxSolution& f) {
    Eigen::Index best;
    f.q.maxCoeff(&best);
    const auto& mesh = f.mesh;
    const Eigen::Index edge = mesh.panels[mesh.node_panel(best)].edge;
    const double s = mesh.node_param(best);
    auto same_edge = [&](Eigen::Index k) {
        return k >= 0 && k < mesh.size() && mesh.panels[mesh.node_panel(k)].edge == edge;
    };
    const double lo = same_edge(best - 1) ? mesh.node_param(best - 1) : 0.5 * s;
    const double hi = same_edge(best + 1) ? mesh.node_param(best + 1) : s + 0.5 * (1 - s);
    const double s_star = golden_section_max([&](double t) { return flux_at(f, edge, t); }, lo, hi, 1e-12);
    const double q_star = flux_at(f, edge, s_star);
    if (q_star >= f.q(best)) return {q_star, mesh.point_on_edge(edge, s_star), edge, s_star};
    return {f.q(best), mesh.point_on_edge(edge, s), edge, s};
}

}  // namespace torsionlab
