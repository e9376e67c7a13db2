#include "torsionlab/torsion.hpp"
#include "torsionlab/optim.hpp"
#include "torsionlab/quadrature.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace torsionlab {

MeshResolution default_resolution(const ConvexPolygon& p) {
    const auto n = static_cast<int>(p.size());
    MeshResolution r;
    r.panels_per_edge = std::clamp(256 / n, 1, 16);
    r.nodes_per_panel = n <= 256 ? 8 : std::max(2, 2048 / n);
    return r;
}

InteriorRule fan_quadrature(const ConvexPolygon& p, int order, int radial_levels) {
    const Point2 c = centroid(p);
    const double perim = perimeter(p);

    Eigen::VectorXd rho_breaks(radial_levels + 2);
    rho_breaks(0) = 0;
    for (int k = 1; k <= radial_levels; ++k) rho_breaks(k) = 1 - std::ldexp(1.0, -k);
    rho_breaks(radial_levels + 1) = 1;
    const auto [rho, rho_w] = composite_rule(rho_breaks, order);

    // thin fan triangles of many-vertex polygons need few angular points
    const Eigen::Index n = p.size();
    const int t_order = n > 64 ? std::max(4, order / 2) : order;
    const int t_levels = n <= 16 ? radial_levels : (n <= 64 ? std::min(radial_levels, 2) : 0);

    std::vector<Point2> pts;
    std::vector<double> wts;
    for (Eigen::Index e = 0; e < p.size(); ++e) {
        const Point2 a = p.vertex(e);
        const Vec2 ab = p.edge(e);
        const double jac = std::abs(cross(a - c, ab));
        const int m = std::clamp(static_cast<int>(std::lround(32 * ab.norm() / perim)), 1, 8);
        // uniform panels with the two end panels split dyadically toward the corners
        std::vector<double> tb{0};
        const double h = 1.0 / m;
        for (int j = t_levels; j >= 1; --j) tb.push_back(h * std::ldexp(1.0, -j));
        for (int k = 1; k < m; ++k) tb.push_back(k * h);
        for (int j = 1; j <= t_levels; ++j) tb.push_back(1 - h * std::ldexp(1.0, -j));
        tb.push_back(1);
        const auto [t, t_w] = composite_rule(Eigen::Map<Eigen::VectorXd>(tb.data(), Eigen::Index(tb.size())), t_order);
        for (Eigen::Index i = 0; i < rho.size(); ++i) {
            for (Eigen::Index j = 0; j < t.size(); ++j) {
                pts.push_back(c + rho(i) * ((a - c) + t(j) * ab));
                wts.push_back(rho_w(i) * t_w(j) * rho(i) * jac);
            }
        }
    }
    InteriorRule rule;
    rule.points.resize(2, Eigen::Index(pts.size()));
    rule.weights = Eigen::Map<Eigen::VectorXd>(wts.data(), Eigen::Index(wts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) rule.points.col(Eigen::Index(k)) = pts[k];
    return rule;
}

namespace {

struct Ascent {
    Point2 x;
    double u;
};

// Safeguarded Newton ascent on u with central-difference gradient and Hessian.
Ascent newton_ascent(const DensitySolution& d, Point2 x, double diam) {
    const ConvexPolygon& p = d.mesh.polygon;
    auto u = [&](const Point2& y) { return eval_u_near(d, y); };
    const double h = 1e-4 * diam;
    double ux = u(x);
    for (int it = 0; it < 200; ++it) {
        const Vec2 ex(h, 0), ey(0, h);
        const double upx = u(x + ex), umx = u(x - ex), upy = u(x + ey), umy = u(x - ey);
        const double upp = u(x + ex + ey), upm = u(x + ex - ey), ump = u(x - ex + ey), umm = u(x - ex - ey);
        const Vec2 g((upx - umx) / (2 * h), (upy - umy) / (2 * h));
        Eigen::Matrix2d H;
        H(0, 0) = (upx - 2 * ux + umx) / (h * h);
        H(1, 1) = (upy - 2 * ux + umy) / (h * h);
        H(0, 1) = H(1, 0) = (upp - upm - ump + umm) / (4 * h * h);

        Vec2 step;
        if (H(0, 0) < 0 && H.determinant() > 0) {
            step = -H.ldlt().solve(g);
        } else {
            const double gn = g.norm();
            if (gn == 0) return {x, ux};
            step = (0.1 * diam / gn) * g;
        }
        if (step.norm() < 1e-10 * diam) return {x, ux};
        double unew = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 60; ++k) {
            const Point2 y = x + step;
            if (signed_distance(p, y) > 1e-3 * h) {
                unew = u(y);
                if (unew >= ux) break;
            }
            step *= 0.5;
        }
        if (!(unew >= ux)) return {x, ux};
        x += step;
        ux = unew;
        if (step.norm() < 1e-10 * diam) return {x, ux};
    }
    return {x, ux};
}

std::vector<Point2> multistart_points(const ConvexPolygon& p, int count) {
    const Point2 c = centroid(p);
    const double perim = perimeter(p);
    std::vector<Point2> starts;
    starts.push_back(c);
    for (int k = 1; k < count; ++k) {
        double s = perim * (k - 1) / (count - 1);
        Eigen::Index e = 0;
        while (s > p.edge(e).norm() && e + 1 < p.size()) s -= p.edge(e++).norm();
        const Point2 b = p.vertex(e) + (s / p.edge(e).norm()) * p.edge(e);
        starts.push_back(c + 0.6 * (b - c));
    }
    return starts;
}

}  // namespace

TorsionSolution solve(const ConvexPolygon& p, double strength, const SolveOptions& opt) {
    if (!(strength > 0) || !std::isfinite(strength)) throw InputError("strength must be a positive number");
    const MeshResolution res = opt.mesh.value_or(default_resolution(p));
    const BoundaryMesh mesh = build_mesh(p, res);
    FluxSolution flux = solve_boundary_flux(p, mesh, strength);
    DensitySolution density = solve_dirichlet_density(p, mesh, strength);
    const MaxGradient mg = max_boundary_gradient(flux);

    const double diam = p.diameter();
    const auto starts = multistart_points(p, std::max(1, opt.multistarts));
    std::vector<Ascent> found(starts.size());
    parallel_for(starts.size(), [&](std::size_t k) { found[k] = newton_ascent(density, starts[k], diam); });
    Ascent best = found[0];
    for (const auto& a : found)
        if (a.u > best.u) best = a;
    for (std::size_t k = 0; k < found.size(); ++k) {
        const double du = std::abs(found[k].u - best.u);
        const double dx = (found[k].x - best.x).norm();
        // a flat maximum (long rectangles) leaves the location undetermined at rounding level in u,
        // so positions are compared only when the values are distinguishable
        if (du > 1e-6 * std::abs(best.u) || (dx > 1e-6 * diam && du > 1e-12 * std::abs(best.u))) {
            std::ostringstream msg;
            msg << "max_u multistarts disagree: start " << k << " reached u = " << found[k].u << " at ("
                << found[k].x.x() << ", " << found[k].x.y() << "), best u = " << best.u << " at (" << best.x.x()
                << ", " << best.x.y() << ")";
            throw NumericalError(msg.str());
        }
    }

    InteriorRule rule = fan_quadrature(p, opt.interior_order, opt.radial_levels);
    const Eigen::Index m = rule.weights.size();
    Eigen::VectorXd su(m);
    Eigen::Matrix2Xd sg(2, m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t k) {
        const auto fv = eval_u_grad(density, rule.points.col(Eigen::Index(k)));
        su(Eigen::Index(k)) = fv.u;
        sg.col(Eigen::Index(k)) = fv.grad;
    });
    const double rigidity = rule.weights.dot(su);
    const double energy = rule.weights.dot(sg.colwise().squaredNorm().transpose());

    return TorsionSolution{p,        strength, res,       std::move(flux), std::move(density), mg.value, mg.point,
                           mg.edge,  best.u,   best.x,    rigidity,        energy,             std::move(rule),
                           std::move(su), std::move(sg)};
}

double c_value(const TorsionSolution& t) { return t.max_grad / (t.strength * std::sqrt(area(t.polygon))); }

double c_value(const ConvexPolygon& p, const MeshResolution& r) {
    const FluxSolution f = solve_boundary_flux(p, build_mesh(p, r), 1.0);
    return max_boundary_gradient(f).value / std::sqrt(area(p));
}

double rigidity_from_flux(const FluxSolution& f) {
    const Eigen::VectorXd r2 = f.mesh.nodes.colwise().squaredNorm().transpose();
    return 0.25 * f.mesh.weights.dot(r2.cwiseProduct(f.q)) - 0.25 * f.strength * polar_momentum(f.mesh.polygon);
}

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

void AuditReport::add(std::string check, double lhs, double rhs, const AuditTolerance& tol) {
    const double allowance = tol.abs + tol.rel * std::max(std::abs(lhs), std::abs(rhs));
    checks.push_back({std::move(check), lhs, rhs, rhs - lhs, lhs <= rhs + allowance});
}

AuditReport audit_sperb(const TorsionSolution& t, const AuditTolerance& tol) {
    AuditReport r{"sperb", {}};
    const double p_peak = 2 * t.strength * t.max_u;
    r.add("max_grad^2 <= 2 s max_u", t.max_grad * t.max_grad, p_peak, tol);
    const Eigen::VectorXd P = t.sample_grad.colwise().squaredNorm().transpose() + 2 * t.strength * t.sample_u;
    r.add("max interior P <= P(argmax_u)", P.maxCoeff(), p_peak, tol);
    r.add("max boundary P <= P(argmax_u)", t.flux.q.cwiseAbs2().maxCoeff(), p_peak, tol);
    return r;
}

AuditReport audit_payne(const TorsionSolution& t, const AuditTolerance& tol) {
    AuditReport r{"payne", {}};
    r.add("max_u^2 <= energy / (2 pi)", t.max_u * t.max_u, t.dirichlet_energy / (2 * pi), tol);
    return r;
}

AuditReport audit_eq614(const TorsionSolution& t, const AuditTolerance& tol) {
    AuditReport r{"max_u_moment", {}};
    const double lhs = area(t.polygon) * t.max_u;
    const double rhs = 0.5 * t.strength * polar_momentum(t.polygon, t.argmax_u) + t.rigidity;
    r.add("|p| max_u <= (s/2) J(argmax) + rigidity", lhs, rhs, tol);
    return r;
}

std::function<double(const Point2&)> make_test_function(const ConvexPolygon& p, const TestFunction& f) {
    switch (f.kind) {
        case TestFunction::Kind::Constant:
            return [](const Point2&) { return 1.0; };
        case TestFunction::Kind::RadialSquare:
            return [](const Point2& x) { return x.squaredNorm(); };
        case TestFunction::Kind::ShiftedHarmonic: {
            if (f.degree < 1) throw InputError("harmonic test function degree must be >= 1");
            const Point2 c = centroid(p);
            const int k = f.degree;
            auto harmonic = [c, k](const Point2& x) { return std::pow(std::complex<double>(x.x() - c.x(), x.y() - c.y()), k).real(); };
            // boundary minimum: dense scan per edge, refined by golden section
            double lo = std::numeric_limits<double>::infinity();
            for (Eigen::Index e = 0; e < p.size(); ++e) {
                const Point2 a = p.vertex(e);
                const Vec2 ab = p.edge(e);
                auto on_edge = [&](double s) { return -harmonic(a + s * ab); };
                constexpr int samples = 256;
                int best = 0;
                for (int i = 0; i <= samples; ++i)
                    if (on_edge(double(i) / samples) > on_edge(double(best) / samples)) best = i;
                const double s0 = std::max(0.0, (best - 1.0) / samples), s1 = std::min(1.0, (best + 1.0) / samples);
                const double s = golden_section_max(on_edge, s0, s1, 1e-14);
                lo = std::min({lo, -on_edge(s), -on_edge(double(best) / samples)});
            }
            return [harmonic, lo](const Point2& x) { return harmonic(x) - lo; };
        }
    }
    throw InputError("unknown test function");
}

std::string to_string(const TestFunction& f) {
    switch (f.kind) {
        case TestFunction::Kind::Constant: return "one";
        case TestFunction::Kind::RadialSquare: return "r2";
        case TestFunction::Kind::ShiftedHarmonic: return "harmonic" + std::to_string(f.degree);
    }
    return "unknown";
}

AuditReport audit_hermite_hadamard(const TorsionSolution& t, const std::function<double(const Point2&)>& f,
                                   const std::string& label, const AuditTolerance& tol) {
    const auto& mesh = t.flux.mesh;
    const Eigen::Index n = mesh.size();
    Eigen::VectorXd fb(n);
    double scale = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        fb(i) = f(mesh.nodes.col(i));
        scale = std::max(scale, std::abs(fb(i)));
    }
    for (Eigen::Index i = 0; i < t.polygon.size(); ++i) scale = std::max(scale, std::abs(f(t.polygon.vertex(i))));
    auto negative = [&](double v) { return v < -1e-12 * std::max(1.0, scale); };
    for (Eigen::Index i = 0; i < n; ++i)
        if (negative(fb(i))) throw InputError("test function " + label + " is negative on the boundary");
    for (Eigen::Index i = 0; i < t.polygon.size(); ++i)
        if (negative(f(t.polygon.vertex(i)))) throw InputError("test function " + label + " is negative at a vertex");

    double interior = 0;
    for (Eigen::Index k = 0; k < t.interior.weights.size(); ++k) interior += t.interior.weights(k) * f(t.interior.points.col(k));
    const double boundary = mesh.weights.dot(fb);
    AuditReport r{"hermite_hadamard", {}};
    r.add("int f <= (max_grad/s) boundary int f [" + label + "]", interior, t.max_grad / t.strength * boundary, tol);
    return r;
}

AuditReport audit_hermite_hadamard(const TorsionSolution& t, const TestFunction& f, const AuditTolerance& tol) {
    return audit_hermite_hadamard(t, make_test_function(t.polygon, f), to_string(f), tol);
}

SaintVenantReport quantitative_saint_venant_check(const std::vector<ConvexPolygon>& samples, const SolveOptions& opt,
                                                  double tol) {
    SaintVenantReport rep{1 / (4 * pi), {}, std::numeric_limits<double>::infinity(), true};
    for (const auto& p : samples) {
        if (std::abs(area(p) - 1) > 1e-8) throw InputError("Saint Venant check expects unit-area polygons");
        const TorsionSolution t = solve(p, 2.0, opt);
        const double asym = fraenkel_asymmetry(p);
        const double deficit = rep.disk_rigidity - t.rigidity;
        const double ratio = asym >= 1e-3 ? deficit / (asym * asym * asym) : std::numeric_limits<double>::quiet_NaN();
        rep.samples.push_back({t.rigidity, asym, deficit, ratio});
        if (deficit < -tol) rep.all_nonnegative = false;
        if (std::isfinite(ratio)) rep.min_ratio = std::min(rep.min_ratio, ratio);
    }
    return rep;
}

}  // namespace torsionlab
