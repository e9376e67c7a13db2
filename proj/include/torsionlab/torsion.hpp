#pragma once

#include "torsionlab/bie.hpp"
#include "torsionlab/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace torsionlab {

/// Mesh size used when none is given: 16 panels x 8 nodes per edge, grading 4, for small
/// vertex counts, coarsened so that many-vertex polygons stay near 2k unknowns.
MeshResolution default_resolution(const ConvexPolygon& p);

/// Tensor Gauss rule on the fan triangulation from the centroid. Radial panels
/// are refined dyadically toward the boundary, angular panels toward the corners.
struct InteriorRule {
    Eigen::Matrix2Xd points;
    Eigen::VectorXd weights;
};
InteriorRule fan_quadrature(const ConvexPolygon& p, int order = 8, int radial_levels = 6);

struct SolveOptions {
    std::optional<MeshResolution> mesh;  // default_resolution(p) when empty
    int interior_order = 8;
    int radial_levels = 6;
    int multistarts = 16;
};

/// Solved torsion field −Δu = strength in p, u = 0 on ∂p.
struct TorsionSolution {
    ConvexPolygon polygon;
    double strength;
    MeshResolution resolution;
    FluxSolution flux;
    DensitySolution density;
    double max_grad;
    Point2 max_grad_point;
    Eigen::Index max_grad_edge;
    double max_u;
    Point2 argmax_u;
    double rigidity;          // ∫ u
    double dirichlet_energy;  // ∫ |∇u|²
    // interior quadrature samples, reused by the audits
    InteriorRule interior;
    Eigen::VectorXd sample_u;
    Eigen::Matrix2Xd sample_grad;
};

TorsionSolution solve(const ConvexPolygon& p, double strength, const SolveOptions& opt = {});

/// ‖∇u‖∞ / (strength · |p|^{1/2}).
double c_value(const TorsionSolution& t);
/// Same quantity from a flux-only solve at strength 1.
double c_value(const ConvexPolygon& p, const MeshResolution& r);

/// Rigidity from the flux alone: ∫u = ∮ (|x|²/4) q ds − strength · J₀/4,
/// J₀ the polar momentum about the origin.
double rigidity_from_flux(const FluxSolution& f);

struct AuditTolerance {
    double abs = 1e-6;
    double rel = 1e-4;
};

struct AuditCheck {
    std::string name;
    double lhs;
    double rhs;
    double slack;  // rhs − lhs
    bool pass;
};

struct AuditReport {
    std::string name;
    std::vector<AuditCheck> checks;
    bool passed() const;
    /// Appends lhs ≤ rhs with tolerance abs + rel·max(|lhs|, |rhs|).
    void add(std::string check, double lhs, double rhs, const AuditTolerance& tol);
};

/// P = |∇u|² + 2·strength·u peaks at the maximum of u:
/// max_grad² ≤ 2·strength·max_u, and P at every sample is ≤ P(argmax_u).
AuditReport audit_sperb(const TorsionSolution& t, const AuditTolerance& tol = {});

/// max_u² ≤ (1/2π) ∫|∇u|².
AuditReport audit_payne(const TorsionSolution& t, const AuditTolerance& tol = {});

/// |p| · max_u ≤ (strength/2) · J(argmax_u) + ∫u. At strength 2 and unit area
/// this reads max_u ≤ ∫‖x − x₀‖² + ∫u.
AuditReport audit_eq614(const TorsionSolution& t, const AuditTolerance& tol = {});

/// Test functions for the boundary-flux inequality ∫f ≤ (max_grad/strength) ∮f.
struct TestFunction {
    enum class Kind { Constant, RadialSquare, ShiftedHarmonic };
    Kind kind = Kind::Constant;
    int degree = 0;  // ShiftedHarmonic: Re(z^degree), z about the centroid
    static TestFunction constant() { return {Kind::Constant, 0}; }
    static TestFunction radial_square() { return {Kind::RadialSquare, 0}; }
    static TestFunction shifted_harmonic(int k) { return {Kind::ShiftedHarmonic, k}; }
};

std::function<double(const Point2&)> make_test_function(const ConvexPolygon& p, const TestFunction& f);
std::string to_string(const TestFunction& f);

/// Throws InputError when f is negative at a boundary node.
AuditReport audit_hermite_hadamard(const TorsionSolution& t, const std::function<double(const Point2&)>& f,
                                   const std::string& label, const AuditTolerance& tol = {});
AuditReport audit_hermite_hadamard(const TorsionSolution& t, const TestFunction& f, const AuditTolerance& tol = {});

struct SaintVenantSample {
    double rigidity;
    double asymmetry;
    double deficit;  // T(disk) − T(p)
    double ratio;    // deficit / asymmetry³ (NaN when the asymmetry is below 1e-3)
};
struct SaintVenantReport {
    double disk_rigidity;
    std::vector<SaintVenantSample> samples;
    double min_ratio;  // over samples with a defined ratio
    bool all_nonnegative;
};
/// Unit-area polygons at strength 2; T(disk) = 1/(4π).
SaintVenantReport quantitative_saint_venant_check(const std::vector<ConvexPolygon>& samples,
                                                  const SolveOptions& opt = {}, double tol = 1e-6);

}  // namespace torsionlab
