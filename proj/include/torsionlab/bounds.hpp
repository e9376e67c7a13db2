#pragma once

#include "torsionlab/common.hpp"

#include <cstdint>
#include <vector>

namespace torsionlab {

/// P(hitting time of 0 ≤ t) for 1-D Brownian motion started at eps ≥ 0:
/// 2 − 2Φ(eps/√t) = erfc(eps/√(2t)).
double hitting_cdf(double eps, double t);

/// Density of that hitting time: eps/(√(2π) t^{3/2}) · exp(−eps²/(2t)).
double hitting_density(double eps, double t);

/// ∫₀ᵀ t ψ(t) dt by adaptive quadrature (bounded above by eps √(2/π) √T).
double mean_before_T(double eps, double T);

/// Heat kernel on [0, π] with absorbing ends, time scaled for standard
/// Brownian motion. Series are cut at the first k with k·exp(−k²T/2) < tol.
struct StripKernelParams {
    double T;
    double truncation_tol = 1e-16;

    StripKernelParams(double T_, double tol = 1e-16);
    int terms() const;
};

/// Limit survivor profile per unit starting distance:
/// (2/π) Σ k exp(−k²T/2) sin(k y).
double strip_survivor_profile(const StripKernelParams& k, double y);
std::vector<double> strip_survivor_profile(const StripKernelParams& k, const std::vector<double>& y_grid);

/// ∫₀^π of the profile: (4/π) Σ_{k odd} exp(−k²T/2).
double strip_survival_mass(const StripKernelParams& k);

/// Survivor density normalized by the half-line survival asymptotic:
/// s(x, y) = exp(−x²/(2T))/π · Σ k exp(−k²T/2) sin(k y).
double survivor_density_s(const StripKernelParams& k, double x, double y);

/// ∫∫ s over ℝ × [0, π]: (2√(2πT)/π) Σ_{k odd} exp(−k²T/2); tends to 1 as T → 0.
double survivor_density_total(const StripKernelParams& k);

/// ∫ s(x, y) · v(x, y) dx dy over the strip, v = (1/(2π) − |(x, y) − center|²/2)₊
/// the unit-area disk lifetime. The x integral is done in closed form.
double survivor_disk_integral(const StripKernelParams& k, const Point2& center);

struct SurvivorIntegral {
    double M;
    Point2 center;
};
/// Maximum of survivor_disk_integral over disk centers with x = 0 and
/// y ∈ [y_lo, y_hi]; the default range is all translations that meet the strip.
SurvivorIntegral survivor_integral_M(const StripKernelParams& k);
SurvivorIntegral survivor_integral_M(const StripKernelParams& k, double y_lo, double y_hi);
/// Variant with the disk kept inside the strip.
SurvivorIntegral survivor_integral_M_inside(const StripKernelParams& k);

struct BoundPoint {
    double T;
    double M;
    Point2 center;
    double bound_raw;  // √(2/π)√T + √(2/π)(T + M)/√T
    double bound_c;    // bound_raw / 2
    // survivors normalized by the exact strip survival mass instead of √(2/π)/√T
    double survival_mass;
    double bound_raw_exact;
    // disk center constrained to the strip
    double M_inside;
    double bound_raw_inside;
};

BoundPoint bound_at(double T, double truncation_tol = 1e-16);

struct BoundResult {
    double T;
    double M;
    Point2 center;
    double bound_raw;
    double bound_c;
    double bound_raw_exact;
    double bound_c_exact;
    bool below_threshold;       // bound_c < 1/√(2π)
    bool minimizer_at_boundary; // grid minimum at the first or last T
    std::vector<BoundPoint> curve;
};

/// Evaluates the bound on the grid and keeps the minimizer.
BoundResult certify_upper_bound(const std::vector<double>& T_grid, double truncation_tol = 1e-16);

struct SurvivorSample {
    std::vector<double> positions;  // y of the walks alive at time T
    long long n_walks;
};
/// 1-D Brownian walks from eps, killed at 0 and π, advanced with steps of size dt
/// and a Brownian-bridge crossing test per step for each barrier.
SurvivorSample simulate_survivors(double eps, double T, long long n_walks, double dt, std::uint64_t seed);

}  // namespace torsionlab
