#include "torsionlab/bounds.hpp"
#include "torsionlab/optim.hpp"
#include "torsionlab/quadrature.hpp"

#include <cmath>
#include <random>

namespace torsionlab {

namespace {

const double kSqrt2OverPi = std::sqrt(2 / pi);
const double kDiskRadius = 1 / std::sqrt(pi);

// Σ_{k=1}^{n} c_k sin(k y) with c_k = k exp(−k²T/2)
double sine_series(const StripKernelParams& p, double y) {
    const int n = p.terms();
    double s = 0;
    for (int k = 1; k <= n; ++k) s += k * std::exp(-0.5 * k * k * p.T) * std::sin(k * y);
    return s;
}

double odd_sum(const StripKernelParams& p) {
    const int n = p.terms();
    double s = 0;
    for (int k = 1; k <= n; k += 2) s += std::exp(-0.5 * k * k * p.T);
    return s;
}

SurvivorIntegral maximize_center(const StripKernelParams& k, double y_lo, double y_hi) {
    if (!(y_hi > y_lo)) throw InputError("survivor_integral_M: empty center range");
    auto f = [&](double yc) { return survivor_disk_integral(k, Point2(0, yc)); };
    constexpr int n = 200;
    int best = 0;
    double best_v = -1;
    for (int i = 0; i <= n; ++i) {
        const double v = f(y_lo + (y_hi - y_lo) * i / n);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const double a = y_lo + (y_hi - y_lo) * std::max(0, best - 1) / n;
    const double b = y_lo + (y_hi - y_lo) * std::min(n, best + 1) / n;
    const double yc = golden_section_max(f, a, b, 1e-11);
    const double v = f(yc);
    if (v >= best_v) return {v, Point2(0, yc)};
    return {best_v, Point2(0, y_lo + (y_hi - y_lo) * best / n)};
}

}  // namespace

double hitting_cdf(double eps, double t) {
    if (eps < 0 || !(t > 0)) throw InputError("hitting_cdf: need eps >= 0 and t > 0");
    return std::erfc(eps / std::sqrt(2 * t));
}

double hitting_density(double eps, double t) {
    if (!(eps > 0) || !(t > 0)) throw InputError("hitting_density: need eps > 0 and t > 0");
    // log form: the prefactor overflows before the exponential underflows for tiny t
    return std::exp(std::log(eps) - 0.5 * std::log(2 * pi) - 1.5 * std::log(t) - eps * eps / (2 * t));
}

double mean_before_T(double eps, double T) {
    if (!(eps > 0) || !(T > 0)) throw InputError("mean_before_T: need eps > 0 and T > 0");
    // t = r²: t ψ(t) dt = 2 eps/√(2π) exp(−eps²/(2r²)) dr, smooth on [0, √T]
    const double c = 2 * eps / std::sqrt(2 * pi);
    return adaptive_gauss(
        [&](double r) { return r > 0 ? c * std::exp(-eps * eps / (2 * r * r)) : 0.0; }, 0.0, std::sqrt(T), 1e-14);
}

StripKernelParams::StripKernelParams(double T_, double tol) : T(T_), truncation_tol(tol) {
    if (!(T > 0)) throw InputError("strip kernel: T must be positive");
    if (!(tol > 0)) throw InputError("strip kernel: truncation tolerance must be positive");
}

int StripKernelParams::terms() const {
    // k exp(−k²T/2) increases up to k = 1/√T, so the cut is taken past the peak
    const double peak = 1 / std::sqrt(T);
    int k = 1;
    while (k <= peak || k * std::exp(-0.5 * k * k * T) >= truncation_tol) ++k;
    return k - 1;
}

double strip_survivor_profile(const StripKernelParams& k, double y) { return 2 / pi * sine_series(k, y); }

std::vector<double> strip_survivor_profile(const StripKernelParams& k, const std::vector<double>& y_grid) {
    std::vector<double> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) out.push_back(strip_survivor_profile(k, y));
    return out;
}

double strip_survival_mass(const StripKernelParams& k) { return 4 / pi * odd_sum(k); }

double survivor_density_s(const StripKernelParams& k, double x, double y) {
    return std::exp(-x * x / (2 * k.T)) / pi * sine_series(k, y);
}

double survivor_density_total(const StripKernelParams& k) { return 2 * std::sqrt(2 * pi * k.T) / pi * odd_sum(k); }

double survivor_disk_integral(const StripKernelParams& k, const Point2& center) {
    const double R = kDiskRadius, T = k.T;
    const double xc = center.x(), yc = center.y();
    const double y_lo = std::max(0.0, yc - R), y_hi = std::min(pi, yc + R);
    if (!(y_hi > y_lo)) return 0;
    const double th0 = std::asin(std::clamp((y_lo - yc) / R, -1.0, 1.0));
    const double th1 = std::asin(std::clamp((y_hi - yc) / R, -1.0, 1.0));
    const double root = std::sqrt(2 * T);
    auto gauss = [&](double x) { return std::exp(-x * x / (2 * T)); };
    // y = yc + R sin θ; the chord x-integral is closed form
    auto integrand = [&](double th) {
        const double y = yc + R * std::sin(th);
        const double h = R * std::cos(th);
        const double a = xc - h, b = xc + h;
        const double i0 = std::sqrt(pi * T / 2) * (std::erf(b / root) - std::erf(a / root));
        const double i1 = T * (gauss(a) - gauss(b));
        const double i2 = T * i0 + T * (a * gauss(a) - b * gauss(b));
        const double c = 0.5 * h * h;
        const double chord = (c - 0.5 * xc * xc) * i0 + xc * i1 - 0.5 * i2;
        return sine_series(k, y) / pi * chord * R * std::cos(th);
    };
    Eigen::VectorXd breaks = Eigen::VectorXd::LinSpaced(17, th0, th1);
    const auto [nodes, weights] = composite_rule(breaks, 16);
    double s = 0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights(i) * integrand(nodes(i));
    return s;
}

SurvivorIntegral survivor_integral_M(const StripKernelParams& k) {
    return maximize_center(k, -kDiskRadius, pi + kDiskRadius);
}

SurvivorIntegral survivor_integral_M(const StripKernelParams& k, double y_lo, double y_hi) {
    return maximize_center(k, y_lo, y_hi);
}

SurvivorIntegral survivor_integral_M_inside(const StripKernelParams& k) {
    return maximize_center(k, kDiskRadius, pi - kDiskRadius);
}

BoundPoint bound_at(double T, double truncation_tol) {
    const StripKernelParams k(T, truncation_tol);
    const SurvivorIntegral m = survivor_integral_M(k);
    const SurvivorIntegral inside = survivor_integral_M_inside(k);
    const double sq = std::sqrt(T);
    BoundPoint b;
    b.T = T;
    b.M = m.M;
    b.center = m.center;
    b.bound_raw = kSqrt2OverPi * sq + kSqrt2OverPi * (T + m.M) / sq;
    b.bound_c = b.bound_raw / 2;
    b.survival_mass = strip_survival_mass(k);
    b.bound_raw_exact = kSqrt2OverPi * sq + b.survival_mass * (T + m.M / survivor_density_total(k));
    b.M_inside = inside.M;
    b.bound_raw_inside = kSqrt2OverPi * sq + kSqrt2OverPi * (T + inside.M) / sq;
    return b;
}

BoundResult certify_upper_bound(const std::vector<double>& T_grid, double truncation_tol) {
    if (T_grid.empty()) throw InputError("certify_upper_bound: empty T grid");
    for (double T : T_grid)
        if (!(T > 0) || !std::isfinite(T)) throw InputError("certify_upper_bound: T values must be positive");
    std::vector<BoundPoint> curve(T_grid.size());
    parallel_for(T_grid.size(), [&](std::size_t i) { curve[i] = bound_at(T_grid[i], truncation_tol); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].bound_raw < curve[best].bound_raw) best = i;
    const BoundPoint& b = curve[best];
    BoundResult r;
    r.T = b.T;
    r.M = b.M;
    r.center = b.center;
    r.bound_raw = b.bound_raw;
    r.bound_c = b.bound_c;
    r.bound_raw_exact = b.bound_raw_exact;
    r.bound_c_exact = b.bound_raw_exact / 2;
    r.below_threshold = r.bound_c < 1 / std::sqrt(2 * pi);
    r.minimizer_at_boundary = curve.size() > 1 && (best == 0 || best + 1 == curve.size());
    r.curve = std::move(curve);
    return r;
}

SurvivorSample simulate_survivors(double eps, double T, long long n_walks, double dt, std::uint64_t seed) {
    if (!(eps > 0 && eps < pi) || !(T > 0) || n_walks < 1 || !(dt > 0))
        throw InputError("simulate_survivors: invalid parameters");
    const long long steps = std::max(1LL, static_cast<long long>(std::ceil(T / dt)));
    const double h = T / static_cast<double>(steps);
    const double sd = std::sqrt(h);
    constexpr long long chunk = 4096;
    const long long n_chunks = (n_walks + chunk - 1) / chunk;
    std::vector<std::vector<double>> alive(static_cast<std::size_t>(n_chunks));
    parallel_for(alive.size(), [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(std::uint64_t(c) >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0, sd);
        std::uniform_real_distribution<double> unif(0, 1);
        const long long first = static_cast<long long>(c) * chunk;
        const long long last = std::min(n_walks, first + chunk);
        for (long long w = first; w < last; ++w) {
            double y = eps;
            bool dead = false;
            for (long long s = 0; s < steps && !dead; ++s) {
                const double y1 = y + normal(rng);
                if (y1 <= 0 || y1 >= pi) {
                    dead = true;
                    break;
                }
                // probability that the bridge from y to y1 touched each barrier
                const double p0 = std::exp(-2 * y * y1 / h);
                const double p1 = std::exp(-2 * (pi - y) * (pi - y1) / h);
                if (unif(rng) < p0 || unif(rng) < p1) dead = true;
                y = y1;
            }
            if (!dead) alive[c].push_back(y);
        }
    });
    SurvivorSample out{{}, n_walks};
    for (auto& v : alive) out.positions.insert(out.positions.end(), v.begin(), v.end());
    return out;
}

}  // namespace torsionlab
