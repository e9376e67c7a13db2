#include "support.hpp"

#include "torsionlab/bounds.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

using namespace torsionlab;
using boost::math::quadrature::gauss_kronrod;

namespace {

const double kSqrt2OverPi = std::sqrt(2 / pi);

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

TEST_CASE("hitting time distribution") {
    CHECK(hitting_cdf(0, 0.5) == 1);
    CHECK(hitting_cdf(0.3, 1e12) == doctest::Approx(1).epsilon(1e-6).scale(0));
    // 2 − 2Φ(1) with Φ from the error function
    const double phi1 = 0.5 * (1 + std::erf(1 / std::sqrt(2.0)));
    CHECK(hitting_cdf(1, 1) == doctest::Approx(2 - 2 * phi1).epsilon(1e-14).scale(0));
    CHECK(std::abs(hitting_cdf(1, 1) - 0.3173) < 1e-4);
    for (double t : {1e-3, 0.1, 1.0, 10.0}) {
        const double v = hitting_cdf(0.2, t);
        CHECK(v >= 0);
        CHECK(v <= 1);
    }
    CHECK_THROWS_AS(hitting_cdf(-1, 1), InputError);
    CHECK_THROWS_AS(hitting_cdf(1, 0), InputError);
}

TEST_CASE("hitting time density") {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double eps : {0.01, 0.3, 1.0}) {
        for (double t : {0.05, 0.5, 3.0}) {
            const double integral = ts.integrate([&](double s) { return s > 0 ? hitting_density(eps, s) : 0.0; }, 0.0, t);
            CHECK(integral == doctest::Approx(hitting_cdf(eps, t)).epsilon(1e-8).scale(0));
        }
        // total mass one: the t^{-3/2} tail needs a half-line rule
        boost::math::quadrature::exp_sinh<double> es;
        const double total = es.integrate(
            [&](double t) { return t > 0 && std::isfinite(t) ? hitting_density(eps, t) : 0.0; });
        CHECK(total == doctest::Approx(1).epsilon(1e-8).scale(0));

        // mode at eps²/3
        const double m = eps * eps / 3;
        CHECK(hitting_density(eps, m) > hitting_density(eps, m * (1 + 1e-4)));
        CHECK(hitting_density(eps, m) > hitting_density(eps, m * (1 - 1e-4)));
        const double h = 1e-6 * m;
        const double dlog = (std::log(hitting_density(eps, m + h)) - std::log(hitting_density(eps, m - h))) / (2 * h);
        CHECK(std::abs(dlog) * m < 1e-6);

        // t^{-3/2} tail
        const double t = 1e8;
        CHECK(hitting_density(eps, t) * std::pow(t, 1.5) == doctest::Approx(eps / std::sqrt(2 * pi)).epsilon(1e-6).scale(0));
    }
    CHECK_THROWS_AS(hitting_density(0, 1), InputError);
}

TEST_CASE("expected hitting time below a cutoff") {
    const double v = mean_before_T(0.01, 0.13);
    CHECK(v <= 0.01 * kSqrt2OverPi * std::sqrt(0.13));
    const double oracle =
        gauss_kronrod<double, 61>::integrate([](double t) { return t * hitting_density(0.01, t); }, 1e-300, 0.13, 15, 1e-14);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-9).scale(0));
    CHECK(mean_before_T(0.5, 1e-6) < 1e-30);
    for (double lambda : {0.5, 3.0}) {
        for (auto [eps, T] : {std::pair{0.01, 0.13}, std::pair{0.4, 2.0}}) {
            CHECK(mean_before_T(lambda * eps, lambda * lambda * T) ==
                  doctest::Approx(lambda * lambda * mean_before_T(eps, T)).epsilon(1e-10).scale(0));
        }
    }
}

TEST_CASE("survivor profile of the strip") {
    for (double T : {0.01, 0.05, 0.13, 0.5}) {
        const StripKernelParams k(T);
        const std::vector<double> grid = linspace(0, pi, 2001);
        const std::vector<double> prof = strip_survivor_profile(k, grid);
        for (double p : prof) CHECK(p >= -1e-12);
        CHECK(std::abs(prof.front()) < 1e-12);
        CHECK(std::abs(prof.back()) < 1e-9);

        const double integral = gauss_kronrod<double, 61>::integrate(
            [&](double y) { return strip_survivor_profile(k, y); }, 0.0, pi, 15, 1e-13);
        CHECK(integral == doctest::Approx(strip_survival_mass(k)).epsilon(1e-10).scale(0));
        double odd = 0;
        for (int j = 1; j < 1000; j += 2) odd += std::exp(-0.5 * j * j * T);
        CHECK(strip_survival_mass(k) == doctest::Approx(4 / pi * odd).epsilon(1e-13).scale(0));
        if (T <= 0.05) {
            const double ratio = strip_survival_mass(k) / (kSqrt2OverPi / std::sqrt(T));
            CHECK(ratio >= 0.99);
            CHECK(ratio <= 1.01);
        }
    }
    CHECK_THROWS_AS(StripKernelParams(0), InputError);
}

TEST_CASE("survivor density") {
    const StripKernelParams k(0.13);
    const double r = 6 * std::sqrt(k.T);
    for (double x : linspace(-r, r, 41))
        for (double y : linspace(0, pi, 41)) CHECK(survivor_density_s(k, x, y) >= -1e-12);
    for (double x : {-0.4, 0.1, 0.7})
        for (double y : {0.2, 1.3})
            for (double y2 : {0.5, 2.9})
                CHECK(survivor_density_s(k, x, y) * survivor_density_s(k, 0, y2) ==
                      doctest::Approx(survivor_density_s(k, 0, y) * survivor_density_s(k, x, y2)).epsilon(1e-12).scale(0));

    // total mass by 2-D quadrature
    const double total = gauss_kronrod<double, 61>::integrate(
        [&](double y) {
            return gauss_kronrod<double, 61>::integrate([&](double x) { return survivor_density_s(k, x, y); }, -r * 2,
                                                        r * 2, 10, 1e-13);
        },
        0.0, pi, 10, 1e-12);
    CHECK(total == doctest::Approx(survivor_density_total(k)).epsilon(1e-9).scale(0));
    // tends to one as T → 0
    CHECK(survivor_density_total(StripKernelParams(1e-4)) == doctest::Approx(1).epsilon(1e-6).scale(0));
    CHECK(survivor_density_total(k) < 1);
}

TEST_CASE("survivor integral against a disk") {
    const StripKernelParams k(0.13);
    const double R = 1 / std::sqrt(pi);
    // direct 2-D quadrature over the disk clipped to the strip, x inner on each chord
    for (const Point2 c : {Point2(0, 0.3), Point2(0.2, 0.9), Point2(-0.1, 3.0)}) {
        const double y0 = std::max(0.0, c.y() - R), y1 = std::min(pi, c.y() + R);
        const double direct = gauss_kronrod<double, 61>::integrate(
            [&](double y) {
                const double h = std::sqrt(std::max(0.0, R * R - (y - c.y()) * (y - c.y())));
                if (h == 0) return 0.0;
                return gauss_kronrod<double, 61>::integrate(
                    [&](double x) {
                        const double rho2 = (x - c.x()) * (x - c.x()) + (y - c.y()) * (y - c.y());
                        return survivor_density_s(k, x, y) * std::max(0.0, 1 / (2 * pi) - 0.5 * rho2);
                    },
                    c.x() - h, c.x() + h, 8, 1e-12);
            },
            y0, y1, 8, 1e-11);
        CHECK(survivor_disk_integral(k, c) == doctest::Approx(direct).epsilon(1e-6).scale(0));
    }

    const SurvivorIntegral m = survivor_integral_M(k);
    // x = 0 is optimal: a scan over x_c at the optimal height never improves
    for (double xc : linspace(-0.5, 0.5, 21))
        CHECK(survivor_disk_integral(k, Point2(xc, m.center.y())) <= m.M + 1e-12);
    CHECK(std::abs(m.center.x()) < 1e-6);
    // Hölder: s integrates to at most survivor_density_total and v ≤ 1/(2π)
    CHECK(m.M <= survivor_density_total(k) / (2 * pi));
    CHECK(m.M > 0);
    const SurvivorIntegral inside = survivor_integral_M_inside(k);
    CHECK(inside.M <= m.M + 1e-15);
    CHECK(inside.center.y() >= R - 1e-12);
}

TEST_CASE("bound at the reference time") {
    const BoundPoint b = bound_at(0.13);
    CHECK(b.bound_raw == doctest::Approx(0.77).epsilon(0.01 / 0.77).scale(0));
    CHECK(b.bound_c == doctest::Approx(0.385).epsilon(0.005 / 0.385).scale(0));
    CHECK(b.bound_c == b.bound_raw / 2);
    CHECK(b.bound_raw ==
          doctest::Approx(kSqrt2OverPi * std::sqrt(b.T) + kSqrt2OverPi * (b.T + b.M) / std::sqrt(b.T)).epsilon(1e-15).scale(0));
    // back-solved from the assembly at 0.77
    CHECK(std::abs(b.M - 0.088) < 0.01);
    CHECK(b.bound_c < 1 / std::sqrt(2 * pi));
    CHECK(b.M_inside <= b.M);
    CHECK(b.bound_raw_inside <= b.bound_raw);
}

TEST_CASE("certification over a grid") {
    const BoundResult one = certify_upper_bound({0.13});
    CHECK(one.below_threshold);
    CHECK(!one.minimizer_at_boundary);
    CHECK(one.bound_c < 0.3989);

    const BoundResult r = certify_upper_bound(linspace(0.05, 0.5, 10));
    CHECK(r.below_threshold);
    CHECK(r.bound_c <= one.bound_c);
    for (const BoundPoint& p : r.curve) CHECK(p.bound_raw >= r.bound_raw);
    // both ends of the T range lose
    CHECK(bound_at(0.01).bound_raw > r.bound_raw);
    CHECK(bound_at(2).bound_raw > r.bound_raw);

    const BoundResult edge = certify_upper_bound({1.0, 2.0, 3.0});
    CHECK(edge.minimizer_at_boundary);
    CHECK_THROWS_AS(certify_upper_bound({}), InputError);
    CHECK_THROWS_AS(certify_upper_bound({0.1, -1}), InputError);
}

TEST_CASE("minimizer of the bound over [0.05, 0.5]" * doctest::should_fail()) {
    // the curve keeps falling below T = 0.13; its grid minimum sits near T = 0.09
    const BoundResult r = certify_upper_bound(linspace(0.05, 0.5, 46));
    CHECK(std::abs(r.T - 0.13) <= 0.01);
    CHECK(r.bound_c == doctest::Approx(0.385).epsilon(0.005 / 0.385).scale(0));
}

TEST_CASE("series truncation is converged") {
    for (double T : {0.05, 0.13, 0.5}) {
        const BoundPoint a = bound_at(T, 1e-16);
        const StripKernelParams base(T, 1e-16);
        // twice as many terms
        double tol = 1e-16;
        while (StripKernelParams(T, tol).terms() < 2 * base.terms()) tol /= 10;
        const BoundPoint b = bound_at(T, tol);
        CHECK(std::abs(a.bound_raw - b.bound_raw) < 1e-10);
        CHECK(std::abs(a.M - b.M) < 1e-10);
        CHECK(std::abs(a.survival_mass - b.survival_mass) < 1e-10);
        CHECK(std::abs(a.bound_raw_exact - b.bound_raw_exact) < 1e-10);
    }
}

TEST_CASE("simulated survivors follow the profile") {
    const double eps = 1e-3, T = 0.2;
    const SurvivorSample s = simulate_survivors(eps, T, 1'000'000, 1e-3, 5);
    const double n = static_cast<double>(s.positions.size());
    REQUIRE(n > 500);
    // survival fraction per unit eps against the strip series
    const StripKernelParams k(T);
    const double frac = n / static_cast<double>(s.n_walks) / eps;
    const double frac_se = std::sqrt(n) / static_cast<double>(s.n_walks) / eps;
    CHECK(std::abs(frac - strip_survival_mass(k)) <= 3 * frac_se);

    // normalized histogram against the normalized profile, bin by bin
    constexpr int bins = 10;
    std::vector<double> count(bins, 0);
    for (double y : s.positions) count[std::size_t(std::min(bins - 1, int(y / pi * bins)))] += 1;
    const double mass = strip_survival_mass(k);
    double worst = 0;
    for (int b = 0; b < bins; ++b) {
        const double lo = pi * b / bins, hi = pi * (b + 1) / bins;
        const double expected = gauss_kronrod<double, 31>::integrate(
                                    [&](double y) { return strip_survivor_profile(k, y); }, lo, hi, 10, 1e-12) /
                                mass;
        const double observed = count[std::size_t(b)] / n;
        const double sigma = std::sqrt(expected * (1 - expected) / n);
        worst = std::max(worst, std::abs(observed - expected) / sigma);
    }
    CHECK(worst <= 3);
    CHECK_THROWS_AS(simulate_survivors(0, T, 10, 1e-3, 1), InputError);
}
