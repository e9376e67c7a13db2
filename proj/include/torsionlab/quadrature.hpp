#pragma once

#include "torsionlab/common.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace torsionlab {

/// Gauss-Legendre rule on [-1, 1].
template <typename Scalar>
struct GaussRule {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
    /// Barycentric interpolation weights for the nodes.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bary;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Nodes by Newton iteration on P_n from the Chebyshev-like initial guesses.
template <typename Scalar>
GaussRule<Scalar> make_gauss_legendre(int n) {
    if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
    GaussRule<Scalar> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Scalar x = std::cos(Scalar(pi) * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1;
            dp = n * (x * p1 - p0) / (x * x - 1);
            Scalar dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 4 * eps) break;
        }
        // recompute derivative at the converged node
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1;
        dp = n * (x * p1 - p0) / (x * x - 1);
        Scalar w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(n - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(n - 1 - i) = w;
    }
    if (n % 2 == 1) rule.nodes(n / 2) = 0;

    rule.bary.resize(n);
    for (int k = 0; k < n; ++k) {
        Scalar prod = 1;
        for (int j = 0; j < n; ++j)
            if (j != k) prod *= (rule.nodes(k) - rule.nodes(j));
        rule.bary(k) = 1 / prod;
    }
    rule.bary /= rule.bary.cwiseAbs().maxCoeff();
    return rule;
}

/// Cached double-precision rule. Thread-safe.
const GaussRule<double>& gauss_legendre(int n);

/// Lagrange basis values at u in [-1, 1] for the rule's nodes (barycentric form).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lagrange_basis(const GaussRule<Scalar>& rule, Scalar u) {
    const int n = rule.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ell(n);
    for (int k = 0; k < n; ++k) {
        if (u == rule.nodes(k)) {
            ell.setZero();
            ell(k) = 1;
            return ell;
        }
    }
    Scalar denom = 0;
    for (int k = 0; k < n; ++k) {
        ell(k) = rule.bary(k) / (u - rule.nodes(k));
        denom += ell(k);
    }
    return ell / denom;
}

/// Writes the Lagrange basis values at u into out[0 .. rule.size()).
template <typename Scalar>
void lagrange_basis(const GaussRule<Scalar>& rule, Scalar u, Scalar* out) {
    const int n = rule.size();
    Scalar denom = 0;
    for (int k = 0; k < n; ++k) {
        if (u == rule.nodes(k)) {
            std::fill(out, out + n, Scalar(0));
            out[k] = 1;
            return;
        }
        out[k] = rule.bary(k) / (u - rule.nodes(k));
        denom += out[k];
    }
    for (int k = 0; k < n; ++k) out[k] /= denom;
}

/// Polynomial interpolant of nodal values at u in [-1, 1].
template <typename Scalar>
Scalar lagrange_interpolate(const GaussRule<Scalar>& rule, const Scalar* values, Scalar u) {
    const int n = rule.size();
    Scalar num = 0, denom = 0;
    for (int k = 0; k < n; ++k) {
        if (u == rule.nodes(k)) return values[k];
        const Scalar w = rule.bary(k) / (u - rule.nodes(k));
        num += w * values[k];
        denom += w;
    }
    return num / denom;
}

/// Composite Gauss-Legendre over the breakpoints, `order` nodes per piece.
/// Returns (nodes, weights) on the real line.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> composite_rule(const Eigen::VectorXd& breaks, int order) {
    const auto& g = gauss_legendre(order);
    const Eigen::Index pieces = breaks.size() - 1;
    Eigen::VectorXd x(pieces * order), w(pieces * order);
    for (Eigen::Index p = 0; p < pieces; ++p) {
        const double a = breaks(p), b = breaks(p + 1);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        x.segment(p * order, order) = (mid + half * g.nodes.array()).matrix();
        w.segment(p * order, order) = half * g.weights;
    }
    return {x, w};
}

/// Adaptive Gauss-Legendre: a piece is accepted when its 8- and 16-point
/// values agree to within tol times the running magnitude.
template <typename F>
double adaptive_gauss(F&& f, double a, double b, double tol = 1e-13, int max_depth = 50) {
    const auto& g8 = gauss_legendre(8);
    const auto& g16 = gauss_legendre(16);
    auto rule = [&](const GaussRule<double>& g, double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        double s = 0;
        for (int k = 0; k < g.size(); ++k) s += g.weights(k) * f(mid + half * g.nodes(k));
        return half * s;
    };
    double total = 0;
    std::vector<std::tuple<double, double, int>> stack{{a, b, 0}};
    while (!stack.empty()) {
        const auto [lo, hi, depth] = stack.back();
        stack.pop_back();
        const double coarse = rule(g8, lo, hi), fine = rule(g16, lo, hi);
        if (depth >= max_depth || std::abs(fine - coarse) <= tol * std::max(std::abs(fine), std::abs(total)) ||
            std::abs(fine - coarse) < 1e-300) {
            total += fine;
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        stack.emplace_back(mid, hi, depth + 1);
        stack.emplace_back(lo, mid, depth + 1);
    }
    return total;
}

}  // namespace torsionlab
