#pragma once

#include "torsionlab/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace torsionlab {

struct NelderMeadOptions {
    double initial_step = 0.1;
    double xtol = 1e-10;
    double ftol = 1e-14;
    int max_evals = 2000;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0;
    int evals = 0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free minimization with the classic coefficients (1, 2, 1/2, 1/2).
/// Terminates when the simplex diameter is below xtol and the value spread below
/// ftol, or when max_evals is exhausted. Evaluation order is fixed, so results
/// are deterministic.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {}) {
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    NelderMeadResult res;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evals;
        return f(x);
    };
    values[0] = eval(x0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double step = x0(i) != 0 ? opt.initial_step * std::max(1.0, std::abs(x0(i))) : opt.initial_step;
        simplex[i + 1](i) += step;
        values[i + 1] = eval(simplex[i + 1]);
    }
    std::vector<int> order(n + 1);

    while (res.evals < opt.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
        {
            std::vector<Eigen::VectorXd> s2(n + 1);
            std::vector<double> v2(n + 1);
            for (Eigen::Index i = 0; i <= n; ++i) {
                s2[i] = simplex[order[i]];
                v2[i] = values[order[i]];
            }
            simplex.swap(s2);
            values.swap(v2);
        }
        double diam = 0;
        for (Eigen::Index i = 1; i <= n; ++i) diam = std::max(diam, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
        if (diam <= opt.xtol && std::abs(values[n] - values[0]) <= opt.ftol * (1 + std::abs(values[0]))) {
            res.converged = true;
            break;
        }
        ++res.iterations;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[i];
        centroid /= double(n);

        const Eigen::VectorXd xr = centroid + (centroid - simplex[n]);
        const double fr = eval(xr);
        if (fr < values[0]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[n]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if (fr < values[n - 1]) {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        const bool outside = fr < values[n];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (simplex[n] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : values[n])) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        for (Eigen::Index i = 1; i <= n; ++i) {
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
            values[i] = eval(simplex[i]);
        }
    }
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();
    res.x = simplex[best];
    res.f = values[best];
    return res;
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
/// Returns the abscissa.
template <typename F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

/// Bisection root of a continuous function with f(lo), f(hi) of opposite sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14, int max_iter = 300) {
    double flo = f(lo);
    for (int it = 0; it < max_iter && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace torsionlab
