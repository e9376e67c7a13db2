#include "torsionlab/oracles.hpp"
#include "torsionlab/optim.hpp"
#include "torsionlab/quadrature.hpp"

#include <limits>
#include <random>
#include <vector>

namespace torsionlab {

EllipseTorsion::EllipseTorsion(double a_) : a(a_) {
    if (!(a > 0 && a < 1)) throw InputError("ellipse parameter a must lie in (0, 1)");
}

ConvexPolygon ellipse_polygon(const EllipseTorsion& e, int n) {
    if (n < 3) throw InputError("ellipse_polygon: need at least 3 vertices");
    const double A = e.semi_axis_x(), B = e.semi_axis_y();
    const auto& g = gauss_legendre(64);
    // arclength from parameter angle 0 to t, over quarter-turn pieces
    auto arc = [&](double t) {
        double s = 0;
        for (double lo = 0; lo < t; lo += 0.5 * pi) {
            const double hi = std::min(t, lo + 0.5 * pi), half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            for (int k = 0; k < g.size(); ++k) {
                const double th = mid + half * g.nodes(k);
                s += half * g.weights(k) * std::hypot(A * std::sin(th), B * std::cos(th));
            }
        }
        return s;
    };
    const double total = arc(2 * pi);
    Eigen::Matrix2Xd v(2, n);
    for (int k = 0; k < n; ++k) {
        const double target = total * (k + 0.5) / n;
        const double t = bisect([&](double th) { return arc(th) - target; }, 0.0, 2 * pi, 1e-15);
        v.col(k) << A * std::cos(t), B * std::sin(t);
    }
    return ConvexPolygon(v);
}

double ellipse_c(double a) {
    if (!(a > 0 && a < 1)) throw InputError("ellipse_c: a must lie in (0, 1)");
    return std::sqrt(2 * a) * std::pow(a * (1 - a), 0.25) / std::sqrt(2 * pi);
}

OptimalEllipse optimal_ellipse() {
    // d/da log c = 3/(4a) − 1/(4(1 − a)) is decreasing on (0, 1)
    const double a = bisect([](double t) { return 3 / (4 * t) - 1 / (4 * (1 - t)); }, 0.5, 1 - 1e-12, 1e-15);
    return {a, ellipse_c(a)};
}

namespace {

struct ChunkSums {
    double sum = 0;
    double sum_sq = 0;
    double steps = 0;
};

double boundary_distance(const Eigen::Matrix2Xd& base, const Eigen::Matrix2Xd& normals, const Point2& x) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < base.cols(); ++i) d = std::min(d, (x - base.col(i)).dot(normals.col(i)));
    return d;
}

// splitmix64 finalizer over (seed, path)
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + path + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

WosEstimate wos_lifetime(const ConvexPolygon& p, const Point2& x, const WosConfig& cfg) {
    if (cfg.n_paths < 1) throw InputError("wos_lifetime: n_paths must be >= 1");
    if (!(cfg.stop_distance > 0)) throw InputError("wos_lifetime: stop distance must be positive");
    if (!(signed_distance(p, x) > 0)) throw OutsideDomainError("wos_lifetime: start point is not inside the domain");

    Eigen::Matrix2Xd base(2, p.size()), normals(2, p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        base.col(i) = p.vertex(i);
        normals.col(i) = p.inward_normal(i);
    }
    constexpr long long chunk = 4096;
    const long long n_chunks = (cfg.n_paths + chunk - 1) / chunk;
    std::vector<ChunkSums> sums(static_cast<std::size_t>(n_chunks));
    parallel_for(sums.size(), [&](std::size_t c) {
        std::uniform_real_distribution<double> angle(0, 2 * pi);
        const long long first = static_cast<long long>(c) * chunk;
        const long long last = std::min(cfg.n_paths, first + chunk);
        ChunkSums s;
        for (long long k = first; k < last; ++k) {
            // one substream per path: runs that differ only in the stop distance share each path's prefix
            std::mt19937_64 rng(path_seed(cfg.seed, static_cast<std::uint64_t>(k)));
            Point2 y = x;
            double t = 0;
            for (;;) {
                const double r = boundary_distance(base, normals, y);
                if (r < cfg.stop_distance) break;
                t += 0.5 * r * r;
                const double th = angle(rng);
                y += r * Vec2(std::cos(th), std::sin(th));
                s.steps += 1;
            }
            s.sum += t;
            s.sum_sq += t * t;
        }
        sums[c] = s;
    });
    ChunkSums total;
    for (const auto& s : sums) {
        total.sum += s.sum;
        total.sum_sq += s.sum_sq;
        total.steps += s.steps;
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double mean = total.sum / n;
    const double var = n > 1 ? std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n), total.steps / n};
}

}  // namespace torsionlab
