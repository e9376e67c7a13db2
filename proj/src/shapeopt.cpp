#include "torsionlab/shapeopt.hpp"
#include "torsionlab/optim.hpp"
#include "torsionlab/torsion.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace torsionlab {

ShapeParams regular_params(int n, bool mirror) {
    if (n < 3) throw InputError("regular_params: need at least 3 vertices");
    if (mirror && n % 2 != 0) throw InputError("regular_params: mirrored shapes need an even vertex count");
    ShapeParams p;
    p.mirror = mirror;
    // vertices at π/n + 2πk/n − π/2 put a horizontal edge at the bottom
    for (int k = 0; k < n; ++k) {
        double a = -pi / 2 + pi / n + 2 * pi * k / n;
        a = std::remainder(a, 2 * pi);
        if (!mirror || std::cos(a) > 1e-12) p.angles.push_back(a);
    }
    std::sort(p.angles.begin(), p.angles.end());
    p.radii = Eigen::VectorXd::Ones(Eigen::Index(p.angles.size()));
    return p;
}

ShapeParams params_from_polygon(const ConvexPolygon& poly, bool mirror) {
    const Point2 c = centroid(poly);
    ShapeParams p;
    p.mirror = mirror;
    std::vector<std::pair<double, double>> ar;
    for (Eigen::Index i = 0; i < poly.size(); ++i) {
        const Vec2 d = poly.vertex(i) - c;
        if (mirror && d.x() < -1e-12 * poly.diameter()) continue;
        ar.emplace_back(std::atan2(d.y(), d.x()), d.norm());
    }
    std::sort(ar.begin(), ar.end());
    p.radii.resize(Eigen::Index(ar.size()));
    for (std::size_t i = 0; i < ar.size(); ++i) {
        p.angles.push_back(ar[i].first);
        p.radii(Eigen::Index(i)) = ar[i].second;
    }
    return p;
}

ConvexPolygon decode(const ShapeParams& params) {
    if (params.angles.size() != static_cast<std::size_t>(params.radii.size()))
        throw InputError("decode: angles and radii differ in length");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < params.angles.size(); ++i) {
        const double r = params.radii(Eigen::Index(i));
        if (!(r > 0) || !std::isfinite(r)) throw InputError("decode: radii must be positive");
        const Point2 x = r * Point2(std::cos(params.angles[i]), std::sin(params.angles[i]));
        pts.push_back(x);
        if (params.mirror && std::abs(x.x()) > 1e-12 * r) pts.emplace_back(-x.x(), x.y());
    }
    const auto hull = convex_hull(pts);
    if (hull.size() < 3) throw InputError("decode: degenerate shape (hull has fewer than 3 vertices)");
    const ConvexPolygon p = ConvexPolygon::from_points(hull);
    const ConvexPolygon unit = with_area(p, 1.0);
    return unit.translated(-centroid(unit));
}

double objective(const ShapeParams& params, const MeshResolution& res, double penalty) {
    try {
        return c_value(decode(params), res);
    } catch (const InputError&) {
        return penalty;
    } catch (const NumericalError&) {
        return penalty;
    }
}

ShapeCandidate optimize(const ShapeParams& start, int budget, std::uint64_t seed, const OptimizeOptions& opt) {
    if (budget < 0) throw InputError("optimize: budget must be nonnegative");
    ShapeCandidate out{decode(start), start, 0, opt.fine, 0, 0, -std::numeric_limits<double>::infinity(), 0, 0, 0, {}, {}};
    out.start_c = c_value(out.polygon, opt.fine);
    out.c = out.start_c;
    if (budget == 0) {
        out.coarse_c = out.start_c;
        return out;
    }

    const Eigen::VectorXd x0 = start.radii.array().log().matrix();
    auto params_of = [&](const Eigen::VectorXd& logr) {
        ShapeParams p = start;
        p.radii = logr.array().exp().matrix();
        return p;
    };
    Eigen::VectorXd best_x = x0;
    double best_f = -std::numeric_limits<double>::infinity();
    int used = 0;
    auto f = [&](const Eigen::VectorXd& logr) {
        // a simplex step may ask for a few points past the budget; those are not evaluated
        if (used >= budget) return std::numeric_limits<double>::infinity();
        ++used;
        double c = opt.penalty;
        try {
            c = c_value(decode(params_of(logr)), opt.coarse);
        } catch (const std::runtime_error& e) {
            ++out.failed_evaluations;
            out.last_failure = e.what();
        }
        out.max_candidate_c = std::max(out.max_candidate_c, c);
        if (c > best_f) {
            best_f = c;
            best_x = logr;
        }
        out.best_history.push_back(best_f);
        return -c;
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0, opt.restart_spread);
    Eigen::VectorXd from = x0;
    while (used < budget) {
        NelderMeadOptions nm;
        nm.initial_step = opt.initial_step;
        nm.max_evals = budget - used;
        nm.xtol = 1e-6;
        nm.ftol = 1e-10;
        nelder_mead(f, from, nm);
        if (used >= budget) break;
        ++out.restarts;
        from = best_x;
        for (Eigen::Index i = 0; i < from.size(); ++i) from(i) += jitter(rng);
    }

    out.evaluations = used;
    out.coarse_c = best_f;
    const ShapeParams best = params_of(best_x);
    const ConvexPolygon poly = decode(best);
    const double fine_c = c_value(poly, opt.fine);
    if (fine_c >= out.start_c) {
        out.polygon = poly;
        out.params = best;
        out.c = fine_c;
    }
    return out;
}

}  // namespace torsionlab
