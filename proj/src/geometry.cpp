#include "torsionlab/geometry.hpp"
#include "torsionlab/optim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace torsionlab {

namespace {

double diameter_of(const Eigen::Matrix2Xd& v) {
    double d2 = 0;
    for (Eigen::Index i = 0; i < v.cols(); ++i)
        for (Eigen::Index j = i + 1; j < v.cols(); ++j) d2 = std::max(d2, (v.col(i) - v.col(j)).squaredNorm());
    return std::sqrt(d2);
}

double shoelace(const Eigen::Matrix2Xd& v) {
    double s = 0;
    const Eigen::Index n = v.cols();
    for (Eigen::Index i = 0; i < n; ++i) s += cross(v.col(i), v.col((i + 1) % n));
    return 0.5 * s;
}

}  // namespace

ConvexPolygon::ConvexPolygon(Eigen::Matrix2Xd vertices) : vertices_(std::move(vertices)) {
    const Eigen::Index n = vertices_.cols();
    if (n < 3) throw InputError("polygon needs at least 3 vertices");
    if (!vertices_.allFinite()) throw InputError("polygon has non-finite coordinates");
    const double diam = diameter_of(vertices_);
    diameter_ = diam;
    if (!(diam > 0)) throw InputError("degenerate polygon (zero diameter)");
    const double tol = 1e-12 * diam * diam;
    double turning = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 e0 = vertices_.col((i + 1) % n) - vertices_.col(i);
        const Vec2 e1 = vertices_.col((i + 2) % n) - vertices_.col((i + 1) % n);
        if (e0.norm() <= 1e-14 * diam) {
            std::ostringstream msg;
            msg << "polygon has repeated vertex at index " << (i + 1) % n;
            throw InputError(msg.str());
        }
        const double c = cross(e0, e1);
        if (c < -tol) {
            std::ostringstream msg;
            msg << "polygon is not convex/counterclockwise at vertex " << (i + 1) % n << " (turn " << c << ")";
            throw InputError(msg.str());
        }
        turning += std::atan2(c, e0.dot(e1));
    }
    if (std::abs(turning - 2 * pi) > 1e-6) throw InputError("polygon does not wind exactly once");
    if (!(shoelace(vertices_) > 0)) throw InputError("polygon has nonpositive area");
}

ConvexPolygon ConvexPolygon::from_points(const std::vector<Point2>& pts) {
    Eigen::Matrix2Xd v(2, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = pts[i];
    if (v.cols() >= 3 && shoelace(v) < 0) v = v.rowwise().reverse().eval();
    return ConvexPolygon(std::move(v));
}

Vec2 ConvexPolygon::inward_normal(Eigen::Index i) const {
    const Vec2 t = edge(i).normalized();
    return Vec2(-t.y(), t.x());
}

ConvexPolygon ConvexPolygon::translated(const Vec2& t) const {
    return ConvexPolygon(vertices_.colwise() + t);
}

ConvexPolygon ConvexPolygon::scaled(double s, const Point2& about) const {
    if (!(s > 0)) throw InputError("scale factor must be positive");
    return ConvexPolygon(((vertices_.colwise() - about) * s).colwise() + about);
}

ConvexPolygon ConvexPolygon::rotated(double angle, const Point2& about) const {
    const Eigen::Rotation2Dd rot(angle);
    return ConvexPolygon((rot.toRotationMatrix() * (vertices_.colwise() - about)).colwise() + about);
}

ConvexPolygon ConvexPolygon::reindexed(Eigen::Index k) const {
    const Eigen::Index n = size();
    Eigen::Matrix2Xd v(2, n);
    for (Eigen::Index i = 0; i < n; ++i) v.col(i) = vertex(i + k);
    return ConvexPolygon(std::move(v));
}

double area(const ConvexPolygon& p) { return shoelace(p.vertices()); }

double perimeter(const ConvexPolygon& p) {
    double s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += p.edge(i).norm();
    return s;
}

Point2 centroid(const ConvexPolygon& p) {
    const Point2 o = p.vertex(0);
    Point2 c = Point2::Zero();
    double a = 0;
    for (Eigen::Index i = 1; i + 1 < p.size(); ++i) {
        const Vec2 u = p.vertex(i) - o, w = p.vertex(i + 1) - o;
        const double t = 0.5 * cross(u, w);
        c += t * (u + w) / 3.0;
        a += t;
    }
    return o + c / a;
}

double signed_distance(const ConvexPolygon& p, const Point2& x) {
    double inside = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i) inside = std::min(inside, p.inward_normal(i).dot(x - p.vertex(i)));
    if (inside >= 0) return inside;
    double outside = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Vec2 e = p.edge(i);
        const double t = std::clamp((x - p.vertex(i)).dot(e) / e.squaredNorm(), 0.0, 1.0);
        outside = std::min(outside, (x - (p.vertex(i) + t * e)).norm());
    }
    return -outside;
}

Inradius inradius_and_center(const ConvexPolygon& p) {
    // The inscribed radius at c is min_i n_i·(c − a_i), a concave function, so
    // nested golden-section searches over x and y reach the maximum.
    const Eigen::Vector2d lo = p.vertices().rowwise().minCoeff();
    const Eigen::Vector2d hi = p.vertices().rowwise().maxCoeff();
    const double tol = 1e-13 * p.diameter();
    auto depth = [&](double x, double y) {
        double r = std::numeric_limits<double>::infinity();
        const Point2 c(x, y);
        for (Eigen::Index i = 0; i < p.size(); ++i) r = std::min(r, p.inward_normal(i).dot(c - p.vertex(i)));
        return r;
    };
    auto best_y = [&](double x) { return golden_section_max([&](double y) { return depth(x, y); }, lo.y(), hi.y(), tol); };
    const double x = golden_section_max([&](double x) { return depth(x, best_y(x)); }, lo.x(), hi.x(), tol);
    const double y = best_y(x);
    return {depth(x, y), Point2(x, y)};
}

namespace {

// Signed area of disk(0, r) ∩ triangle(0, a, b).
double disk_triangle_area(const Vec2& a, const Vec2& b, double r) {
    const Vec2 d = b - a;
    const double A = d.squaredNorm();
    if (A == 0) return 0;
    const double B = a.dot(d);
    const double C = a.squaredNorm() - r * r;
    double ts[4] = {0, 0, 0, 1};
    int nt = 1;
    const double disc = B * B - A * C;
    if (disc > 0) {
        const double sq = std::sqrt(disc);
        const double t1 = (-B - sq) / A, t2 = (-B + sq) / A;
        if (t1 > 0 && t1 < 1) ts[nt++] = t1;
        if (t2 > 0 && t2 < 1) ts[nt++] = t2;
    }
    ts[nt++] = 1;
    double total = 0;
    for (int k = 0; k + 1 < nt; ++k) {
        const Vec2 p = a + ts[k] * d, q = a + ts[k + 1] * d;
        const Vec2 mid = 0.5 * (p + q);
        if (mid.squaredNorm() <= r * r) {
            total += 0.5 * cross(p, q);
        } else {
            total += 0.5 * r * r * std::atan2(cross(p, q), p.dot(q));
        }
    }
    return total;
}

}  // namespace

double circle_polygon_intersection_area(const ConvexPolygon& p, const DiskSpec& d) {
    if (!(d.radius > 0)) throw InputError("disk radius must be positive");
    double s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        s += disk_triangle_area(p.vertex(i) - d.center, p.vertex(i + 1) - d.center, d.radius);
    return std::clamp(s, 0.0, std::min(area(p), pi * d.radius * d.radius));
}

AsymmetryResult fraenkel_asymmetry_detail(const ConvexPolygon& p) {
    const double A = area(p);
    const double R = std::sqrt(A / pi);
    const Point2 c0 = centroid(p);
    // work in units of R about the centroid
    auto overlap = [&](const Eigen::VectorXd& z) {
        return circle_polygon_intersection_area(p, DiskSpec{c0 + R * Point2(z(0), z(1)), R});
    };
    NelderMeadOptions opt;
    opt.initial_step = 0.05;
    opt.xtol = 1e-10;
    opt.ftol = 1e-15;
    opt.max_evals = 4000;

    const Point2 starts[2] = {Point2::Zero(), (inradius_and_center(p).center - c0) / R};
    double best = -1;
    Point2 best_center = c0;
    int evals = 0;
    for (const auto& s : starts) {
        auto res = nelder_mead([&](const Eigen::VectorXd& z) { return -overlap(z); }, Eigen::VectorXd(s), opt);
        evals += res.evals;
        if (!res.converged) {
            std::ostringstream msg;
            msg << "fraenkel_asymmetry: center search did not converge after " << res.evals
                << " evaluations (best overlap " << -res.f << " of area " << A << ")";
            throw NumericalError(msg.str());
        }
        if (-res.f > best) {
            best = -res.f;
            best_center = c0 + R * Point2(res.x(0), res.x(1));
        }
    }
    const double value = std::clamp(2.0 * (1.0 - best / A), 0.0, 2.0);
    return {value, best_center, evals};
}

double polar_momentum(const ConvexPolygon& p, const Point2& origin) {
    double s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Vec2 a = p.vertex(i) - origin, b = p.vertex(i + 1) - origin;
        s += 0.5 * cross(a, b) * (a.squaredNorm() + b.squaredNorm() + a.dot(b)) / 6.0;
    }
    return s;
}

double sublevel_area(const ConvexPolygon& p, double r) {
    if (r < 0) throw InputError("sublevel_area: r must be nonnegative");
    if (r == 0) return 0;
    return circle_polygon_intersection_area(p, DiskSpec{Point2::Zero(), r});
}

double cone_hull_area(double rho, double d) {
    if (d < rho) throw InputError("cone_hull_area: apex distance below rho");
    return rho * std::sqrt(d * d - rho * rho) + rho * rho * (pi - std::acos(rho / d));
}

ConeHull cone_hull(double rho, double target_area, int n_arc) {
    if (!(rho > 0) || !(target_area > 0)) throw InputError("cone_hull: rho and target_area must be positive");
    if (n_arc < 3) throw InputError("cone_hull: n_arc must be >= 3");
    const double disk = pi * rho * rho;
    if (disk > target_area * (1 + 1e-12))
        throw InputError("cone_hull: rho too large, the disk alone exceeds the target area");

    double d = rho;
    if (disk < target_area * (1 - 1e-14)) {
        double hi = 2 * rho;
        while (cone_hull_area(rho, hi) < target_area) hi *= 2;
        d = bisect([&](double x) { return cone_hull_area(rho, x) - target_area; }, rho, hi, 1e-15);
    }

    std::vector<Point2> pts;
    if (d > rho * (1 + 1e-12)) {
        const double beta = std::acos(rho / d);
        pts.emplace_back(d, 0.0);
        for (int k = 0; k < n_arc; ++k) {
            const double th = beta + (2 * pi - 2 * beta) * k / (n_arc - 1);
            pts.emplace_back(rho * std::cos(th), rho * std::sin(th));
        }
    } else {
        for (int k = 0; k < n_arc; ++k) {
            const double th = 2 * pi * k / n_arc;
            pts.emplace_back(rho * std::cos(th), rho * std::sin(th));
        }
    }
    ConvexPolygon poly = ConvexPolygon::from_points(pts);
    // inscribed arc vertices lose a little area; restore the exact hull area
    poly = poly.scaled(std::sqrt(target_area / area(poly)));
    return {rho, d, std::move(poly)};
}

ConvexPolygon regular_ngon(int n, double target_area) {
    if (n < 3) throw InputError("regular_ngon: n must be >= 3");
    if (!(target_area > 0)) throw InputError("regular_ngon: area must be positive");
    const double R = std::sqrt(2 * target_area / (n * std::sin(2 * pi / n)));
    Eigen::Matrix2Xd v(2, n);
    for (int k = 0; k < n; ++k) {
        const double th = -pi / 2 + pi / n + 2 * pi * k / n;
        v.col(k) << R * std::cos(th), R * std::sin(th);
    }
    return ConvexPolygon(std::move(v));
}

namespace {

DiskSpec disk_from(const Point2& a, const Point2& b) { return {0.5 * (a + b), 0.5 * (a - b).norm()}; }

DiskSpec disk_from(const Point2& a, const Point2& b, const Point2& c) {
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2 * cross(ab, ac);
    if (std::abs(d) < 1e-300) {
        DiskSpec best = disk_from(a, b);
        for (const auto& cand : {disk_from(a, c), disk_from(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const Vec2 off((ac.y() * ab.squaredNorm() - ab.y() * ac.squaredNorm()) / d,
                   (ab.x() * ac.squaredNorm() - ac.x() * ab.squaredNorm()) / d);
    return {a + off, off.norm()};
}

bool in_disk(const DiskSpec& d, const Point2& x) { return (x - d.center).norm() <= d.radius * (1 + 1e-12) + 1e-300; }

}  // namespace

DiskSpec min_enclosing_disk(const ConvexPolygon& p) {
    std::vector<Point2> pts;
    for (Eigen::Index i = 0; i < p.size(); ++i) pts.push_back(p.vertex(i));
    std::mt19937 rng(12345);
    std::shuffle(pts.begin(), pts.end(), rng);
    DiskSpec d{pts[0], 0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (in_disk(d, pts[i])) continue;
        d = {pts[i], 0};
        for (std::size_t j = 0; j < i; ++j) {
            if (in_disk(d, pts[j])) continue;
            d = disk_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k)
                if (!in_disk(d, pts[k])) d = disk_from(pts[i], pts[j], pts[k]);
        }
    }
    return d;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& q : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0) --k;
        hull[k++] = q;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        const auto& q = pts[i];
        while (k >= t && cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0) --k;
        hull[k++] = q;
    }
    hull.resize(k - 1);
    return hull;
}

ConvexPolygon with_area(const ConvexPolygon& p, double target_area) {
    return p.scaled(std::sqrt(target_area / area(p)), centroid(p));
}

}  // namespace torsionlab
