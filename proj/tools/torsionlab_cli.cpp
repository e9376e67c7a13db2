// torsionlab command-line front end. Exit codes: 0 success, 2 input error, 3 numerical failure.

#include "torsionlab/bounds.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/io.hpp"
#include "torsionlab/oracles.hpp"
#include "torsionlab/shapeopt.hpp"
#include "torsionlab/torsion.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

using namespace torsionlab;

namespace {

constexpr const char* kVersion = "1.0.0";
const double kThreshold = 1 / std::sqrt(2 * pi);

struct MeshFlags {
    std::optional<int> panels;
    std::optional<int> nodes;
    std::optional<double> grading;

    void attach(CLI::App* app) {
        app->add_option("--panels", panels, "Panels per edge");
        app->add_option("--nodes", nodes, "Gauss nodes per panel");
        app->add_option("--grading", grading, "Corner grading exponent (1 = uniform)");
    }
    MeshResolution resolve(const MeshResolution& fallback) const {
        MeshResolution r = fallback;
        if (panels) r.panels_per_edge = *panels;
        if (nodes) r.nodes_per_panel = *nodes;
        if (grading) r.grading = *grading;
        return r;
    }
};

Json resolution_json(const MeshResolution& r) {
    return Json{{"panels_per_edge", r.panels_per_edge}, {"nodes_per_panel", r.nodes_per_panel}, {"grading", r.grading}};
}

Json base_config(const std::string& command) { return Json{{"command", command}, {"version", kVersion}}; }

void emit(const Json& j, const std::string& out) {
    const std::string text = dump_json(j);
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
}

void check_strength(double s) {
    if (s != 1 && s != 2) throw InputError("--strength must be 1 or 2");
}

Json report_json(const AuditReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"pass", c.pass}});
    return Json{{"name", r.name}, {"passed", r.passed()}, {"checks", checks}};
}

// ---- solve

struct SolveArgs {
    std::string polygon, out, svg;
    double strength = 1;
    MeshFlags mesh;
};

void run_solve(const SolveArgs& a) {
    check_strength(a.strength);
    const ConvexPolygon p = load_polygon(a.polygon);
    SolveOptions opt;
    opt.mesh = a.mesh.resolve(default_resolution(p));
    const TorsionSolution t = solve(p, a.strength, opt);

    Json cfg = base_config("solve");
    cfg["polygon_file"] = a.polygon;
    cfg["polygon"] = polygon_to_json(p);
    cfg["strength"] = a.strength;
    cfg["resolution"] = resolution_json(*opt.mesh);
    cfg["interior_order"] = opt.interior_order;
    cfg["radial_levels"] = opt.radial_levels;
    cfg["multistarts"] = opt.multistarts;

    Json audits = Json::array();
    bool all = true;
    auto add = [&](const AuditReport& r) {
        all = all && r.passed();
        audits.push_back(report_json(r));
    };
    add(audit_sperb(t));
    add(audit_payne(t));
    add(audit_eq614(t));
    for (const auto& f : {TestFunction::constant(), TestFunction::radial_square(), TestFunction::shifted_harmonic(3)})
        add(audit_hermite_hadamard(t, f));

    Json j{{"config", cfg},
           {"area", area(p)},
           {"perimeter", perimeter(p)},
           {"max_grad", t.max_grad},
           {"max_grad_point", point_to_json(t.max_grad_point)},
           {"max_grad_edge", t.max_grad_edge},
           {"max_u", t.max_u},
           {"argmax_u", point_to_json(t.argmax_u)},
           {"rigidity", t.rigidity},
           {"dirichlet_energy", t.dirichlet_energy},
           {"c_value", c_value(t)},
           {"flux_residual", t.flux.residual},
           {"audits", audits},
           {"audits_passed", all}};
    emit(j, a.out);
    if (!a.svg.empty()) write_text(a.svg, render_svg(p, t.max_grad_point));
}

// ---- certify

struct CertifyArgs {
    std::optional<double> T, T_min, T_max;
    std::optional<int> n_T;
    double tol = 1e-16;
    std::string out, csv;
};

Json bound_point_json(const BoundPoint& b) {
    return Json{{"T", b.T},
                {"M", b.M},
                {"center", point_to_json(b.center)},
                {"bound_raw", b.bound_raw},
                {"bound_c", b.bound_c},
                {"survival_mass", b.survival_mass},
                {"bound_raw_exact", b.bound_raw_exact},
                {"M_inside", b.M_inside},
                {"bound_raw_inside", b.bound_raw_inside}};
}

void run_certify(const CertifyArgs& a) {
    std::vector<double> grid;
    Json cfg = base_config("certify");
    if (a.T) {
        if (a.T_min || a.T_max || a.n_T) throw InputError("give either --T or --T-min/--T-max/--n-T, not both");
        if (!(*a.T > 0)) throw InputError("--T must be positive");
        grid = {*a.T};
        cfg["T"] = *a.T;
    } else {
        if (!a.T_min || !a.T_max || !a.n_T) throw InputError("certify needs --T or all of --T-min, --T-max, --n-T");
        if (!(*a.T_min > 0) || !(*a.T_max > *a.T_min)) throw InputError("need 0 < T-min < T-max");
        if (*a.n_T < 2) throw InputError("--n-T must be at least 2");
        for (int i = 0; i < *a.n_T; ++i) grid.push_back(*a.T_min + (*a.T_max - *a.T_min) * i / (*a.n_T - 1));
        cfg["T_min"] = *a.T_min;
        cfg["T_max"] = *a.T_max;
        cfg["n_T"] = *a.n_T;
    }
    cfg["truncation_tol"] = a.tol;
    const BoundResult r = certify_upper_bound(grid, a.tol);
    Json curve = Json::array();
    for (const auto& b : r.curve) curve.push_back(bound_point_json(b));
    Json j{{"config", cfg},
           {"T", r.T},
           {"M", r.M},
           {"center", point_to_json(r.center)},
           {"bound_raw", r.bound_raw},
           {"bound_c", r.bound_c},
           {"bound_raw_exact", r.bound_raw_exact},
           {"bound_c_exact", r.bound_c_exact},
           {"threshold", kThreshold},
           {"below_threshold", r.below_threshold},
           {"minimizer_at_boundary", r.minimizer_at_boundary},
           {"curve", curve}};
    emit(j, a.out);
    if (!a.csv.empty()) write_text(a.csv, bound_curve_csv(r));
}

// ---- optimize

struct OptimizeArgs {
    std::string polygon, out, svg;
    int n = 10;
    bool mirror = true;
    int budget = 2000;
    std::uint64_t seed = 1;
    MeshFlags mesh;
};

Json params_json(const ShapeParams& p) {
    Json angles = Json::array(), radii = Json::array();
    for (double x : p.angles) angles.push_back(x);
    for (Eigen::Index i = 0; i < p.radii.size(); ++i) radii.push_back(p.radii(i));
    return Json{{"angles", angles}, {"radii", radii}, {"mirror", p.mirror}};
}

void run_optimize(const OptimizeArgs& a) {
    if (a.budget < 0) throw InputError("--budget must be nonnegative");
    Json cfg = base_config("optimize");
    ShapeParams start;
    if (!a.polygon.empty()) {
        const ConvexPolygon p = load_polygon(a.polygon);
        start = params_from_polygon(p, a.mirror);
        cfg["polygon_file"] = a.polygon;
        cfg["polygon"] = polygon_to_json(p);
    } else {
        start = regular_params(a.n, a.mirror);
        cfg["start"] = "regular";
        cfg["n"] = a.n;
    }
    OptimizeOptions opt;
    opt.fine = a.mesh.resolve(opt.fine);
    cfg["mirror"] = a.mirror;
    cfg["budget"] = a.budget;
    cfg["seed"] = a.seed;
    cfg["coarse_resolution"] = resolution_json(opt.coarse);
    cfg["fine_resolution"] = resolution_json(opt.fine);
    cfg["initial_step"] = opt.initial_step;
    cfg["restart_spread"] = opt.restart_spread;
    cfg["penalty"] = opt.penalty;

    const ShapeCandidate r = optimize(start, a.budget, a.seed, opt);
    const FluxSolution flux = solve_boundary_flux(r.polygon, build_mesh(r.polygon, opt.fine), 1.0);
    const MaxGradient g = max_boundary_gradient(flux);
    Json history = Json::array();
    for (double h : r.best_history) history.push_back(h);
    Json j{{"config", cfg},
           {"c", r.c},
           {"coarse_c", r.coarse_c},
           {"start_c", r.start_c},
           {"max_candidate_c", r.max_candidate_c},
           {"threshold", kThreshold},
           {"candidates_below_threshold", r.max_candidate_c <= kThreshold + 1e-3},
           {"evaluations", r.evaluations},
           {"restarts", r.restarts},
           {"failed_evaluations", r.failed_evaluations},
           {"last_failure", r.last_failure},
           {"max_grad_point", point_to_json(g.point)},
           {"polygon", polygon_to_json(r.polygon)},
           {"params", params_json(r.params)},
           {"best_history", history}};
    emit(j, a.out);
    if (!a.svg.empty()) write_text(a.svg, render_svg(r.polygon, g.point));
}

// ---- asymmetry

struct AsymmetryArgs {
    std::string polygon, out;
};

void run_asymmetry(const AsymmetryArgs& a) {
    const ConvexPolygon p = load_polygon(a.polygon);
    const AsymmetryResult r = fraenkel_asymmetry_detail(p);
    Json cfg = base_config("asymmetry");
    cfg["polygon_file"] = a.polygon;
    cfg["polygon"] = polygon_to_json(p);
    Json j{{"config", cfg},
           {"area", area(p)},
           {"asymmetry", r.value},
           {"ball_center", point_to_json(r.ball_center)},
           {"ball_radius", std::sqrt(area(p) / pi)},
           {"evaluations", r.evaluations}};
    emit(j, a.out);
}

// ---- oracle

struct OracleArgs {
    double a = 0.75;
    std::optional<int> n;
    double R = 1 / std::sqrt(pi);
    double strength = 2;
    double r = 0;
    std::string polygon;
    double x = 0, y = 0;
    long long paths = 1'000'000;
    double delta = 1e-6;
    std::uint64_t seed = 1;
    std::string out;
};

void run_oracle_ellipse(const OracleArgs& a) {
    const EllipseTorsion e(a.a);
    Json cfg = base_config("oracle ellipse");
    cfg["a"] = a.a;
    Json j{{"config", cfg},
           {"a", a.a},
           {"semi_axis_x", e.semi_axis_x()},
           {"semi_axis_y", e.semi_axis_y()},
           {"area", e.area()},
           {"max_grad", e.max_grad()},
           {"c", ellipse_c(a.a)}};
    if (a.n) {
        const ConvexPolygon p = ellipse_polygon(e, *a.n);
        const MeshResolution res = default_resolution(p);
        j["config"]["n"] = *a.n;
        j["config"]["resolution"] = resolution_json(res);
        j["polygon_c"] = c_value(p, res);
    }
    emit(j, a.out);
}

void run_oracle_disk(const OracleArgs& a) {
    const auto f = disk_closed_form(a.R, a.strength, a.r);
    Json cfg = base_config("oracle disk");
    cfg["R"] = a.R;
    cfg["strength"] = a.strength;
    cfg["r"] = a.r;
    Json j{{"config", cfg},
           {"u", f.u},
           {"grad", f.grad},
           {"max_u", a.strength * a.R * a.R / 4},
           {"max_grad", a.strength * a.R / 2},
           {"c", 1 / (2 * std::sqrt(pi))}};
    emit(j, a.out);
}

void run_oracle_optimal(const OracleArgs& a) {
    const OptimalEllipse o = optimal_ellipse();
    Json j{{"config", base_config("oracle optimal-ellipse")}, {"a_star", o.a_star}, {"c_star", o.c_star}};
    emit(j, a.out);
}

void run_oracle_wos(const OracleArgs& a) {
    if (a.polygon.empty()) throw InputError("oracle wos needs --polygon");
    const ConvexPolygon p = load_polygon(a.polygon);
    const Point2 x(a.x, a.y);
    if (!contains(p, x)) throw InputError("oracle wos: point is not inside the polygon");
    const WosConfig w{a.paths, a.delta, a.seed};
    const WosEstimate est = wos_lifetime(p, x, w);
    Json cfg = base_config("oracle wos");
    cfg["polygon_file"] = a.polygon;
    cfg["polygon"] = polygon_to_json(p);
    cfg["point"] = point_to_json(x);
    cfg["paths"] = a.paths;
    cfg["delta"] = a.delta;
    cfg["seed"] = a.seed;
    Json j{{"config", cfg}, {"mean", est.mean}, {"std_error", est.std_error}, {"mean_steps", est.mean_steps}};
    emit(j, a.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Torsion function solver, inequality audits, upper-bound certifier and shape optimizer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the torsion problem on a polygon and run the audits");
    solve_cmd->add_option("--polygon", sa.polygon, "Polygon JSON file")->required();
    solve_cmd->add_option("--strength", sa.strength, "Right-hand side s in -Δu = s (1 or 2)");
    sa.mesh.attach(solve_cmd);
    solve_cmd->add_option("--out", sa.out, "Result JSON (stdout if omitted)");
    solve_cmd->add_option("--svg", sa.svg, "Figure with the max-gradient point");

    CertifyArgs ca;
    auto* cert_cmd = app.add_subcommand("certify", "Evaluate the survivor upper bound over T");
    cert_cmd->add_option("--T", ca.T, "Single T");
    cert_cmd->add_option("--T-min", ca.T_min, "Grid start");
    cert_cmd->add_option("--T-max", ca.T_max, "Grid end");
    cert_cmd->add_option("--n-T", ca.n_T, "Grid size");
    cert_cmd->add_option("--truncation-tol", ca.tol, "Sine series cutoff");
    cert_cmd->add_option("--out", ca.out, "Result JSON (stdout if omitted)");
    cert_cmd->add_option("--csv", ca.csv, "Bound curve CSV");

    OptimizeArgs oa;
    auto* opt_cmd = app.add_subcommand("optimize", "Maximize the gradient constant over convex shapes");
    opt_cmd->add_option("--polygon", oa.polygon, "Start polygon (default: regular n-gon)");
    opt_cmd->add_option("--n", oa.n, "Vertex count of the regular start");
    opt_cmd->add_flag("--mirror,!--no-mirror", oa.mirror, "Impose the x -> -x symmetry");
    opt_cmd->add_option("--budget", oa.budget, "Coarse objective evaluations");
    opt_cmd->add_option("--seed", oa.seed, "Restart seed");
    oa.mesh.attach(opt_cmd);
    opt_cmd->add_option("--out", oa.out, "Result JSON (stdout if omitted)");
    opt_cmd->add_option("--svg", oa.svg, "Figure of the optimized shape");

    AsymmetryArgs aa;
    auto* asym_cmd = app.add_subcommand("asymmetry", "Fraenkel asymmetry of a polygon");
    asym_cmd->add_option("--polygon", aa.polygon, "Polygon JSON file")->required();
    asym_cmd->add_option("--out", aa.out, "Result JSON (stdout if omitted)");

    OracleArgs ora;
    auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form and Monte Carlo reference values");
    oracle_cmd->require_subcommand(1);
    auto* ell = oracle_cmd->add_subcommand("ellipse", "Ellipse family constant");
    ell->add_option("--a", ora.a, "Family parameter in (0, 1)");
    ell->add_option("--n", ora.n, "Also solve on an inscribed n-gon");
    ell->add_option("--out", ora.out, "Result JSON (stdout if omitted)");
    auto* disk = oracle_cmd->add_subcommand("disk", "Disk closed form");
    disk->add_option("--R", ora.R, "Radius (default: unit area)");
    disk->add_option("--strength", ora.strength, "Right-hand side s");
    disk->add_option("--r", ora.r, "Distance from the center");
    disk->add_option("--out", ora.out, "Result JSON (stdout if omitted)");
    auto* best = oracle_cmd->add_subcommand("optimal-ellipse", "Best ellipse in the family");
    best->add_option("--out", ora.out, "Result JSON (stdout if omitted)");
    auto* wos = oracle_cmd->add_subcommand("wos", "Walk-on-spheres expected lifetime (strength 2)");
    wos->add_option("--polygon", ora.polygon, "Polygon JSON file")->required();
    wos->add_option("--x", ora.x, "Point x");
    wos->add_option("--y", ora.y, "Point y");
    wos->add_option("--paths", ora.paths, "Number of paths");
    wos->add_option("--delta", ora.delta, "Stopping distance");
    wos->add_option("--seed", ora.seed, "Seed");
    wos->add_option("--out", ora.out, "Result JSON (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) run_solve(sa);
        else if (*cert_cmd) run_certify(ca);
        else if (*opt_cmd) run_optimize(oa);
        else if (*asym_cmd) run_asymmetry(aa);
        else if (*ell) run_oracle_ellipse(ora);
        else if (*disk) run_oracle_disk(ora);
        else if (*best) run_oracle_optimal(ora);
        else if (*wos) run_oracle_wos(ora);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
