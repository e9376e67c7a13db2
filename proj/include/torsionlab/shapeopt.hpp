#pragma once

#include "torsionlab/bie.hpp"
#include "torsionlab/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace torsionlab {

/// Star-shaped parametrization: points radii[i]·(cos angles[i], sin angles[i]).
/// With `mirror`, each point is also reflected by x ↦ −x (points on the axis
/// are not duplicated), so the angles describe the right half only.
struct ShapeParams {
    std::vector<double> angles;
    Eigen::VectorXd radii;
    bool mirror = false;
};

/// Regular n-gon parameters with unit radii. With `mirror` (n even) only the
/// n/2 right-half angles are stored and the y axis passes through the
/// midpoints of the top and bottom edges.
ShapeParams regular_params(int n, bool mirror);

/// Radial parameters of p about its centroid. With `mirror`, only vertices with
/// x ≥ centroid.x are kept; p is assumed symmetric under that reflection.
ShapeParams params_from_polygon(const ConvexPolygon& p, bool mirror);

/// Convex hull of the points, rescaled to unit area with the centroid at the origin.
ConvexPolygon decode(const ShapeParams& params);

/// Coarse mesh used inside the search loop.
inline MeshResolution coarse_resolution() { return {4, 8, 2}; }

/// c(decode(params)) at the given resolution; infeasible decodes and solver
/// failures return `penalty`.
double objective(const ShapeParams& params, const MeshResolution& res, double penalty = -1e3);

struct ShapeCandidate {
    ConvexPolygon polygon;  // unit area, centroid at the origin
    ShapeParams params;
    double c;                  // at solve_resolution
    MeshResolution solve_resolution;
    double coarse_c;           // objective value during the search
    double start_c;            // start re-solved at solve_resolution
    double max_candidate_c;    // largest coarse objective seen
    int evaluations;
    int restarts;
    int failed_evaluations;  // decode or solver failures, scored with the penalty
    std::string last_failure;
    std::vector<double> best_history;  // best coarse objective after each evaluation
};

struct OptimizeOptions {
    MeshResolution coarse = coarse_resolution();
    MeshResolution fine = {16, 8, 4};
    double initial_step = 0.1;   // simplex size in log-radius units
    double restart_spread = 0.05;
    double penalty = -1e3;
};

/// Nelder–Mead on log-radii with seeded random restarts, `budget` objective
/// evaluations in total. The best coarse candidate is re-solved on the fine mesh
/// and replaces the start only if it does at least as well there.
ShapeCandidate optimize(const ShapeParams& start, int budget, std::uint64_t seed, const OptimizeOptions& opt = {});

}  // namespace torsionlab
