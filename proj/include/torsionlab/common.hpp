#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace torsionlab {

using Point2 = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

inline constexpr double pi = std::numbers::pi;

/// Bad user input: malformed files, invalid polygons, out-of-range parameters.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: singular systems, non-convergence. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation point lies on an edge of the polygon (sigma = 0 with the foot
/// point inside the segment), where the edge integral is singular.
class OnBoundarySegmentError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Gradient of the volume potential requested at a polygon vertex.
class VertexEvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Interior evaluator called at a point that is not strictly inside.
class OutsideDomainError : public InputError {
public:
    using InputError::InputError;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Number of worker threads: TORSIONLAB_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across worker threads. Each index is visited
/// exactly once; callers write to disjoint slots so results do not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace torsionlab
