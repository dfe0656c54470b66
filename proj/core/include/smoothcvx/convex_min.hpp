#pragma once

#include <functional>
#include <span>

#include "smoothcvx/point.hpp"

namespace smoothcvx {

/// Answer of a first-order oracle at a query point.
///
/// When `feasible`, `value` is the objective and the oracle has written a
/// subgradient into the output span. Otherwise the span holds the normal `a`
/// of a cut: every feasible y satisfies <a, y - x> <= -depth.
struct OracleAnswer {
  bool feasible = false;
  double value = 0.0;
  double depth = 0.0;
};

using ConvexOracle = std::function<OracleAnswer(PointView x, std::span<double> direction)>;

struct MinimizeOptions {
  /// Stop when best - lower_bound <= tolerance * max(1, |best|).
  double tolerance = 1e-10;
  int max_iterations = 20000;
};

struct MinimizeResult {
  Point argmin;
  double value = 0.0;
  /// Certified lower bound on the minimum over the start ball intersected
  /// with the feasible set.
  double lower_bound = 0.0;
  bool found_feasible = false;
  bool converged = false;
  int iterations = 0;
};

/// Minimizes a convex function over (feasible set) ∩ B(center, radius).
///
/// Deep-cut ellipsoid method for d >= 2, bisection on the subgradient sign
/// for d = 1. The center is always the first query, so a feasible center is
/// part of the candidate set.
MinimizeResult minimize_convex(const ConvexOracle& oracle, PointView center, double radius,
                               const MinimizeOptions& options);

}  // namespace smoothcvx
