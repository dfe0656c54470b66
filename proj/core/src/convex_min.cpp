#include "smoothcvx/convex_min.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace smoothcvx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool gap_closed(const MinimizeResult& r, double tolerance) {
  return r.found_feasible && r.value - r.lower_bound <= tolerance * std::max(1.0, std::abs(r.value));
}

MinimizeResult bisect(const ConvexOracle& oracle, double center, double radius,
                      const MinimizeOptions& options) {
  MinimizeResult r;
  r.argmin = {center};
  r.value = kInf;
  r.lower_bound = -kInf;

  double lo = center - radius;
  double hi = center + radius;
  double x = center;
  double g = 0.0;
  for (r.iterations = 0; r.iterations < options.max_iterations; ++r.iterations) {
    const OracleAnswer a = oracle(PointView(&x, 1), std::span<double>(&g, 1));
    if (a.feasible) {
      if (a.value < r.value) {
        r.value = a.value;
        r.argmin[0] = x;
        r.found_feasible = true;
      }
      if (g == 0.0) {
        r.lower_bound = a.value;
        r.converged = true;
        return r;
      }
      const double far = g > 0.0 ? lo : hi;
      r.lower_bound = std::max(r.lower_bound, a.value + g * (far - x));
      // Any improving y satisfies a.value + g (y - x) <= best.
      const double shift = (r.value - a.value) / g;
      if (g > 0.0)
        hi = std::min(hi, x + shift);
      else
        lo = std::max(lo, x + shift);
    } else {
      if (g > 0.0)
        hi = std::min(hi, x - a.depth / g);
      else if (g < 0.0)
        lo = std::max(lo, x + a.depth / (-g));
      else
        break;
    }
    if (gap_closed(r, options.tolerance)) {
      r.converged = true;
      return r;
    }
    if (!(lo < hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    x = mid;
  }
  if (r.found_feasible && !(lo < hi)) {
    // The cuts left no point that improves on the incumbent.
    r.lower_bound = r.value;
  }
  r.converged = gap_closed(r, options.tolerance);
  return r;
}

}  // namespace

MinimizeResult minimize_convex(const ConvexOracle& oracle, PointView center, double radius,
                               const MinimizeOptions& options) {
  const std::size_t d = center.size();
  if (d == 1) return bisect(oracle, center[0], radius, options);

  MinimizeResult r;
  r.argmin.assign(center.begin(), center.end());
  r.value = kInf;
  r.lower_bound = -kInf;

  const double dd = static_cast<double>(d);
  Point c(center.begin(), center.end());
  Point g(d), pg(d);
  std::vector<double> P(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) P[i * d + i] = radius * radius;

  for (r.iterations = 0; r.iterations < options.max_iterations; ++r.iterations) {
    std::fill(g.begin(), g.end(), 0.0);
    const OracleAnswer a = oracle(c, g);

    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += P[i * d + j] * g[j];
      pg[i] = s;
    }
    const double gpg = dot(g, pg);
    if (!(gpg > 0.0) || !std::isfinite(gpg)) {
      if (a.feasible) {
        if (a.value < r.value) {
          r.value = a.value;
          r.argmin = c;
          r.found_feasible = true;
        }
        if (norm(g) == 0.0) r.lower_bound = a.value;
      }
      break;
    }
    const double s = std::sqrt(gpg);

    double alpha = 0.0;
    if (a.feasible) {
      if (a.value < r.value) {
        r.value = a.value;
        r.argmin = c;
        r.found_feasible = true;
      }
      r.lower_bound = std::max(r.lower_bound, a.value - s);
      alpha = (a.value - r.value) / s;
    } else {
      alpha = a.depth / s;
    }
    if (gap_closed(r, options.tolerance)) {
      r.converged = true;
      return r;
    }
    if (alpha >= 1.0) {
      // The remaining ellipsoid holds no point better than the incumbent.
      if (r.found_feasible) {
        r.lower_bound = r.value;
        r.converged = true;
      }
      return r;
    }

    const double step = (1.0 + dd * alpha) / (dd + 1.0);
    for (std::size_t i = 0; i < d; ++i) c[i] -= step * pg[i] / s;
    const double scale = dd * dd / (dd * dd - 1.0) * (1.0 - alpha * alpha);
    const double rank1 = 2.0 * (1.0 + dd * alpha) / ((dd + 1.0) * (1.0 + alpha)) / gpg;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        const double v = scale * (P[i * d + j] - rank1 * pg[i] * pg[j]);
        P[i * d + j] = v;
        P[j * d + i] = v;
      }
    }
  }
  r.converged = gap_closed(r, options.tolerance);
  return r;
}

}  // namespace smoothcvx
