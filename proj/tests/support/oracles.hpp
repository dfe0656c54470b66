#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solvers.

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes and weights on [-1, 1], roots found by Newton's
/// method on the Legendre recurrence.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out;
  const double pi = std::acos(-1.0);
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return out;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, int n = 40) {
  double s = 0.0;
  for (const auto& [x, w] : gauss_legendre(n)) s += w * f(0.5 * (a + b) + 0.5 * (b - a) * x);
  return 0.5 * (b - a) * s;
}

struct Minimum {
  double arg;
  double value;
};

/// Golden-section search for a convex function on [a, b].
inline Minimum golden(const std::function<double(double)>& f, double a, double b, double tol = 1e-11) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  Minimum m{c, fc};
  if (fd < m.value) m = {d, fd};
  const double fa = f(a), fb = f(b);
  if (fa < m.value) m = {a, fa};
  if (fb < m.value) m = {b, fb};
  return m;
}

/// Minimum over a uniform grid of m points on [a, b].
inline Minimum grid_min(const std::function<double(double)>& f, double a, double b, int m) {
  Minimum best{a, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < m; ++i) {
    const double x = a + (b - a) * i / (m - 1);
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

}  // namespace oracle
