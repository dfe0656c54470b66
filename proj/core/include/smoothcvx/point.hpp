#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace smoothcvx {

/// A point (or vector) of R^d.
using Point = std::vector<double>;
using PointView = std::span<const double>;

inline double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(PointView a) {
  // hypot-style scaling is unnecessary at the magnitudes the corpus reaches
  return std::sqrt(dot(a, a));
}

inline double distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(PointView a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

/// x + t * u
inline Point along(PointView x, double t, PointView u) {
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * u[i];
  return out;
}

/// (1 - t) * x + t * y
inline Point lerp(PointView x, PointView y, double t) {
  Point out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
  return out;
}

}  // namespace smoothcvx
