#pragma once

#include <span>
#include <vector>

#include "smoothcvx/function.hpp"

namespace smoothcvx {

struct SmoothMaxParams {
  double eps = 0.1;
  /// Exponent k of the mollifier (1 - (s/eps)^2)^k; k >= 2.
  int mollifier_order = 2;

  void validate() const;
};

/// Mollified absolute value: theta = |.| * rho with the normalized polynomial
/// mollifier rho(s) = c_k (1 - (s/eps)^2)^k supported on [-eps, eps].
///
/// theta equals |t| off (-eps, eps) and exceeds it inside; it is convex,
/// even, 1-Lipschitz and positive. Inside the window the excess theta - |t|
/// is a precomputed polynomial in w = 1 - |t|/eps whose lowest term is
/// w^(k+2), so it stays accurate near the window edge.
class Theta {
 public:
  explicit Theta(const SmoothMaxParams& params);

  double operator()(double t) const;
  /// theta(t) - |t| >= 0, zero exactly when |t| >= eps.
  [[nodiscard]] double excess(double t) const;
  [[nodiscard]] double derivative(double t) const;
  [[nodiscard]] double second_derivative(double t) const;

  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] int mollifier_order() const noexcept { return order_; }
  /// rho is C^(k-1), so theta = |.| * rho is C^(k+1).
  [[nodiscard]] int smoothness() const noexcept { return order_ + 1; }
  /// Normalizing constant c_k of the mollifier on [-1, 1].
  [[nodiscard]] double normalization() const noexcept { return norm_; }
  /// Coefficients e_j of excess(t)/eps = w^(k+2) * sum_j e_j w^j.
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }

 private:
  double scaled_excess(double w) const;
  double scaled_excess_slope(double w) const;

  double eps_;
  int order_;
  double norm_;
  std::vector<double> coeffs_;
};

Theta make_theta(const SmoothMaxParams& params);

/// M(x, y) = (x + y + theta(x - y)) / 2, returning max(x, y) bit-exactly
/// whenever |x - y| >= eps.
double smooth_max_scalar(const Theta& theta, double x, double y);
double smooth_max_scalar(const SmoothMaxParams& params, double x, double y);

struct SmoothMaxPartials {
  double value;
  double dx;
  double dy;
};
SmoothMaxPartials smooth_max_partials(const Theta& theta, double x, double y);

/// Pointwise x -> M(f(x), g(x)). Throws DomainError unless f and g share a
/// domain. The handle is certified convex when both inputs are, its Lipschitz
/// constant on a ball is the max of the inputs', and its smoothness is the
/// min of the inputs' and theta's.
Function smooth_max_fn(const SmoothMaxParams& params, const Function& f, const Function& g);
Function smooth_max_fn(const Theta& theta, const Function& f, const Function& g);

}  // namespace smoothcvx
