#include "smoothcvx/smooth_max.hpp"

#include <algorithm>
#include <cmath>

#include "smoothcvx/errors.hpp"

namespace smoothcvx {
namespace {

constexpr int kMaxOrder = 32;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void SmoothMaxParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("smooth max: eps must be positive and finite");
  if (mollifier_order < 2 || mollifier_order > kMaxOrder)
    throw Error("smooth max: mollifier order must lie in [2, " + std::to_string(kMaxOrder) + "]");
}

Theta::Theta(const SmoothMaxParams& params) : eps_(params.eps), order_(params.mollifier_order) {
  params.validate();
  const int k = order_;
  // c_k = (2k+1)! / (2^(2k+1) (k!)^2) normalizes (1 - u^2)^k on [-1, 1].
  norm_ = 0.5;
  for (int i = 1; i <= k; ++i) norm_ *= (2.0 * i + 1.0) / (2.0 * i);

  // Excess at distance w from the window edge (u = 1 - v):
  //   2 int_0^w (w - v) c (v (2 - v))^k dv
  //   = 2c sum_j C(k,j) 2^(k-j) (-1)^j w^(k+j+2) / ((k+j+1)(k+j+2)).
  coeffs_.resize(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    coeffs_[static_cast<std::size_t>(j)] = 2.0 * norm_ * binomial(k, j) * std::ldexp(1.0, k - j) * sign /
                                           ((k + j + 1.0) * (k + j + 2.0));
  }
}

double Theta::scaled_excess(double w) const {
  double p = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) p = p * w + coeffs_[j];
  return std::pow(w, order_ + 2) * p;
}

double Theta::scaled_excess_slope(double w) const {
  double p = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) p = p * w + coeffs_[j] * (order_ + 2.0 + j);
  return std::pow(w, order_ + 1) * p;
}

double Theta::excess(double t) const {
  const double a = std::abs(t);
  if (a >= eps_) return 0.0;
  return eps_ * scaled_excess(1.0 - a / eps_);
}

double Theta::operator()(double t) const {
  const double a = std::abs(t);
  if (a >= eps_) return a;
  return a + eps_ * scaled_excess(1.0 - a / eps_);
}

double Theta::derivative(double t) const {
  const double a = std::abs(t);
  const double s = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  if (a >= eps_) return s;
  return s * (1.0 - scaled_excess_slope(1.0 - a / eps_));
}

double Theta::second_derivative(double t) const {
  const double u = t / eps_;
  if (std::abs(u) >= 1.0) return 0.0;
  return 2.0 * norm_ * std::pow(1.0 - u * u, order_) / eps_;
}

Theta make_theta(const SmoothMaxParams& params) { return Theta(params); }

double smooth_max_scalar(const Theta& theta, double x, double y) {
  const double m = std::max(x, y);
  const double d = x - y;
  if (!(std::abs(d) < theta.eps())) return m;
  return m + 0.5 * theta.excess(d);
}

double smooth_max_scalar(const SmoothMaxParams& params, double x, double y) {
  return smooth_max_scalar(Theta(params), x, y);
}

SmoothMaxPartials smooth_max_partials(const Theta& theta, double x, double y) {
  const double slope = theta.derivative(x - y);
  return {smooth_max_scalar(theta, x, y), 0.5 * (1.0 + slope), 0.5 * (1.0 - slope)};
}

Function smooth_max_fn(const SmoothMaxParams& params, const Function& f, const Function& g) {
  return smooth_max_fn(Theta(params), f, g);
}

Function smooth_max_fn(const Theta& theta, const Function& f, const Function& g) {
  if (!(f.domain() == g.domain())) throw DomainError("smooth max: operands live on different domains");

  Function::Traits traits;
  traits.convex_certified = f.convex_certified() && g.convex_certified();
  traits.smoothness = std::min({f.smoothness(), g.smoothness(), theta.smoothness()});
  if (f.global_lipschitz() && g.global_lipschitz())
    traits.global_lipschitz = std::max(*f.global_lipschitz(), *g.global_lipschitz());

  Function::SubgradientFn sub;
  if (f.has_subgradient() && g.has_subgradient()) {
    sub = [theta, f, g](PointView x, std::span<double> out) {
      Point gf(out.size()), gg(out.size());
      const double a = f.value_and_subgradient(x, gf);
      const double b = g.value_and_subgradient(x, gg);
      const SmoothMaxPartials p = smooth_max_partials(theta, a, b);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.dx * gf[i] + p.dy * gg[i];
      return p.value;
    };
  }
  auto lip = [f, g](const Ball& b) -> std::optional<double> {
    const auto lf = f.lipschitz_on(b);
    const auto lg = g.lipschitz_on(b);
    if (lf && lg) return std::max(*lf, *lg);
    return std::nullopt;
  };
  return Function(
      "M(" + f.name() + ", " + g.name() + ")", f.domain(),
      [theta, f, g](PointView x) { return smooth_max_scalar(theta, f(x), g(x)); }, std::move(sub),
      std::move(lip), traits);
}

}  // namespace smoothcvx
