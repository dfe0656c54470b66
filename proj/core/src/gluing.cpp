#include "smoothcvx/gluing.hpp"

#include <cmath>
#include <limits>

#include "smoothcvx/errors.hpp"

namespace smoothcvx {

void GluingConfig::validate() const {
  SmoothMaxParams{eps, mollifier_order}.validate();
  if (max_stratum < 1) throw Error("gluing: max_stratum must be at least 1");
  if (max_stratum > kMaxChainLength)
    throw Error("gluing: max_stratum above " + std::to_string(kMaxChainLength) +
                " makes the level constants underflow");
  solver.validate();
}

double BandConstants::lower_shift(int n) const { return 2.0 * eps * (1.0 - std::ldexp(1.0, -n)); }

double BandConstants::center_shift(int n) const { return 2.0 * eps - 3.0 * eps * std::ldexp(1.0, -n); }

double BandConstants::band_width(int n) const { return std::ldexp(eps, -n); }

double BandConstants::lambda(int n) const {
  const double nn = static_cast<double>(n);
  return std::ldexp(eps, -(n + 2)) / (nn * nn);
}

double BandConstants::mu(int n) const { return eps / std::pow(10.0, n); }

double stratum_radius(const Domain& domain, PointView x) {
  return std::min(0.1 * (1.0 + norm(x)), 0.5 * domain.distance_to_boundary(x));
}

int stratum_index(const ConvexExpr& f, PointView x, const GluingConfig& cfg) {
  if (cfg.max_stratum < 1) throw Error("gluing: max_stratum must be at least 1");
  if (x.size() != f.dim()) throw DomainError("stratum: point has the wrong dimension");
  if (!f.domain().contains(x)) throw DomainError("stratum: point outside the domain");
  const Ball region{Point(x.begin(), x.end()), stratum_radius(f.domain(), x)};
  double bound = std::numeric_limits<double>::infinity();
  try {
    bound = f.lipschitz_on(region).value;
  } catch (const UnboundedError&) {
  }
  const double n = std::max(1.0, std::ceil(bound));
  if (!(n <= cfg.max_stratum)) throw StratumOverflow(bound, cfg.max_stratum);
  return static_cast<int>(n);
}

Function build_h(const Function& f, int n, const BandConstants& constants, const GluingConfig& cfg) {
  if (n < 1 || n > cfg.max_stratum) throw Error("build_h: level " + std::to_string(n) + " is out of range");
  const double nn = n;
  const double lambda = constants.lambda(n);
  const double shift = constants.center_shift(n);
  const InnerSolveConfig solver = cfg.solver;

  Function::Traits traits;
  traits.convex_certified = f.convex_certified();
  traits.smoothness = 1;
  traits.global_lipschitz = nn;
  if (f.global_lipschitz()) traits.global_lipschitz = std::min(nn, *f.global_lipschitz());
  const double lip = *traits.global_lipschitz;
  return Function(
      "h" + std::to_string(n), f.domain(),
      [f, nn, lambda, shift, solver](PointView x) {
        return combined_envelope(f, nn, lambda, x, solver).value - shift;
      },
      nullptr, [lip](const Ball&) -> std::optional<double> { return lip; }, traits);
}

GluedApprox::State::State(ConvexExpr e, const GluingConfig& c)
    : expr(std::move(e)), base(Function::from_expr(expr)), cfg(c), constants{c.eps} {
  levels.resize(static_cast<std::size_t>(c.max_stratum));
}

GluedApprox::GluedApprox(ConvexExpr f, GluingConfig cfg) {
  cfg.validate();
  state_ = std::make_shared<State>(std::move(f), cfg);
}

void GluedApprox::ensure(int n) const {
  if (n < 1 || n > state_->cfg.max_stratum)
    throw StratumOverflow(static_cast<double>(n), state_->cfg.max_stratum);
  if (state_->built.load(std::memory_order_acquire) >= n) return;
  std::lock_guard<std::mutex> lock(state_->extend);
  for (int k = state_->built.load(std::memory_order_relaxed) + 1; k <= n; ++k) {
    const Theta theta(SmoothMaxParams{state_->constants.mu(k), state_->cfg.mollifier_order});
    Function hk = build_h(state_->base, k, state_->constants, state_->cfg);
    Function gk = k == 1 ? hk : smooth_max_fn(theta, state_->levels[k - 2]->g, hk);
    state_->levels[static_cast<std::size_t>(k - 1)] =
        std::make_unique<Level>(Level{std::move(hk), std::move(gk), theta});
    state_->built.store(k, std::memory_order_release);
  }
}

const GluedApprox::Level& GluedApprox::level(int n) const {
  ensure(n);
  return *state_->levels[static_cast<std::size_t>(n - 1)];
}

const Function& GluedApprox::h(int n) const { return level(n).h; }

const Function& GluedApprox::g(int n) const { return level(n).g; }

int GluedApprox::built_count() const noexcept { return state_->built.load(std::memory_order_acquire); }

double GluedApprox::evaluate_level(int m, PointView x) const {
  ensure(m);
  double acc = 0.0;
  for (int k = 1; k <= m; ++k) {
    const Level& lv = *state_->levels[static_cast<std::size_t>(k - 1)];
    const double hk = lv.h(x);
    acc = k == 1 ? hk : smooth_max_scalar(lv.theta, acc, hk);
  }
  return acc;
}

int GluedApprox::stratum(PointView x) const { return stratum_index(state_->expr, x, state_->cfg); }

double GluedApprox::evaluate(PointView x) const {
  const int n0 = stratum(x);
  if (n0 + 1 > state_->cfg.max_stratum) throw StratumOverflow(n0 + 1.0, state_->cfg.max_stratum);
  return evaluate_level(n0 + 1, x);
}

Function GluedApprox::as_function() const {
  const GluedApprox self = *this;
  Function::Traits traits;
  traits.convex_certified = state_->base.convex_certified();
  traits.smoothness = 1;
  return Function(
      "glued(" + state_->base.name() + ")", state_->base.domain(),
      [self](PointView x) { return self.evaluate(x); }, nullptr, nullptr, traits);
}

GluedApprox glue(const ConvexExpr& f, const GluingConfig& cfg) { return GluedApprox(f, cfg); }

double glue_eval(const GluedApprox& g, PointView x) { return g.evaluate(x); }

}  // namespace smoothcvx
