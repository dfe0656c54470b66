#include "smoothcvx/function.hpp"

#include "smoothcvx/errors.hpp"

namespace smoothcvx {

Function::Function(std::string name, Domain domain, ValueFn value, SubgradientFn subgradient,
                   LocalLipschitzFn local_lipschitz, Traits traits)
    : impl_(std::make_shared<const Impl>(Impl{std::move(name), std::move(domain), std::move(value),
                                              std::move(subgradient), std::move(local_lipschitz),
                                              traits})) {
  if (!impl_->value) throw Error("function handle needs a value callable");
}

Function Function::from_expr(const ConvexExpr& expr) {
  Traits traits;
  traits.convex_certified = true;
  traits.smoothness = expr.smoothness();
  try {
    traits.global_lipschitz = expr.lipschitz_on_domain().value;
  } catch (const UnboundedError&) {
  }
  return Function(
      expr.to_string(), expr.domain(), [expr](PointView x) { return expr.evaluate(x); },
      [expr](PointView x, std::span<double> g) {
        if (!expr.domain().contains(x)) throw DomainError("point outside the domain of the expression");
        return expr.value_and_subgradient(x, g);
      },
      [expr](const Ball& b) -> std::optional<double> {
        try {
          return expr.lipschitz_on(b).value;
        } catch (const UnboundedError&) {
          return std::nullopt;
        }
      },
      traits);
}

Function Function::uncertified(std::string name, Domain domain, ValueFn value) {
  return Function(std::move(name), std::move(domain), std::move(value), nullptr, nullptr, Traits{});
}

double Function::value_and_subgradient(PointView x, std::span<double> grad) const {
  if (!impl_->subgradient) throw Error("function '" + impl_->name + "' has no subgradient oracle");
  return impl_->subgradient(x, grad);
}

Point Function::subgradient(PointView x) const {
  Point g(dim(), 0.0);
  value_and_subgradient(x, g);
  return g;
}

std::optional<double> Function::lipschitz_on(const Ball& ball) const {
  if (impl_->local_lipschitz) return impl_->local_lipschitz(ball);
  return impl_->traits.global_lipschitz;
}

}  // namespace smoothcvx
