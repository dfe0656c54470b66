#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "smoothcvx/domain.hpp"
#include "smoothcvx/expr.hpp"
#include "smoothcvx/point.hpp"

namespace smoothcvx {

/// Immutable, cheaply copyable handle to a real function on a domain,
/// carrying the metadata the constructions propagate: convexity certificate,
/// smoothness class and Lipschitz information.
class Function {
 public:
  using ValueFn = std::function<double(PointView)>;
  /// Writes a subgradient into the span and returns the value.
  using SubgradientFn = std::function<double(PointView, std::span<double>)>;
  /// Lipschitz constant on a closed ball, when one is known.
  using LocalLipschitzFn = std::function<std::optional<double>(const Ball&)>;

  struct Traits {
    bool convex_certified = false;
    int smoothness = 0;
    std::optional<double> global_lipschitz;
  };

  Function(std::string name, Domain domain, ValueFn value, SubgradientFn subgradient,
           LocalLipschitzFn local_lipschitz, Traits traits);

  static Function from_expr(const ConvexExpr& expr);
  /// A raw callable with no certificate (fault injection, oracles).
  static Function uncertified(std::string name, Domain domain, ValueFn value);

  double operator()(PointView x) const { return impl_->value(x); }
  [[nodiscard]] bool has_subgradient() const noexcept { return static_cast<bool>(impl_->subgradient); }
  double value_and_subgradient(PointView x, std::span<double> grad) const;
  [[nodiscard]] Point subgradient(PointView x) const;

  [[nodiscard]] std::optional<double> lipschitz_on(const Ball& ball) const;
  [[nodiscard]] std::optional<double> global_lipschitz() const noexcept { return impl_->traits.global_lipschitz; }

  [[nodiscard]] const Domain& domain() const noexcept { return impl_->domain; }
  [[nodiscard]] std::size_t dim() const noexcept { return impl_->domain.dim(); }
  [[nodiscard]] const std::string& name() const noexcept { return impl_->name; }
  [[nodiscard]] bool convex_certified() const noexcept { return impl_->traits.convex_certified; }
  [[nodiscard]] int smoothness() const noexcept { return impl_->traits.smoothness; }
  [[nodiscard]] const Traits& traits() const noexcept { return impl_->traits; }

 private:
  struct Impl {
    std::string name;
    Domain domain;
    ValueFn value;
    SubgradientFn subgradient;
    LocalLipschitzFn local_lipschitz;
    Traits traits;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace smoothcvx
