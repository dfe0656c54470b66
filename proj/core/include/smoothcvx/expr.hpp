#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smoothcvx/domain.hpp"
#include "smoothcvx/point.hpp"

namespace smoothcvx {

enum class NodeKind { Affine, Abs, Norm, SqNorm, Max, Scale, Sum, Pow, Exp, Softplus, Recip1m };

/// One node of a convex expression tree. Nodes are immutable and shared.
struct Node {
  NodeKind kind = NodeKind::Affine;
  Point coeffs;        // affine / abs / softplus: linear part
  double offset = 0.0; // affine / abs / softplus: constant part
  double scalar = 0.0; // scale: factor c >= 0; pow: exponent p >= 1
  std::vector<std::shared_ptr<const Node>> children;
};

using NodePtr = std::shared_ptr<const Node>;

/// Closed Euclidean ball, used as a region for local bounds.
struct Ball {
  Point center;
  double radius = 0.0;
};

/// Range of values of a subexpression over a region. A strict end means the
/// bound is not attained.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_strict = false;
  bool hi_strict = false;
};

enum class LipschitzMethod { AnalyticBound, SampledSubgradient };

struct LipschitzEstimate {
  double value = 0.0;
  std::variant<Ball, Domain> region;
  LipschitzMethod method = LipschitzMethod::AnalyticBound;
  /// Sampled estimates only bound the constant from below.
  bool lower_estimate = false;
  /// Set when a sampled region reaches the domain boundary.
  bool boundary_warning = false;
  std::size_t samples = 0;
};

/// Convexity-certified expression over an open convex domain of R^d.
///
/// Certification is structural: the constructor walks the tree and checks
/// every composition against the ruleset (nonnegative combinations, pointwise
/// max, convex nondecreasing outer functions of convex inner expressions, with
/// range side conditions proved by interval bounds over the domain). Anything
/// that fails a rule is rejected, so every constructed object is convex.
class ConvexExpr {
 public:
  ConvexExpr(NodePtr root, Domain domain);

  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t dim() const noexcept { return domain_.dim(); }
  [[nodiscard]] const Node& root() const noexcept { return *root_; }

  /// Throws DomainError when x is not inside the domain.
  [[nodiscard]] double evaluate(PointView x) const;
  /// Element of the subdifferential at x; max ties pick the first branch.
  [[nodiscard]] Point subgradient(PointView x) const;

  /// No domain check; yields +inf where a 1/(1-e) atom has e >= 1.
  [[nodiscard]] double evaluate_unchecked(PointView x) const;
  /// Writes a subgradient into `grad` (size d) and returns the value.
  double value_and_subgradient(PointView x, std::span<double> grad) const;

  /// Certified upper bound on subgradient norms over a closed ball.
  /// Throws UnboundedError when no finite bound can be certified.
  [[nodiscard]] LipschitzEstimate lipschitz_on(const Ball& region) const;
  /// Certified bound over the whole domain (finite only for globally
  /// Lipschitz expressions).
  [[nodiscard]] LipschitzEstimate lipschitz_on_domain() const;
  /// Max subgradient norm over a Halton sample of region ∩ domain; a lower
  /// estimate of the Lipschitz constant.
  [[nodiscard]] LipschitzEstimate sampled_lipschitz(const Ball& region, std::size_t samples) const;
  [[nodiscard]] LipschitzEstimate sampled_lipschitz_on_domain(std::size_t samples) const;

  [[nodiscard]] Interval value_bounds(const Ball& region) const;
  [[nodiscard]] Interval value_bounds_on_domain() const;

  /// Conservative smoothness class: 0 for possibly nonsmooth, otherwise the
  /// number of continuous derivatives (a large value stands for C^inf).
  [[nodiscard]] int smoothness() const;

  /// Canonical text in the expression grammar.
  [[nodiscard]] std::string to_string() const;

 private:
  NodePtr root_;
  Domain domain_;
};

/// Grammar text of a subtree.
std::string node_to_string(const Node& node);

}  // namespace smoothcvx
