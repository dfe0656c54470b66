#include "smoothcvx/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "smoothcvx/errors.hpp"
#include "smoothcvx/rng.hpp"

namespace smoothcvx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSmoothInf = 1 << 20;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_linear(const Node& n) {
  std::string s;
  for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
    if (i) s += ",";
    s += format_num(n.coeffs[i]);
  }
  return s + ";" + format_num(n.offset);
}

// ---------------------------------------------------------------------------
// Regions: a closed ball or an open domain. Only the two primitive ranges
// (linear forms and the Euclidean norm) depend on the region.

struct Region {
  const Ball* ball = nullptr;
  const Domain* domain = nullptr;

  Interval linear_range(PointView a, double b) const {
    const double na = norm(a);
    if (na == 0.0) return {b, b, false, false};
    if (ball) {
      const double m = dot(a, ball->center) + b;
      const double w = na * ball->radius;
      return {m - w, m + w, false, false};
    }
    switch (domain->kind()) {
      case DomainKind::Whole:
        return {-kInf, kInf, true, true};
      case DomainKind::Ball: {
        const double m = dot(a, domain->center()) + b;
        const double w = na * domain->radius();
        return {m - w, m + w, true, true};
      }
      case DomainKind::Box: {
        double lo = b, hi = b;
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double p = a[i] * domain->lo()[i];
          const double q = a[i] * domain->hi()[i];
          lo += std::min(p, q);
          hi += std::max(p, q);
        }
        return {lo, hi, true, true};
      }
      case DomainKind::Halfspaces: {
        Interval r{-kInf, kInf, true, true};
        for (const auto& h : domain->constraints()) {
          const double nn = dot(h.normal, h.normal);
          const double alpha = dot(a, h.normal) / nn;
          double resid = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - alpha * h.normal[i];
            resid += d * d;
          }
          if (std::sqrt(resid) > 1e-14 * na) continue;
          const double bound = alpha * h.offset + b;
          if (alpha > 0.0)
            r.hi = std::min(r.hi, bound);
          else
            r.lo = std::max(r.lo, bound);
        }
        return r;
      }
    }
    return {-kInf, kInf, true, true};
  }

  Interval norm_range() const {
    if (ball) {
      const double nc = norm(ball->center);
      return {std::max(0.0, nc - ball->radius), nc + ball->radius, false, false};
    }
    switch (domain->kind()) {
      case DomainKind::Whole:
      case DomainKind::Halfspaces:
        return {0.0, kInf, false, true};
      case DomainKind::Ball: {
        const double nc = norm(domain->center());
        const double r = domain->radius();
        return {std::max(0.0, nc - r), nc + r, nc > r, true};
      }
      case DomainKind::Box: {
        double far = 0.0, near = 0.0;
        for (std::size_t i = 0; i < domain->dim(); ++i) {
          const double lo = domain->lo()[i], hi = domain->hi()[i];
          const double f = std::max(std::abs(lo), std::abs(hi));
          far += f * f;
          const double n = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
          near += n * n;
        }
        return {std::sqrt(near), std::sqrt(far), near > 0.0, true};
      }
    }
    return {0.0, kInf, false, true};
  }
};

struct Bounds {
  Interval value;
  double lipschitz = 0.0;  // sup of subgradient norms over the region
};

Interval monotone_image(const Interval& in, double (*fn)(double)) {
  return {fn(in.lo), fn(in.hi), in.lo_strict, in.hi_strict};
}

// Upper end of a maximum: strict unless some attaining contributor is closed.
void merge_hi(Interval& acc, double hi, bool strict) {
  if (hi > acc.hi) {
    acc.hi = hi;
    acc.hi_strict = strict;
  } else if (hi == acc.hi) {
    acc.hi_strict = acc.hi_strict && strict;
  }
}

bool below_one(const Interval& v) { return v.hi < 1.0 || (v.hi == 1.0 && v.hi_strict); }

Bounds bounds(const Node& n, const Region& region) {
  switch (n.kind) {
    case NodeKind::Affine: {
      return {region.linear_range(n.coeffs, n.offset), norm(n.coeffs)};
    }
    case NodeKind::Abs: {
      const Interval l = region.linear_range(n.coeffs, n.offset);
      Interval v;
      if (l.lo >= 0.0) {
        v = l;
      } else if (l.hi <= 0.0) {
        v = {-l.hi, -l.lo, l.hi_strict, l.lo_strict};
      } else {
        v = {0.0, -l.lo, false, l.lo_strict};
        merge_hi(v, l.hi, l.hi_strict);
      }
      return {v, norm(n.coeffs)};
    }
    case NodeKind::Norm: {
      return {region.norm_range(), 1.0};
    }
    case NodeKind::SqNorm: {
      const Interval r = region.norm_range();
      return {{r.lo * r.lo, r.hi * r.hi, r.lo_strict, r.hi_strict}, 2.0 * r.hi};
    }
    case NodeKind::Softplus: {
      const Interval l = region.linear_range(n.coeffs, n.offset);
      const double slope = std::isinf(l.hi) ? 1.0 : sigmoid(l.hi);
      return {{softplus(l.lo), softplus(l.hi), l.lo_strict, l.hi_strict}, norm(n.coeffs) * slope};
    }
    case NodeKind::Max: {
      const Bounds a = bounds(*n.children[0], region);
      const Bounds b = bounds(*n.children[1], region);
      Interval v = a.value;
      if (b.value.lo > v.lo) {
        v.lo = b.value.lo;
        v.lo_strict = b.value.lo_strict;
      } else if (b.value.lo == v.lo) {
        v.lo_strict = v.lo_strict || b.value.lo_strict;
      }
      merge_hi(v, b.value.hi, b.value.hi_strict);
      double lip;
      if (b.value.hi <= a.value.lo)
        lip = a.lipschitz;  // second branch never exceeds the first
      else if (a.value.hi <= b.value.lo)
        lip = b.lipschitz;
      else
        lip = std::max(a.lipschitz, b.lipschitz);
      return {v, lip};
    }
    case NodeKind::Scale: {
      if (n.scalar == 0.0) return {{0.0, 0.0, false, false}, 0.0};
      const Bounds a = bounds(*n.children[0], region);
      return {{n.scalar * a.value.lo, n.scalar * a.value.hi, a.value.lo_strict, a.value.hi_strict},
              n.scalar * a.lipschitz};
    }
    case NodeKind::Sum: {
      Bounds acc{{0.0, 0.0, false, false}, 0.0};
      for (const auto& c : n.children) {
        const Bounds b = bounds(*c, region);
        acc.value.lo += b.value.lo;
        acc.value.hi += b.value.hi;
        acc.value.lo_strict = acc.value.lo_strict || b.value.lo_strict;
        acc.value.hi_strict = acc.value.hi_strict || b.value.hi_strict;
        acc.lipschitz += b.lipschitz;
      }
      return acc;
    }
    case NodeKind::Pow: {
      const Bounds a = bounds(*n.children[0], region);
      const double p = n.scalar;
      const double lo = std::max(0.0, a.value.lo);
      const Interval v{std::pow(lo, p), std::pow(a.value.hi, p), a.value.lo_strict, a.value.hi_strict};
      double lip = a.lipschitz;
      if (p != 1.0 && a.lipschitz != 0.0) lip = p * std::pow(a.value.hi, p - 1.0) * a.lipschitz;
      return {v, lip};
    }
    case NodeKind::Exp: {
      const Bounds a = bounds(*n.children[0], region);
      const Interval v = monotone_image(a.value, [](double t) { return std::exp(t); });
      const double lip = a.lipschitz == 0.0 ? 0.0 : std::exp(a.value.hi) * a.lipschitz;
      return {v, lip};
    }
    case NodeKind::Recip1m: {
      const Bounds a = bounds(*n.children[0], region);
      const auto recip = [](double t) { return t >= 1.0 ? kInf : 1.0 / (1.0 - t); };
      const Interval v{a.value.lo == -kInf ? 0.0 : recip(a.value.lo), recip(a.value.hi),
                       a.value.lo == -kInf || a.value.lo_strict, a.value.hi_strict};
      double lip = kInf;
      if (a.lipschitz == 0.0 && a.value.hi < 1.0)
        lip = 0.0;
      else if (a.value.hi < 1.0)
        lip = a.lipschitz / ((1.0 - a.value.hi) * (1.0 - a.value.hi));
      return {v, lip};
    }
  }
  return {{-kInf, kInf, true, true}, kInf};
}

// ---------------------------------------------------------------------------
// Certification

void certify(const Node& n, const Domain& domain) {
  const auto where = [&] { return node_to_string(n); };
  switch (n.kind) {
    case NodeKind::Affine:
    case NodeKind::Abs:
    case NodeKind::Softplus:
      if (n.coeffs.size() != domain.dim())
        throw DomainError("linear form in " + where() + " has " + std::to_string(n.coeffs.size()) +
                          " coefficients but the domain has dimension " + std::to_string(domain.dim()));
      if (!all_finite(n.coeffs) || !std::isfinite(n.offset))
        throw DomainError("non-finite coefficient in " + where());
      return;
    case NodeKind::Norm:
    case NodeKind::SqNorm:
      return;
    case NodeKind::Max:
    case NodeKind::Sum:
      for (const auto& c : n.children) certify(*c, domain);
      return;
    case NodeKind::Scale:
      if (!(n.scalar >= 0.0) || !std::isfinite(n.scalar))
        throw ConvexityError(where(), "nonnegative combination requires a scale factor c >= 0");
      certify(*n.children[0], domain);
      return;
    case NodeKind::Pow: {
      if (!(n.scalar >= 1.0) || !std::isfinite(n.scalar))
        throw ConvexityError(where(), "t^p is convex nondecreasing on [0, inf) only for p >= 1");
      certify(*n.children[0], domain);
      const Interval v = bounds(*n.children[0], Region{nullptr, &domain}).value;
      if (!(v.lo >= 0.0))
        throw ConvexityError(where(), "inner expression of pow is not certified nonnegative on the domain");
      return;
    }
    case NodeKind::Exp:
      certify(*n.children[0], domain);
      return;
    case NodeKind::Recip1m: {
      certify(*n.children[0], domain);
      const Interval v = bounds(*n.children[0], Region{nullptr, &domain}).value;
      if (!below_one(v))
        throw DomainError("recip1m(e) needs e < 1 on the domain; cannot certify for " + where());
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double eval(const Node& n, PointView x) {
  switch (n.kind) {
    case NodeKind::Affine:
      return dot(n.coeffs, x) + n.offset;
    case NodeKind::Abs:
      return std::abs(dot(n.coeffs, x) + n.offset);
    case NodeKind::Norm:
      return norm(x);
    case NodeKind::SqNorm:
      return dot(x, x);
    case NodeKind::Softplus:
      return softplus(dot(n.coeffs, x) + n.offset);
    case NodeKind::Max:
      return std::max(eval(*n.children[0], x), eval(*n.children[1], x));
    case NodeKind::Scale:
      return n.scalar == 0.0 ? 0.0 : n.scalar * eval(*n.children[0], x);
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& c : n.children) s += eval(*c, x);
      return s;
    }
    case NodeKind::Pow:
      return std::pow(std::max(0.0, eval(*n.children[0], x)), n.scalar);
    case NodeKind::Exp:
      return std::exp(eval(*n.children[0], x));
    case NodeKind::Recip1m: {
      const double v = eval(*n.children[0], x);
      return v < 1.0 ? 1.0 / (1.0 - v) : kInf;
    }
  }
  return kInf;
}

// Adds weight * (subgradient at x) into grad and returns the value.
double accumulate(const Node& n, PointView x, double weight, std::span<double> grad) {
  const std::size_t d = x.size();
  switch (n.kind) {
    case NodeKind::Affine: {
      for (std::size_t i = 0; i < d; ++i) grad[i] += weight * n.coeffs[i];
      return dot(n.coeffs, x) + n.offset;
    }
    case NodeKind::Abs: {
      const double l = dot(n.coeffs, x) + n.offset;
      // |l| = max(l, -l); at l = 0 the first branch wins.
      const double s = l >= 0.0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < d; ++i) grad[i] += weight * s * n.coeffs[i];
      return std::abs(l);
    }
    case NodeKind::Norm: {
      const double r = norm(x);
      if (r > 0.0)
        for (std::size_t i = 0; i < d; ++i) grad[i] += weight * x[i] / r;
      return r;
    }
    case NodeKind::SqNorm: {
      for (std::size_t i = 0; i < d; ++i) grad[i] += weight * 2.0 * x[i];
      return dot(x, x);
    }
    case NodeKind::Softplus: {
      const double l = dot(n.coeffs, x) + n.offset;
      const double s = sigmoid(l);
      for (std::size_t i = 0; i < d; ++i) grad[i] += weight * s * n.coeffs[i];
      return softplus(l);
    }
    case NodeKind::Max: {
      const double a = eval(*n.children[0], x);
      const double b = eval(*n.children[1], x);
      if (a >= b) {
        accumulate(*n.children[0], x, weight, grad);
        return a;
      }
      accumulate(*n.children[1], x, weight, grad);
      return b;
    }
    case NodeKind::Scale:
      if (n.scalar == 0.0) return 0.0;
      return n.scalar * accumulate(*n.children[0], x, weight * n.scalar, grad);
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& c : n.children) s += accumulate(*c, x, weight, grad);
      return s;
    }
    case NodeKind::Pow:
    case NodeKind::Exp:
    case NodeKind::Recip1m: {
      Point inner(d, 0.0);
      const double v = accumulate(*n.children[0], x, 1.0, inner);
      double value, slope;
      if (n.kind == NodeKind::Pow) {
        const double u = std::max(0.0, v);
        value = std::pow(u, n.scalar);
        slope = n.scalar == 1.0 ? 1.0 : n.scalar * std::pow(u, n.scalar - 1.0);
      } else if (n.kind == NodeKind::Exp) {
        value = std::exp(v);
        slope = value;
      } else {
        if (!(v < 1.0)) return kInf;
        value = 1.0 / (1.0 - v);
        slope = value * value;
      }
      for (std::size_t i = 0; i < d; ++i) grad[i] += weight * slope * inner[i];
      return value;
    }
  }
  return kInf;
}

int smoothness_of(const Node& n) {
  switch (n.kind) {
    case NodeKind::Affine:
    case NodeKind::SqNorm:
    case NodeKind::Softplus:
      return kSmoothInf;
    case NodeKind::Abs:
    case NodeKind::Norm:
    case NodeKind::Max:
      return 0;
    case NodeKind::Scale:
      return n.scalar == 0.0 ? kSmoothInf : smoothness_of(*n.children[0]);
    case NodeKind::Sum: {
      int s = kSmoothInf;
      for (const auto& c : n.children) s = std::min(s, smoothness_of(*c));
      return s;
    }
    case NodeKind::Pow: {
      const Node& inner = *n.children[0];
      const double p = n.scalar;
      // |l|^p for an even integer p is a polynomial in l.
      if (inner.kind == NodeKind::Abs && std::fmod(p, 2.0) == 0.0) return kSmoothInf;
      if (inner.kind == NodeKind::Norm && std::fmod(p, 2.0) == 0.0) return kSmoothInf;
      const int s = smoothness_of(inner);
      if (p == std::floor(p)) return s;
      return std::min(s, static_cast<int>(std::floor(p)));
    }
    case NodeKind::Exp:
    case NodeKind::Recip1m:
      return smoothness_of(*n.children[0]);
  }
  return 0;
}

std::vector<Point> sample_region(const Ball* ball, const Domain& domain, std::size_t count) {
  std::vector<Point> pts;
  const std::size_t d = domain.dim();
  Point lo(d), hi(d);
  if (ball) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = ball->center[i] - ball->radius;
      hi[i] = ball->center[i] + ball->radius;
    }
  } else {
    auto bb = domain.bounding_box();
    if (!bb) throw UnboundedError("sampled Lipschitz estimate needs a bounded region");
    lo = bb->first;
    hi = bb->second;
  }
  const std::uint64_t max_tries = 64 * count + 1024;
  for (std::uint64_t k = 1; pts.size() < count && k < max_tries; ++k) {
    Point p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * halton(k, halton_base(i));
    if (ball && distance(p, ball->center) > ball->radius) continue;
    if (!domain.contains(p)) continue;
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

std::string node_to_string(const Node& n) {
  switch (n.kind) {
    case NodeKind::Affine:
      return "affine(" + format_linear(n) + ")";
    case NodeKind::Abs:
      return "abs(" + format_linear(n) + ")";
    case NodeKind::Softplus:
      return "softplus(" + format_linear(n) + ")";
    case NodeKind::Norm:
      return "norm()";
    case NodeKind::SqNorm:
      return "sqnorm()";
    case NodeKind::Max:
      return "max(" + node_to_string(*n.children[0]) + ", " + node_to_string(*n.children[1]) + ")";
    case NodeKind::Scale:
      return format_num(n.scalar) + "*" + node_to_string(*n.children[0]);
    case NodeKind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += " + ";
        s += node_to_string(*n.children[i]);
      }
      return s;
    }
    case NodeKind::Pow:
      return "pow(" + node_to_string(*n.children[0]) + ", " + format_num(n.scalar) + ")";
    case NodeKind::Exp:
      return "exp(" + node_to_string(*n.children[0]) + ")";
    case NodeKind::Recip1m:
      return "recip1m(" + node_to_string(*n.children[0]) + ")";
  }
  return "?";
}

ConvexExpr::ConvexExpr(NodePtr root, Domain domain) : root_(std::move(root)), domain_(std::move(domain)) {
  if (!root_) throw DomainError("empty expression");
  certify(*root_, domain_);
}

double ConvexExpr::evaluate(PointView x) const {
  if (!domain_.contains(x)) throw DomainError("point outside the domain of the expression");
  return eval(*root_, x);
}

double ConvexExpr::evaluate_unchecked(PointView x) const { return eval(*root_, x); }

Point ConvexExpr::subgradient(PointView x) const {
  if (!domain_.contains(x)) throw DomainError("point outside the domain of the expression");
  Point g(dim(), 0.0);
  accumulate(*root_, x, 1.0, g);
  return g;
}

double ConvexExpr::value_and_subgradient(PointView x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  return accumulate(*root_, x, 1.0, grad);
}

LipschitzEstimate ConvexExpr::lipschitz_on(const Ball& region) const {
  if (region.center.size() != dim()) throw DomainError("region dimension mismatch");
  if (!(region.radius >= 0.0)) throw DomainError("region radius must be nonnegative");
  const Bounds b = bounds(*root_, Region{&region, nullptr});
  if (!std::isfinite(b.lipschitz))
    throw UnboundedError("no finite Lipschitz bound can be certified on B(center, " +
                         format_num(region.radius) + ")");
  return {b.lipschitz, region, LipschitzMethod::AnalyticBound, false, false, 0};
}

LipschitzEstimate ConvexExpr::lipschitz_on_domain() const {
  const Bounds b = bounds(*root_, Region{nullptr, &domain_});
  if (!std::isfinite(b.lipschitz)) throw UnboundedError("expression is not globally Lipschitz by structure");
  return {b.lipschitz, domain_, LipschitzMethod::AnalyticBound, false, false, 0};
}

LipschitzEstimate ConvexExpr::sampled_lipschitz(const Ball& region, std::size_t samples) const {
  const auto pts = sample_region(&region, domain_, samples);
  double best = 0.0;
  Point g(dim());
  for (const auto& p : pts) {
    value_and_subgradient(p, g);
    best = std::max(best, norm(g));
  }
  const bool touches = !domain_.contains(region.center) || region.radius >= domain_.slack(region.center);
  return {best, region, LipschitzMethod::SampledSubgradient, true, touches, pts.size()};
}

LipschitzEstimate ConvexExpr::sampled_lipschitz_on_domain(std::size_t samples) const {
  const auto pts = sample_region(nullptr, domain_, samples);
  double best = 0.0;
  Point g(dim());
  for (const auto& p : pts) {
    value_and_subgradient(p, g);
    best = std::max(best, norm(g));
  }
  return {best, domain_, LipschitzMethod::SampledSubgradient, true, true, pts.size()};
}

Interval ConvexExpr::value_bounds(const Ball& region) const {
  return bounds(*root_, Region{&region, nullptr}).value;
}

Interval ConvexExpr::value_bounds_on_domain() const { return bounds(*root_, Region{nullptr, &domain_}).value; }

int ConvexExpr::smoothness() const { return smoothness_of(*root_); }

std::string ConvexExpr::to_string() const { return node_to_string(*root_); }

}  // namespace smoothcvx
