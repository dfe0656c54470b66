#include "smoothcvx/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothcvx/convex_min.hpp"
#include "smoothcvx/errors.hpp"

namespace smoothcvx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Radial penalty p(|y - x|) of an envelope objective.
struct Penalty {
  EnvelopeKind kind;
  double n;
  double lambda;

  double value(double t, double t2) const {
    switch (kind) {
      case EnvelopeKind::Moreau:
        return t2 / (2.0 * lambda);
      case EnvelopeKind::PaschHausdorff:
        return n * t;
      case EnvelopeKind::Combined:
        return t <= n * lambda ? t2 / (2.0 * lambda) : n * t - 0.5 * n * n * lambda;
    }
    return kInf;
  }

  /// Factor c with grad p = c (y - x), for y != x.
  double radial_factor(double t) const {
    switch (kind) {
      case EnvelopeKind::Moreau:
        return 1.0 / lambda;
      case EnvelopeKind::PaschHausdorff:
        return n / t;
      case EnvelopeKind::Combined:
        return std::min(1.0 / lambda, n / t);
    }
    return 0.0;
  }

  /// Largest slope of p; the minimizer stays within a certified radius when
  /// the base's subgradient at x is below it.
  double max_slope() const { return kind == EnvelopeKind::Moreau ? kInf : n; }

  /// Radius containing the minimizer when |s_x| < max_slope(). Monotonicity
  /// of the subdifferential gives p'(t) <= |s_x| at the minimizer.
  double certified_radius(double s_norm) const {
    switch (kind) {
      case EnvelopeKind::Moreau:
      case EnvelopeKind::Combined:
        return lambda * s_norm;
      case EnvelopeKind::PaschHausdorff:
        return 0.0;
    }
    return kInf;
  }
};

EnvelopeValue solve(const Function& f, const Penalty& pen, PointView x, const InnerSolveConfig& cfg) {
  cfg.validate();
  const Domain& dom = f.domain();
  if (x.size() != dom.dim()) throw DomainError("envelope: query point has the wrong dimension");
  if (!f.has_subgradient()) throw Error("envelope: base '" + f.name() + "' has no subgradient oracle");

  const std::size_t d = x.size();
  const Point xp(x.begin(), x.end());
  const double x_slack = dom.slack(x);
  const bool inside = x_slack > 0.0;
  double margin = 1e-12 * dom.length_scale();
  if (inside) margin = std::min(margin, 0.5 * x_slack);

  EnvelopeValue out;
  out.value = kInf;
  out.argmin = xp;

  double radius = 0.0;
  bool certified = false;
  if (inside) {
    Point s(d);
    const double fx = f.value_and_subgradient(x, s);
    const double sn = norm(s);
    out.value = fx;
    if (sn <= 0.0 || (pen.kind == EnvelopeKind::PaschHausdorff && sn <= pen.n)) return out;
    if (sn < pen.max_slope()) {
      radius = pen.certified_radius(sn) * (1.0 + 1e-9) + 1e-300;
      certified = true;
    }
  }
  if (!certified) radius = 0.25 * (1.0 + norm(x));
  const double radius_cap = dom.max_distance_from(x);
  if (radius >= radius_cap) {
    radius = radius_cap;
    certified = true;
  }

  const ConvexOracle oracle = [&](PointView y, std::span<double> dir) {
    OracleAnswer a;
    const double s = dom.slack(y);
    if (!(s > margin)) {
      const Cut c = dom.cut(y, margin);
      std::copy(c.normal.begin(), c.normal.end(), dir.begin());
      a.depth = c.depth;
      return a;
    }
    const double fy = f.value_and_subgradient(y, dir);
    Point diff(d);
    double t2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      diff[i] = y[i] - xp[i];
      t2 += diff[i] * diff[i];
    }
    const double t = std::sqrt(t2);
    if (!std::isfinite(fy) || !all_finite(std::span<const double>(dir.data(), dir.size()))) {
      // Treat blow-up as infeasibility and step back toward the query point.
      for (std::size_t i = 0; i < d; ++i) dir[i] = t > 0.0 ? diff[i] / t : 0.0;
      return a;
    }
    a.feasible = true;
    a.value = fy + pen.value(t, t2);
    if (t > 0.0) {
      const double c = pen.radial_factor(t);
      for (std::size_t i = 0; i < d; ++i) dir[i] += c * diff[i];
    } else if (pen.kind == EnvelopeKind::PaschHausdorff) {
      // Min-norm element of s + n * (unit ball).
      const double sn = norm(std::span<const double>(dir.data(), dir.size()));
      const double shrink = sn > 0.0 ? std::max(0.0, 1.0 - pen.n / sn) : 0.0;
      for (std::size_t i = 0; i < d; ++i) dir[i] *= shrink;
    }
    return a;
  };

  MinimizeOptions opts;
  opts.tolerance = cfg.tolerance;
  opts.max_iterations = cfg.max_iterations;

  for (int refinement = 0;; ++refinement) {
    const MinimizeResult r = minimize_convex(oracle, x, radius, opts);
    if (r.found_feasible && r.value < out.value) {
      out.value = r.value;
      out.argmin = r.argmin;
    }
    out.converged = r.converged && r.found_feasible;
    if (certified) break;
    if (r.found_feasible && distance(r.argmin, x) <= 0.5 * radius) break;
    if (refinement >= cfg.max_refinements) {
      out.converged = false;
      break;
    }
    radius *= 4.0;
    if (radius >= radius_cap) {
      radius = radius_cap;
      certified = true;
    }
  }
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string("envelope: ") + what + " must be positive and finite");
}

}  // namespace

void InnerSolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw Error("inner solve: tolerance must be positive");
  if (max_refinements < 0) throw Error("inner solve: max_refinements must be nonnegative");
  if (max_iterations < 1) throw Error("inner solve: max_iterations must be positive");
}

EnvelopeSpec EnvelopeSpec::moreau(Function base, double lambda) {
  return EnvelopeSpec{EnvelopeKind::Moreau, std::move(base), lambda, 0.0};
}

EnvelopeSpec EnvelopeSpec::pasch_hausdorff(Function base, double n) {
  return EnvelopeSpec{EnvelopeKind::PaschHausdorff, std::move(base), 0.0, n};
}

EnvelopeSpec EnvelopeSpec::combined(Function base, double n, double lambda) {
  return EnvelopeSpec{EnvelopeKind::Combined, std::move(base), lambda, n};
}

void EnvelopeSpec::validate() const {
  if (kind != EnvelopeKind::PaschHausdorff) check_positive(lambda, "lambda");
  if (kind != EnvelopeKind::Moreau) check_positive(n, "n");
}

EnvelopeValue moreau(const Function& f, double lambda, PointView x, const InnerSolveConfig& cfg) {
  check_positive(lambda, "lambda");
  return solve(f, Penalty{EnvelopeKind::Moreau, 0.0, lambda}, x, cfg);
}

EnvelopeValue pasch_hausdorff(const Function& f, double n, PointView x, const InnerSolveConfig& cfg) {
  check_positive(n, "n");
  return solve(f, Penalty{EnvelopeKind::PaschHausdorff, n, 0.0}, x, cfg);
}

EnvelopeValue combined_envelope(const Function& f, double n, double lambda, PointView x,
                                const InnerSolveConfig& cfg) {
  check_positive(n, "n");
  check_positive(lambda, "lambda");
  return solve(f, Penalty{EnvelopeKind::Combined, n, lambda}, x, cfg);
}

double combined_penalty(double n, double lambda, double t) {
  return Penalty{EnvelopeKind::Combined, n, lambda}.value(t, t * t);
}

Function envelope_fn(const EnvelopeSpec& spec, const InnerSolveConfig& cfg) {
  spec.validate();
  cfg.validate();
  const Function& base = spec.base;
  Function::Traits traits;
  traits.convex_certified = base.convex_certified();
  traits.smoothness = spec.kind == EnvelopeKind::PaschHausdorff ? 0 : std::max(1, base.smoothness());

  std::string name;
  Function::ValueFn value;
  Function::LocalLipschitzFn lip;
  switch (spec.kind) {
    case EnvelopeKind::Moreau: {
      traits.global_lipschitz = base.global_lipschitz();
      name = "moreau[" + std::to_string(spec.lambda) + "](" + base.name() + ")";
      value = [base, lambda = spec.lambda, cfg](PointView x) { return moreau(base, lambda, x, cfg).value; };
      if (base.global_lipschitz()) {
        const double l = *base.global_lipschitz();
        lip = [l](const Ball&) -> std::optional<double> { return l; };
      }
      break;
    }
    case EnvelopeKind::PaschHausdorff: {
      traits.global_lipschitz = spec.n;
      if (base.global_lipschitz()) traits.global_lipschitz = std::min(spec.n, *base.global_lipschitz());
      name = "ph[" + std::to_string(spec.n) + "](" + base.name() + ")";
      value = [base, n = spec.n, cfg](PointView x) { return pasch_hausdorff(base, n, x, cfg).value; };
      break;
    }
    case EnvelopeKind::Combined: {
      traits.global_lipschitz = spec.n;
      if (base.global_lipschitz()) traits.global_lipschitz = std::min(spec.n, *base.global_lipschitz());
      name = "combined[" + std::to_string(spec.n) + "," + std::to_string(spec.lambda) + "](" + base.name() + ")";
      value = [base, n = spec.n, lambda = spec.lambda, cfg](PointView x) {
        return combined_envelope(base, n, lambda, x, cfg).value;
      };
      break;
    }
  }
  if (!lip && traits.global_lipschitz) {
    const double l = *traits.global_lipschitz;
    lip = [l](const Ball&) -> std::optional<double> { return l; };
  }
  return Function(std::move(name), base.domain(), std::move(value), nullptr, std::move(lip), traits);
}

}  // namespace smoothcvx
