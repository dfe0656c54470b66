#pragma once

#include "smoothcvx/function.hpp"

namespace smoothcvx {

/// Inner minimization settings shared by all envelopes.
///
/// Search-radius policy: when the base has a subgradient s at the query x
/// and the penalty's slope stays below |s|, the minimizer lies within a
/// certified radius (lambda * |s| for the quadratic branches). Otherwise the
/// radius starts at 0.25 * (1 + |x|) and grows by 4x until the restricted
/// minimizer sits well inside the ball, at most `max_refinements` times.
struct InnerSolveConfig {
  /// Objective accuracy, relative to max(1, |value|).
  double tolerance = 1e-8;
  int max_refinements = 40;
  int max_iterations = 20000;

  void validate() const;
};

enum class EnvelopeKind { Moreau, PaschHausdorff, Combined };

struct EnvelopeSpec {
  EnvelopeKind kind = EnvelopeKind::Moreau;
  Function base;
  double lambda = 0.0;  // moreau, combined
  double n = 0.0;       // pasch_hausdorff, combined

  static EnvelopeSpec moreau(Function base, double lambda);
  static EnvelopeSpec pasch_hausdorff(Function base, double n);
  static EnvelopeSpec combined(Function base, double n, double lambda);

  void validate() const;
};

struct EnvelopeValue {
  double value = 0.0;
  /// False when the inner solve hit an iteration or refinement cap; `value`
  /// is then the best objective found.
  bool converged = true;
  /// Minimizer of the inner problem (the query point when it is exact).
  Point argmin;
};

/// inf over y in dom f of f(y) + |x - y|^2 / (2 lambda).
EnvelopeValue moreau(const Function& f, double lambda, PointView x, const InnerSolveConfig& cfg = {});

/// inf over y in dom f of f(y) + n |x - y|. Returns f(x) exactly when the
/// subgradient at x has norm <= n.
EnvelopeValue pasch_hausdorff(const Function& f, double n, PointView x, const InnerSolveConfig& cfg = {});

/// Moreau envelope (parameter lambda) of the Pasch-Hausdorff envelope
/// (parameter n), computed as the single infimum
///   inf over z in dom f of f(z) + phi(|x - z|),
/// phi(t) = t^2 / (2 lambda) for t <= n lambda, n t - n^2 lambda / 2 beyond.
EnvelopeValue combined_envelope(const Function& f, double n, double lambda, PointView x,
                                const InnerSolveConfig& cfg = {});

/// The penalty phi of the combined envelope.
double combined_penalty(double n, double lambda, double t);

/// Pointwise handle for an envelope. Moreau and combined handles are tagged
/// C^1; Lipschitz metadata is n for the Pasch-Hausdorff and combined kinds
/// and the base's constant for Moreau.
Function envelope_fn(const EnvelopeSpec& spec, const InnerSolveConfig& cfg = {});

}  // namespace smoothcvx
