#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <vector>

#include "smoothcvx/envelopes.hpp"
#include "smoothcvx/expr.hpp"
#include "smoothcvx/function.hpp"
#include "smoothcvx/smooth_max.hpp"

namespace smoothcvx {

struct GluingConfig {
  double eps = 0.1;
  int mollifier_order = 2;
  /// Longest chain that may be built (N_max).
  int max_stratum = 64;
  InnerSolveConfig solver;

  void validate() const;
};

/// Largest chain length for which every band constant is a normal double.
inline constexpr int kMaxChainLength = 300;

/// Per-level constants of the chain, n >= 1.
struct BandConstants {
  double eps = 0.1;

  /// eps * (1 + 1/2 + ... + 1/2^(n-1)) = 2 eps (1 - 2^-n)
  [[nodiscard]] double lower_shift(int n) const;
  /// lower_shift(n) - eps / 2^n; equals eps / 2 at n = 1.
  [[nodiscard]] double center_shift(int n) const;
  /// lower_shift(n) - center_shift(n) = eps / 2^n
  [[nodiscard]] double band_width(int n) const;
  /// eps / (2^(n+2) n^2), so the Moreau error 4 lambda n^2 of an
  /// n-Lipschitz function equals band_width(n).
  [[nodiscard]] double lambda(int n) const;
  /// eps / 10^n
  [[nodiscard]] double mu(int n) const;
};

/// Radius of the neighborhood used to certify the stratum of x.
double stratum_radius(const Domain& domain, PointView x);

/// Least n >= 1 whose certified Lipschitz bound of f on B(x, r_x) is <= n.
/// Throws StratumOverflow when that n exceeds cfg.max_stratum (or no finite
/// bound exists) and DomainError when x is outside the domain.
int stratum_index(const ConvexExpr& f, PointView x, const GluingConfig& cfg);

/// h_n = combined envelope of f (slope n, lambda_n) minus c_n.
Function build_h(const Function& f, int n, const BandConstants& constants, const GluingConfig& cfg);

/// Lazily built chain g_1 = h_1, g_n = M_{mu_n}(g_{n-1}, h_n) together with
/// the stabilized evaluator g(x) = g_{n0+1}(x), n0 = stratum_index(x).
///
/// Copies share one chain. Extension is serialized by a mutex; once a level
/// is published, reading it takes no lock.
class GluedApprox {
 public:
  GluedApprox(ConvexExpr f, GluingConfig cfg);

  [[nodiscard]] const ConvexExpr& base() const noexcept { return state_->expr; }
  [[nodiscard]] const Function& base_fn() const noexcept { return state_->base; }
  [[nodiscard]] const GluingConfig& config() const noexcept { return state_->cfg; }
  [[nodiscard]] const BandConstants& constants() const noexcept { return state_->constants; }

  /// Level handles; building them extends the chain as needed.
  [[nodiscard]] const Function& h(int n) const;
  [[nodiscard]] const Function& g(int n) const;
  /// Number of chain levels built so far.
  [[nodiscard]] int built_count() const noexcept;

  /// g_m(x) computed in one pass over h_1(x) ... h_m(x).
  [[nodiscard]] double evaluate_level(int m, PointView x) const;
  /// g(x) = g_{n0+1}(x).
  [[nodiscard]] double evaluate(PointView x) const;
  [[nodiscard]] int stratum(PointView x) const;

  /// The limit g as a handle over the base domain.
  [[nodiscard]] Function as_function() const;

 private:
  struct Level {
    Function h;
    Function g;
    Theta theta;
  };
  struct State {
    State(ConvexExpr e, const GluingConfig& c);

    ConvexExpr expr;
    Function base;
    GluingConfig cfg;
    BandConstants constants;
    std::vector<std::unique_ptr<Level>> levels;
    std::atomic<int> built{0};
    std::mutex extend;
  };

  const Level& level(int n) const;
  void ensure(int n) const;

  std::shared_ptr<State> state_;
};

/// Validates the config and returns the unbuilt chain.
GluedApprox glue(const ConvexExpr& f, const GluingConfig& cfg);

double glue_eval(const GluedApprox& g, PointView x);

}  // namespace smoothcvx
