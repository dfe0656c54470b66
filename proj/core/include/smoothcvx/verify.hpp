#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "smoothcvx/function.hpp"
#include "smoothcvx/sampling.hpp"

namespace smoothcvx {

using Pointwise = std::function<double(PointView)>;

/// Outcome of one check. `worst` is the largest signed violation seen (a
/// check passes when it is <= 0, or < 0 for strict checks); `witness` holds
/// the point(s) where it occurred.
struct CheckResult {
  std::string id;
  bool pass = true;
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<Point> witness;
  std::size_t samples = 0;
};

/// Running maximum of violations for one check.
class ViolationTracker {
 public:
  explicit ViolationTracker(std::string id, bool strict = false) : strict_(strict) { result_.id = std::move(id); }

  /// NaN counts as an infinite violation.
  void record(double violation, std::vector<Point> witness);
  [[nodiscard]] CheckResult finish() const;

 private:
  CheckResult result_;
  bool strict_;
};

/// h(t a + (1-t) b) <= t h(a) + (1-t) h(b) + slack (1 + |h(a)| + |h(b)|)
/// for t in {1/4, 1/2, 3/4}. With `strict`, the inequality must be strict
/// (slack is then ignored).
CheckResult check_convexity(std::string id, const Pointwise& h, const std::vector<Segment>& segments,
                            double slack, bool strict = false);

/// Forward and backward difference quotients of h along each direction agree
/// within tol, and centered quotients at steps s, s/2, s/4 satisfy
/// |D_s - D_{s/2}| <= 4 |D_{s/2} - D_{s/4}| + tol. Directions pair with
/// points when the counts match, otherwise every direction is used at every
/// point.
CheckResult check_c1(std::string id, const Pointwise& h, const std::vector<Point>& points,
                     const std::vector<Point>& directions, double step, double tol);

/// lo - s <= target <= hi + s with s = slack (1 + |target|).
CheckResult check_band(std::string id, const Pointwise& target, const Pointwise& lo, const Pointwise& hi,
                       const std::vector<Point>& points, double slack);

/// |h(a) - h(b)| <= bound |a - b| + slack (1 + |h(a)| + |h(b)|).
CheckResult check_lipschitz(std::string id, const Pointwise& h, const std::vector<Segment>& pairs, double bound,
                            double slack);

/// |a - b| <= tol (1 + |a|); tol = 0 demands identical values.
CheckResult check_equality(std::string id, const Pointwise& a, const Pointwise& b, const std::vector<Point>& points,
                           double tol);

/// lower <= upper + slack (1 + |upper|).
CheckResult check_monotone_pair(std::string id, const Pointwise& lower, const Pointwise& upper,
                                const std::vector<Point>& points, double slack);

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool pass() const;
  /// Sorts checks by id.
  void finalize();
  [[nodiscard]] std::string to_json() const;
  static Report from_json(std::string_view text);
};

struct SuiteOptions {
  /// Substitute a nonconvex uncertified input (x^3) for one operand or base
  /// function; used to exercise failure reporting.
  bool inject_fault = false;
  /// Multiplier on sample counts (1.0 runs the full suite).
  double sample_scale = 1.0;
};

const std::vector<std::string>& suite_names();

/// Runs a named suite: lemma21, prop22, claim-envelopes, gluing-e2e or
/// corpus-demo. Throws Error for an unknown name.
Report run_suite(std::string_view name, std::uint64_t seed, const SuiteOptions& options = {});

/// Rows of a grid CSV written by the command-line tool.
struct GridTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

GridTable read_grid_csv(std::istream& in);

struct GridSummary {
  std::size_t points = 0;
  double sup_diff = 0.0;
  double min_diff = 0.0;
};

/// Summary of the last ("diff") column.
GridSummary summarize_grid(const GridTable& table);

/// `%.17g`
std::string format_real(double v);

}  // namespace smoothcvx
