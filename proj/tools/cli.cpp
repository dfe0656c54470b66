#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "smoothcvx/corpus.hpp"
#include "smoothcvx/envelopes.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/gluing.hpp"
#include "smoothcvx/parse.hpp"
#include "smoothcvx/sampling.hpp"
#include "smoothcvx/smooth_max.hpp"
#include "smoothcvx/verify.hpp"

namespace smoothcvx::cli {
namespace {

struct RunConfig {
  std::string fn;
  std::string corpus_name;
  std::string domain;
  std::string kind = "moreau";
  double eps = 0.1;
  double lambda = 0.1;
  double n = 1.0;
  int grid = 21;
  std::string out;
  std::uint64_t seed = 42;
  std::string suite;
  int mollifier_order = 2;
  int max_stratum = 256;
  double tol = 1e-8;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Target {
  ConvexExpr expr;
  std::optional<Box> window;
  double margin;
};

Target resolve(const RunConfig& c) {
  if (c.fn.empty() == c.corpus_name.empty()) throw UsageError("give exactly one of --fn and --corpus-name");
  try {
    if (!c.corpus_name.empty()) {
      const CorpusEntry& e = corpus_entry(c.corpus_name);
      const double margin = e.has_tag("blow-up") ? 0.35 : 0.05;
      if (c.domain.empty()) return {e.parse(), e.window, margin};
      return {parse_expr(e.expr, Domain::from_json(c.domain)), std::nullopt, margin};
    }
    if (c.domain.empty()) throw UsageError("--fn needs --domain");
    return {parse_expr(c.fn, Domain::from_json(c.domain)), std::nullopt, 0.05};
  } catch (const UsageError&) {
    throw;
  } catch (const StratumOverflow&) {
    throw;
  } catch (const Error& e) {
    // Parse, convexity and domain errors are all bad input.
    throw UsageError(e.what());
  }
}

struct Table {
  std::size_t dim = 0;
  std::string value_name;
  std::vector<Point> x;
  std::vector<double> f, g;
};

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.dim; ++i) os << 'x' << (i + 1) << ',';
  os << "f," << t.value_name << ",diff\n";
  for (std::size_t r = 0; r < t.x.size(); ++r) {
    for (double v : t.x[r]) os << format_real(v) << ',';
    os << format_real(t.f[r]) << ',' << format_real(t.g[r]) << ',' << format_real(t.f[r] - t.g[r]) << '\n';
  }
}

std::string gnuplot_script(const std::string& csv, const Table& t) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n";
  const std::size_t fcol = t.dim + 1;
  const std::size_t dcol = t.dim + 3;
  if (t.dim == 1) {
    s << "plot '" << csv << "' using 1:" << fcol << " with lines, \\\n"
      << "     '' using 1:" << fcol + 1 << " with lines, \\\n"
      << "     '' using 1:" << dcol << " with lines axes x1y2\n";
  } else if (t.dim == 2) {
    s << "set dgrid3d\n"
      << "splot '" << csv << "' using 1:2:" << fcol << " with lines, \\\n"
      << "      '' using 1:2:" << fcol + 1 << " with lines\n";
  } else {
    s << "plot '" << csv << "' using 0:" << dcol << " with points\n";
  }
  s << "pause mouse close\n";
  return s.str();
}

/// Sup and min of f - g, to 17 digits.
struct Summary {
  double sup = -INFINITY;
  double min = INFINITY;
};

Summary summarize(const Table& t) {
  Summary s;
  for (std::size_t r = 0; r < t.x.size(); ++r) {
    const double d = t.f[r] - t.g[r];
    s.sup = std::max(s.sup, d);
    s.min = std::min(s.min, d);
  }
  return s;
}

/// Writes the CSV (and plot script) and returns the stream for the summary.
std::ostream& emit(const RunConfig& c, const Table& t, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) {
    write_csv(out, t);
    return err;
  }
  std::ofstream csv(c.out);
  if (!csv) throw Error("cannot write " + c.out);
  write_csv(csv, t);
  std::ofstream gp(c.out + ".gp");
  if (!gp) throw Error("cannot write " + c.out + ".gp");
  gp << gnuplot_script(c.out, t);
  return out;
}

void check_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(flag) + " must be positive");
}

int cmd_smooth(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_positive(c.eps, "--eps");
  check_positive(c.tol, "--tol");
  if (c.grid < 1) throw UsageError("--grid must be positive");
  if (c.max_stratum < 1 || c.max_stratum > kMaxChainLength)
    throw UsageError("--max-stratum must lie in [1, " + std::to_string(kMaxChainLength) + "]");
  const Target tg = resolve(c);
  GluingConfig cfg;
  cfg.eps = c.eps;
  cfg.mollifier_order = c.mollifier_order;
  cfg.max_stratum = c.max_stratum;
  cfg.solver.tolerance = c.tol;
  GluedApprox G = [&] {
    try {
      return glue(tg.expr, cfg);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  Table t;
  t.dim = tg.expr.dim();
  t.value_name = "g";
  t.x = grid_points(GridSpec{tg.expr.domain(), c.grid, tg.margin, tg.window});
  for (const Point& x : t.x) {
    t.f.push_back(tg.expr.evaluate(x));
    t.g.push_back(G.evaluate(x));
  }
  const Summary s = summarize(t);
  const bool pass = t.x.empty() || (s.min >= -10.0 * c.tol * (1.0 + std::abs(s.min)) &&
                                    s.sup <= 2.0 * c.eps + 10.0 * c.tol * (1.0 + std::abs(s.sup)));
  std::ostream& os = emit(c, t, out, err);
  os << "points=" << t.x.size() << " sup_error=" << format_real(s.sup) << " min_diff=" << format_real(s.min)
     << " band=[0," << format_real(2.0 * c.eps) << "] " << (pass ? "pass" : "fail") << '\n';
  return pass ? kOk : kCheckFailed;
}

int cmd_envelope(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_positive(c.tol, "--tol");
  if (c.grid < 1) throw UsageError("--grid must be positive");
  const Target tg = resolve(c);
  const Function f = Function::from_expr(tg.expr);
  InnerSolveConfig solver;
  solver.tolerance = c.tol;
  std::optional<EnvelopeSpec> spec;
  if (c.kind == "moreau") {
    check_positive(c.lambda, "--lambda");
    spec = EnvelopeSpec::moreau(f, c.lambda);
  } else if (c.kind == "pasch-hausdorff") {
    check_positive(c.n, "--n");
    spec = EnvelopeSpec::pasch_hausdorff(f, c.n);
  } else if (c.kind == "combined") {
    check_positive(c.lambda, "--lambda");
    check_positive(c.n, "--n");
    spec = EnvelopeSpec::combined(f, c.n, c.lambda);
  } else {
    throw UsageError("--kind must be moreau, pasch-hausdorff or combined");
  }
  const Function env = envelope_fn(*spec, solver);
  Table t;
  t.dim = tg.expr.dim();
  t.value_name = c.kind == "pasch-hausdorff" ? "pasch_hausdorff" : c.kind;
  t.x = grid_points(GridSpec{tg.expr.domain(), c.grid, tg.margin, tg.window});
  for (const Point& x : t.x) {
    t.f.push_back(f(x));
    t.g.push_back(env(x));
  }
  const Summary s = summarize(t);
  // Every envelope lies below f; Moreau of an L-Lipschitz f stays within 4 lambda L^2.
  bool pass = t.x.empty() || s.min >= -10.0 * c.tol * (1.0 + std::abs(s.min));
  if (c.kind == "moreau" && f.global_lipschitz() && !t.x.empty()) {
    const double L = *f.global_lipschitz();
    pass = pass && s.sup <= 4.0 * c.lambda * L * L + 10.0 * c.tol * (1.0 + std::abs(s.sup));
  }
  std::ostream& os = emit(c, t, out, err);
  os << "points=" << t.x.size() << " sup_error=" << format_real(s.sup) << " min_diff=" << format_real(s.min) << ' '
     << (pass ? "pass" : "fail") << '\n';
  return pass ? kOk : kCheckFailed;
}

int cmd_smoothmax(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_positive(c.eps, "--eps");
  if (c.grid < 1) throw UsageError("--grid must be positive");
  const Theta theta = [&] {
    try {
      return Theta(SmoothMaxParams{c.eps, c.mollifier_order});
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  Domain dom = Domain::box({-1.0, -1.0}, {1.0, 1.0});
  if (!c.domain.empty()) {
    try {
      dom = Domain::from_json(c.domain);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (dom.dim() != 2) throw UsageError("smoothmax tabulates over a 2-D (x, y) domain");
  }
  const double margin = dom.bounded() ? 0.0 : 0.05;
  Table t;
  t.dim = 2;
  t.value_name = "M";
  // The tabulation includes the box edges: M is defined on all of R^2.
  std::optional<Box> window;
  if (const auto bb = dom.bounding_box()) window = *bb;
  const Domain plane = Domain::whole(2);
  t.x = grid_points(GridSpec{window ? plane : dom, c.grid, margin, window});
  for (const Point& p : t.x) {
    t.f.push_back(std::max(p[0], p[1]));
    t.g.push_back(smooth_max_scalar(theta, p[0], p[1]));
  }
  const Summary s = summarize(t);
  const bool pass = t.x.empty() || (s.sup <= 0.0 && s.min >= -c.eps / 2.0);
  std::ostream& os = emit(c, t, out, err);
  os << "points=" << t.x.size() << " max_excess=" << format_real(-s.min) << " band=[0," << format_real(c.eps / 2.0)
     << "] " << (pass ? "pass" : "fail") << '\n';
  return pass ? kOk : kCheckFailed;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  if (c.suite.empty()) throw UsageError("--suite is required");
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), c.suite) == names.end())
    throw UsageError("unknown suite '" + c.suite + "'");
  const Report r = run_suite(c.suite, c.seed);
  const std::string json = r.to_json();
  if (c.out.empty()) {
    out << json << '\n';
  } else {
    std::ofstream f(c.out);
    if (!f) throw Error("cannot write " + c.out);
    f << json << '\n';
    std::size_t failed = 0;
    for (const CheckResult& ck : r.checks) failed += ck.pass ? 0 : 1;
    out << "suite=" << r.suite << " checks=" << r.checks.size() << " failed=" << failed << ' '
        << (r.pass() ? "pass" : "fail") << '\n';
  }
  return r.pass() ? kOk : kCheckFailed;
}

int cmd_corpus(std::ostream& out) {
  for (const CorpusEntry& e : corpus()) {
    out << e.name << "\td=" << e.domain.dim() << '\t';
    for (std::size_t i = 0; i < e.tags.size(); ++i) out << (i ? "," : "") << e.tags[i];
    out << '\t' << e.expr << '\t' << e.domain.to_json() << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Smooth convex approximation toolkit", "smoothcvx"};
  app.require_subcommand(1);

  const auto add_fn = [&](CLI::App* s) {
    s->add_option("--fn", c.fn, "Expression text");
    s->add_option("--corpus-name", c.corpus_name, "Built-in function name");
    s->add_option("--domain", c.domain, "Domain JSON");
    s->add_option("--grid", c.grid, "Grid points per axis")->capture_default_str();
    s->add_option("--out", c.out, "Output CSV path (a gnuplot script goes to <out>.gp)");
    s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    s->add_option("--tol", c.tol, "Inner solver tolerance")->capture_default_str();
  };

  CLI::App* smooth = app.add_subcommand("smooth", "Tabulate f and its smooth approximant g");
  add_fn(smooth);
  smooth->add_option("--eps", c.eps, "Approximation parameter")->capture_default_str();
  smooth->add_option("--mollifier-order", c.mollifier_order, "Mollifier exponent k")->capture_default_str();
  smooth->add_option("--max-stratum", c.max_stratum, "Longest gluing chain")->capture_default_str();

  CLI::App* envelope = app.add_subcommand("envelope", "Tabulate f and an envelope of f");
  add_fn(envelope);
  envelope->add_option("--kind", c.kind, "moreau, pasch-hausdorff or combined")->capture_default_str();
  envelope->add_option("--lambda", c.lambda, "Moreau parameter")->capture_default_str();
  envelope->add_option("--n", c.n, "Lipschitz slope")->capture_default_str();

  CLI::App* smoothmax = app.add_subcommand("smoothmax", "Tabulate the smooth maximum over a 2-D grid");
  smoothmax->add_option("--eps", c.eps, "Smoothing width")->capture_default_str();
  smoothmax->add_option("--mollifier-order", c.mollifier_order, "Mollifier exponent k")->capture_default_str();
  smoothmax->add_option("--domain", c.domain, "Domain JSON for (x, y); default box [-1,1]^2");
  smoothmax->add_option("--grid", c.grid, "Grid points per axis")->capture_default_str();
  smoothmax->add_option("--out", c.out, "Output CSV path");

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite and write its report");
  verify->add_option("--suite", c.suite, "lemma21, prop22, claim-envelopes, gluing-e2e or corpus-demo");
  verify->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  verify->add_option("--out", c.out, "Report JSON path");

  CLI::App* list = app.add_subcommand("corpus", "List built-in functions");

  std::vector<std::string> argv_store;
  argv_store.push_back("smoothcvx");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (smooth->parsed()) return cmd_smooth(c, out, err);
    if (envelope->parsed()) return cmd_envelope(c, out, err);
    if (smoothmax->parsed()) return cmd_smoothmax(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out);
    if (list->parsed()) return cmd_corpus(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StratumOverflow& e) {
    err << "error: " << e.what() << " (raise --max-stratum or shrink the domain)\n";
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace smoothcvx::cli
