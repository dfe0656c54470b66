#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "smoothcvx/corpus.hpp"
#include "smoothcvx/envelopes.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/gluing.hpp"
#include "smoothcvx/parse.hpp"
#include "smoothcvx/smooth_max.hpp"
#include "smoothcvx/verify.hpp"

namespace smoothcvx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string tag_eps_k(double eps, int k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[eps=%g,k=%d]", eps, k);
  return buf;
}

class SuiteRun {
 public:
  SuiteRun(std::string_view name, std::uint64_t seed, const SuiteOptions& opts) : opts_(opts), rng_(seed) {
    report_.suite = std::string(name);
    report_.seed = seed;
  }

  std::size_t count(std::size_t n) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * opts_.sample_scale)));
  }
  /// Independent stream per check, so adding a check never shifts the others.
  SplitMix64 stream() { return rng_.fork(); }
  void add(CheckResult r) { report_.checks.push_back(std::move(r)); }
  const SuiteOptions& options() const { return opts_; }

  Report finish() {
    report_.finalize();
    return std::move(report_);
  }

 private:
  SuiteOptions opts_;
  SplitMix64 rng_;
  Report report_;
};

Function corpus_fn(std::string_view name) { return Function::from_expr(corpus_entry(name).parse()); }

/// f + c with the same metadata.
Function offset_fn(const Function& f, double c) {
  Function::SubgradientFn sub;
  if (f.has_subgradient())
    sub = [f, c](PointView x, std::span<double> g) { return f.value_and_subgradient(x, g) + c; };
  return Function(f.name() + "+" + format_real(c), f.domain(), [f, c](PointView x) { return f(x) + c; },
                  std::move(sub), [f](const Ball& b) { return f.lipschitz_on(b); }, f.traits());
}

Function cubic_fault() {
  return Function::uncertified("x^3", Domain::whole(1), [](PointView x) { return x[0] * x[0] * x[0]; });
}

double margin_of(const CorpusEntry& e) { return e.has_tag("blow-up") ? 0.35 : 0.05; }

Point pt(double a, double b) { return {a, b}; }

// ---------------------------------------------------------------- lemma21

void lemma21(SuiteRun& run) {
  const std::size_t n = run.count(10000);
  for (const double eps : {0.01, 0.1, 1.0}) {
    for (const int k : {2, 4}) {
      const Theta theta(SmoothMaxParams{eps, k});
      const std::string tag = tag_eps_k(eps, k);
      const auto M = [&theta](PointView p) { return smooth_max_scalar(theta, p[0], p[1]); };
      const auto mx = [](PointView p) { return std::max(p[0], p[1]); };

      // Pairs straddling the crease about half the time.
      SplitMix64 rng = run.stream();
      std::vector<Point> pairs;
      pairs.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double y = rng.uniform() < 0.5 ? x + rng.uniform(-2.0 * eps, 2.0 * eps) : rng.uniform(-2.0, 2.0);
        pairs.push_back(pt(x, y));
      }
      std::vector<Segment> segs;
      for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pairs[i];
        segs.push_back({a, pt(a[0] + rng.uniform(-2.0 * eps, 2.0 * eps), a[1] + rng.uniform(-2.0 * eps, 2.0 * eps))});
      }

      run.add(check_convexity("lemma21.p1.convexity" + tag, M, segs, 1e-12));
      run.add(check_band(
          "lemma21.p2.bounds" + tag, M, mx, [&](PointView p) { return std::max(p[0], p[1]) + eps / 2.0; }, pairs,
          0.0));

      std::vector<Point> far;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double gap = eps + rng.uniform(0.0, 2.0) * (i % 4 == 0 ? 0.0 : 1.0);
        far.push_back(pt(x, rng.uniform() < 0.5 ? x + gap : x - gap));
      }
      run.add(check_equality("lemma21.p3.exact-max" + tag, M, mx, far, 0.0));
      run.add(check_equality(
          "lemma21.p4.symmetry" + tag, M, [&theta](PointView p) { return smooth_max_scalar(theta, p[1], p[0]); },
          pairs, 0.0));

      {
        ViolationTracker t("lemma21.p5.lipschitz-sup-norm" + tag);
        for (const Segment& s : segs) {
          const double ma = M(s.a);
          const double mb = M(s.b);
          const double step = std::max(std::abs(s.a[0] - s.b[0]), std::abs(s.a[1] - s.b[1]));
          t.record(std::abs(ma - mb) - step - 1e-12 * (1.0 + std::abs(ma) + std::abs(mb)), {s.a, s.b});
        }
        run.add(t.finish());
      }

      ViolationTracker p6("lemma21.p6.strict-first" + tag, true);
      ViolationTracker p7("lemma21.p7.strict-second" + tag, true);
      ViolationTracker p8("lemma21.p8.monotone" + tag);
      ViolationTracker p8s("lemma21.p8.strict-both" + tag, true);
      for (std::size_t i = 0; i < n; ++i) {
        const double y = rng.uniform(-2.0, 2.0);
        const double x = y - eps + rng.uniform(0.0, 3.0 * eps);
        const double x2 = x + rng.uniform(eps / 20.0, 2.0 * eps);
        p6.record(smooth_max_scalar(theta, x, y) - smooth_max_scalar(theta, x2, y), {pt(x, y), pt(x2, y)});
        p7.record(smooth_max_scalar(theta, y, x) - smooth_max_scalar(theta, y, x2), {pt(y, x), pt(y, x2)});

        const double a = rng.uniform(-2.0, 2.0);
        const double b = a + rng.uniform(-2.0 * eps, 2.0 * eps);
        const double da = rng.uniform(eps / 20.0, 2.0 * eps);
        const double db = rng.uniform(eps / 20.0, 2.0 * eps);
        const bool first = rng.uniform() < 0.5;
        const double a2 = first ? a + da : a;
        const double b2 = first ? b : b + db;
        const double lo = smooth_max_scalar(theta, a, b);
        p8.record(lo - smooth_max_scalar(theta, a2, b2) - 1e-12 * (1.0 + std::abs(lo)), {pt(a, b), pt(a2, b2)});
        p8s.record(lo - smooth_max_scalar(theta, a + da, b + db), {pt(a, b), pt(a + da, b + db)});
      }
      run.add(p6.finish());
      run.add(p7.finish());
      run.add(p8.finish());
      run.add(p8s.finish());

      // theta itself
      const auto th = [&theta](PointView p) { return theta(p[0]); };
      std::vector<Point> outside, inside, line;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = eps + rng.uniform(0.0, 3.0) * (i % 8 == 0 ? 0.0 : 1.0);
        outside.push_back({rng.uniform() < 0.5 ? t : -t});
        inside.push_back({rng.uniform(-eps, eps)});
        line.push_back({rng.uniform(-2.0 * eps, 2.0 * eps)});
      }
      run.add(check_equality(
          "theta.exact-outside" + tag, th, [](PointView p) { return std::abs(p[0]); }, outside, 0.0));
      {
        ViolationTracker t("theta.excess-positive-inside" + tag, true);
        for (const Point& p : inside) t.record(-theta.excess(p[0]), {p});
        run.add(t.finish());
      }
      run.add(check_equality(
          "theta.even" + tag, th, [&theta](PointView p) { return theta(-p[0]); }, line, 0.0));
      std::vector<Segment> tsegs;
      for (std::size_t i = 0; i < n; ++i)
        tsegs.push_back({line[i], {line[i][0] + rng.uniform(-2.0 * eps, 2.0 * eps)}});
      run.add(check_convexity("theta.convexity" + tag, th, tsegs, 1e-12));
      run.add(check_lipschitz("theta.lipschitz-one" + tag, th, tsegs, 1.0, 1e-12));
      {
        // theta(0) = eps * c_k / (k + 1)
        ViolationTracker t("theta.value-at-zero" + tag);
        const double expected = eps * theta.normalization() / (k + 1.0);
        t.record(std::abs(theta(0.0) - expected) - 1e-14 * expected, {{0.0}});
        run.add(t.finish());
      }
    }
  }
}

// ---------------------------------------------------------------- prop22

struct PairInstance {
  Function f;
  Function g;
  Box window;
};

void prop22(SuiteRun& run) {
  const double eps = 0.1;
  const Theta theta(SmoothMaxParams{eps, 2});
  const std::vector<std::string> line = {"abs", "square", "quartic", "max3", "exp-ramp"};
  const std::vector<std::string> plane = {"norm2", "max3-plane", "softplus2", "quadratic2"};
  const Box line_box{{-1.5}, {1.5}};
  const Box plane_box{{-2.0, -2.0}, {2.0, 2.0}};

  SplitMix64 pick = run.stream();
  std::vector<PairInstance> pairs;
  for (int i = 0; i < 20; ++i) {
    const bool use_line = i % 2 == 0;
    const auto& pool = use_line ? line : plane;
    const std::size_t a = static_cast<std::size_t>(pick.next() % pool.size());
    std::size_t b = static_cast<std::size_t>(pick.next() % (pool.size() - 1));
    if (b >= a) ++b;
    const double shift = pick.uniform(-1.0, 1.0);
    pairs.push_back({corpus_fn(pool[a]), offset_fn(corpus_fn(pool[b]), shift), use_line ? line_box : plane_box});
  }
  if (run.options().inject_fault) {
    pairs[0] = {cubic_fault(), Function::from_expr(parse_expr("affine(0;-10)", Domain::whole(1))), line_box};
  }

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairInstance& P = pairs[i];
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "prop22.pair%02zu.", i);
    const std::string id = idbuf;
    const Domain& dom = P.f.domain();
    const int per_axis = dom.dim() == 1 ? 201 : 21;
    const std::vector<Point> grid = grid_points(GridSpec{dom, per_axis, 0.0, P.window});
    SplitMix64 rng = run.stream();
    const auto segs = random_segments(dom, run.count(200), rng, 0.0, P.window);

    const Function M = smooth_max_fn(theta, P.f, P.g);
    const Function Mswap = smooth_max_fn(theta, P.g, P.f);
    const auto mx = [&P](PointView x) { return std::max(P.f(x), P.g(x)); };

    run.add(check_convexity(id + "p1.convexity", M, segs, 1e-12));

    double top = -kInf;
    for (const Point& x : grid) top = std::max(top, P.g(x) - P.f(x));
    const Function g_low = offset_fn(P.g, -(top + eps + 0.1));
    const Function f_low = offset_fn(P.f, -(top + eps + 0.1) - 2.0 * std::abs(top) - 4.0);
    run.add(check_equality(id + "p3.equals-first", smooth_max_fn(theta, P.f, g_low), P.f, grid, 0.0));
    {
      // g dominates f - c by eps wherever checked; restrict to those points.
      std::vector<Point> pts;
      for (const Point& x : grid)
        if (P.g(x) >= f_low(x) + eps) pts.push_back(x);
      run.add(check_equality(id + "p4.equals-second", smooth_max_fn(theta, f_low, P.g), P.g, pts, 0.0));
    }
    run.add(check_band(id + "p5.band", M, mx, [&](PointView x) { return mx(x) + eps / 2.0; }, grid, 0.0));
    run.add(check_equality(id + "p6.symmetry", M, Mswap, grid, 0.0));
    {
      ViolationTracker t(id + "p7.local-lipschitz");
      for (std::size_t b = 0; b < run.count(20); ++b) {
        const Point c = random_point(dom, rng, 0.0, P.window);
        const double r = rng.uniform(0.05, 0.5);
        const Ball ball{c, r};
        const auto lf = P.f.lipschitz_on(ball);
        const auto lg = P.g.lipschitz_on(ball);
        const double bound = lf && lg ? std::max(*lf, *lg) : kInf;
        for (int s = 0; s < 20; ++s) {
          const Point u = random_direction(dom.dim(), rng);
          const Point v = random_direction(dom.dim(), rng);
          const Point a = along(c, r * rng.uniform(), u);
          const Point q = along(c, r * rng.uniform(), v);
          const double ma = M(a);
          const double mq = M(q);
          t.record(std::abs(ma - mq) - bound * distance(a, q) - 1e-9 * (1.0 + std::abs(ma) + std::abs(mq)),
                   {a, q, c});
        }
      }
      run.add(t.finish());
    }
    {
      const double sf = rng.uniform(0.0, 0.3);
      const double sg = rng.uniform(0.0, 0.3);
      const Function M2 = smooth_max_fn(theta, offset_fn(P.f, sf), offset_fn(P.g, sg));
      run.add(check_monotone_pair(id + "p9.monotone", M, M2, grid, 1e-12));
    }
  }

  // Strictly convex quadratic pairs.
  SplitMix64 rng = run.stream();
  const Domain plane2 = Domain::whole(2);
  for (int i = 0; i < 5; ++i) {
    const std::string fe = "sqnorm() + affine(" + format_real(rng.uniform(-1, 1)) + "," +
                           format_real(rng.uniform(-1, 1)) + ";" + format_real(rng.uniform(-1, 1)) + ")";
    const std::string ge = "2 * sqnorm() + affine(" + format_real(rng.uniform(-1, 1)) + "," +
                           format_real(rng.uniform(-1, 1)) + ";" + format_real(rng.uniform(-1, 1)) + ")";
    const Function M = smooth_max_fn(theta, Function::from_expr(parse_expr(fe, plane2)),
                                     Function::from_expr(parse_expr(ge, plane2)));
    std::vector<Segment> segs;
    while (segs.size() < run.count(200)) {
      Segment s{random_point(plane2, rng, 0.0, plane_box), random_point(plane2, rng, 0.0, plane_box)};
      if (distance(s.a, s.b) >= 0.1) segs.push_back(std::move(s));
    }
    run.add(check_convexity("prop22.p8.strict-quadratic" + fmt("%.0f", i), M, segs, 0.0, true));
  }
}

// ---------------------------------------------------------------- claim-envelopes

struct EnvInstance {
  std::string name;
  Function f;
  ConvexExpr expr;
  Domain domain;
  std::optional<Box> window;
  double margin;
};

EnvInstance env_instance(std::string_view name) {
  const CorpusEntry& e = corpus_entry(name);
  ConvexExpr x = e.parse();
  return {e.name, Function::from_expr(x), x, e.domain, e.window, margin_of(e)};
}

void claim_envelopes(SuiteRun& run) {
  InnerSolveConfig cfg;
  cfg.tolerance = 1e-12;
  const double slack10 = 10.0 * cfg.tolerance;

  std::vector<EnvInstance> ph = {env_instance("square"), env_instance("quartic"), env_instance("max3"),
                                 env_instance("blowup-interval"), env_instance("quartic-norm2"),
                                 env_instance("max3-plane")};
  if (run.options().inject_fault) {
    ConvexExpr sq = corpus_entry("square").parse();
    ph[0] = {"x^3", cubic_fault(), sq, Domain::whole(1), Box{{-1.5}, {1.5}}, 0.05};
  }
  for (const EnvInstance& I : ph) {
    SplitMix64 rng = run.stream();
    const int per_axis = I.domain.dim() == 1 ? 101 : 15;
    const auto grid = grid_points(GridSpec{I.domain, per_axis, I.margin, I.window});
    std::vector<Point> pool = random_points(I.domain, run.count(100), rng, I.margin, I.window);
    const std::size_t base = pool.size();
    for (std::size_t i = 0; i < base; ++i) {
      Point q = along(pool[i], rng.uniform(0.01, 0.1), random_direction(I.domain.dim(), rng));
      if (admissible(I.domain, q, I.margin)) pool.push_back(std::move(q));
    }
    const auto segs = random_segments(I.domain, run.count(100), rng, I.margin, I.window);

    for (const double n : {1.0, 2.0, 4.0, 8.0}) {
      const std::string id = "claim-envelopes." + I.name + fmt(".n=%g.", n);
      const Function fn = envelope_fn(EnvelopeSpec::pasch_hausdorff(I.f, n), cfg);
      run.add(check_monotone_pair(id + "i.below-f", fn, I.f, grid, 0.0));

      std::vector<double> vals(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) vals[i] = fn(pool[i]);
      ViolationTracker lip(id + "ii.n-lipschitz");
      for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
          lip.record(std::abs(vals[i] - vals[j]) - (n + 1e-6) * distance(pool[i], pool[j]), {pool[i], pool[j]});
      run.add(lip.finish());

      run.add(check_convexity(id + "iii.convexity", fn, segs, 1e-9));

      std::vector<Point> exact;
      for (const Point& x : grid) {
        try {
          const Ball b{x, stratum_radius(I.domain, x)};
          if (I.expr.lipschitz_on(b).value <= n) exact.push_back(x);
        } catch (const UnboundedError&) {
        }
      }
      run.add(check_equality(id + "iv.equals-f-on-stratum", fn, I.f, exact, slack10));
    }
  }

  // Moreau envelopes of Lipschitz members.
  for (const std::string name : {"abs", "max3", "norm2", "max3-plane", "softplus2", "halfplane-abs"}) {
    const EnvInstance I = env_instance(name);
    const double L = *I.f.global_lipschitz();
    SplitMix64 rng = run.stream();
    const int per_axis = I.domain.dim() == 1 ? 201 : 15;
    const auto grid = grid_points(GridSpec{I.domain, per_axis, I.margin, I.window});
    std::map<double, Function> env;
    for (const double lambda : {0.1, 0.01, 0.001}) {
      const std::string id = "claim-envelopes.moreau." + I.name + fmt(".lambda=%g.", lambda);
      const Function fl = envelope_fn(EnvelopeSpec::moreau(I.f, lambda), cfg);
      env.emplace(lambda, fl);
      run.add(check_band(
          id + "uniform-bound", fl, [&](PointView x) { return I.f(x) - 4.0 * lambda * L * L; }, I.f, grid, slack10));
      if (I.name == "abs") {
        ViolationTracker t(id + "huber-sup-error");
        double sup = -kInf;
        Point arg;
        for (const Point& x : grid) {
          const double e = I.f(x) - fl(x);
          if (e > sup) {
            sup = e;
            arg = x;
          }
        }
        t.record(std::abs(sup - lambda / 2.0) - 1e-6, {arg});
        run.add(t.finish());
      }
      if (I.domain.dim() == 1) {
        // Brute-force minimizer of the unrestricted objective on a fine grid.
        ViolationTracker t(id + "ball-restriction");
        const double R = 2.0 * lambda * L;
        const int m = 4001;
        for (std::size_t p = 0; p < run.count(1000); ++p) {
          const Point x = random_point(I.domain, rng, I.margin, I.window);
          const double half = 10.0 * R + 0.5;
          const double h = 2.0 * half / (m - 1);
          double best = kInf, arg = x[0];
          for (int k = 0; k < m; ++k) {
            const double y = x[0] - half + k * h;
            const double v = I.f(Point{y}) + (y - x[0]) * (y - x[0]) / (2.0 * lambda);
            if (v < best) {
              best = v;
              arg = y;
            }
          }
          t.record(std::abs(arg - x[0]) - (R + h), {x, Point{arg}});
        }
        run.add(t.finish());
      }
    }
    run.add(check_monotone_pair("claim-envelopes.moreau." + I.name + ".monotone-lambda.0.01-0.1", env.at(0.1),
                                env.at(0.01), grid, slack10));
    run.add(check_monotone_pair("claim-envelopes.moreau." + I.name + ".monotone-lambda.0.001-0.01", env.at(0.01),
                                env.at(0.001), grid, slack10));
    run.add(check_monotone_pair("claim-envelopes.moreau." + I.name + ".below-f", env.at(0.001), I.f, grid, 0.0));
  }

  // C^1 of Moreau envelopes, including at kinks.
  for (const std::string name : {"abs", "max3", "max3-plane"}) {
    const EnvInstance I = env_instance(name);
    SplitMix64 rng = run.stream();
    const Function fl = envelope_fn(EnvelopeSpec::moreau(I.f, 0.1), cfg);
    std::vector<Point> pts = random_points(I.domain, run.count(300), rng, I.margin, I.window);
    std::vector<Point> dirs;
    for (std::size_t i = 0; i < pts.size(); ++i) dirs.push_back(random_direction(I.domain.dim(), rng));
    if (I.domain.dim() == 1) {
      pts.push_back({0.0});
      dirs.push_back({1.0});
      pts.push_back({1.0});
      dirs.push_back({1.0});
    } else {
      pts.push_back({0.0, 0.0});
      dirs.push_back({1.0, 0.0});
    }
    run.add(check_c1("claim-envelopes.moreau." + I.name + ".c1", fl, pts, dirs, 1e-5, 1e-3));
  }
}

// ---------------------------------------------------------------- gluing-e2e

struct GlueInstance {
  std::string name;
  double margin;
  std::optional<Box> window;
};

void gluing_e2e(SuiteRun& run) {
  const std::vector<GlueInstance> instances = {
      {"square", 0.05, Box{{-5.0}, {5.0}}},
      {"quartic", 0.05, std::nullopt},
      {"max3", 0.05, std::nullopt},
      {"quartic-norm2", 0.05, std::nullopt},
      {"blowup-disk", 0.35, std::nullopt},
      {"series3", 0.05, std::nullopt},
  };
  for (const GlueInstance& inst : instances) {
    const CorpusEntry& e = corpus_entry(inst.name);
    const std::optional<Box> window = inst.window ? inst.window : e.window;
    const ConvexExpr expr = e.parse();
    const Function f = Function::from_expr(expr);
    const Domain& dom = e.domain;
    for (const double eps : {0.1, 0.5}) {
      const std::string id = "gluing-e2e." + inst.name + fmt(".eps=%g.", eps);
      GluingConfig cfg;
      cfg.eps = eps;
      const GluedApprox G = glue(expr, cfg);
      const Function g = G.as_function();
      const double slack = 10.0 * cfg.solver.tolerance;
      SplitMix64 rng = run.stream();

      const int per_axis = dom.dim() == 1 ? 201 : dom.dim() == 2 ? 21 : 9;
      const auto grid = grid_points(GridSpec{dom, per_axis, inst.margin, window});
      std::vector<double> gv(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) gv[i] = g(grid[i]);
      {
        ViolationTracker band(id + "band");
        ViolationTracker upper(id + "upper-sharp");
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double fx = f(grid[i]);
          const double s = slack * (1.0 + std::abs(fx));
          band.record(std::max(fx - 2.0 * eps - gv[i], gv[i] - fx) - s, {grid[i]});
          upper.record(gv[i] - (fx - 0.488 * eps) - s, {grid[i]});
        }
        run.add(band.finish());
        run.add(upper.finish());
      }

      ViolationTracker stab(id + "stabilization");
      ViolationTracker lower(id + "stratum-lower");
      ViolationTracker gap(id + "gap-certificate");
      ViolationTracker chain(id + "chain-monotone");
      const auto pts = random_points(dom, run.count(1000), rng, inst.margin, window);
      for (const Point& x : pts) {
        const int n0 = G.stratum(x);
        std::vector<double> h(static_cast<std::size_t>(n0) + 2), gk(h.size());
        for (int k = 1; k <= n0 + 2; ++k) {
          h[k - 1] = G.h(k)(x);
          gk[k - 1] = k == 1 ? h[0]
                             : smooth_max_scalar(Theta(SmoothMaxParams{G.constants().mu(k), cfg.mollifier_order}),
                                                 gk[k - 2], h[k - 1]);
        }
        const double a = G.evaluate_level(n0 + 1, x);
        const double b = G.evaluate_level(n0 + 2, x);
        stab.record(a == b && a == gk[n0] && b == gk[n0 + 1] ? 0.0 : kInf, {x});
        const double fx = f(x);
        const double s = slack * (1.0 + std::abs(fx));
        const double S = G.constants().lower_shift(n0);
        lower.record(std::max(fx - S - h[n0 - 1], fx - S - gk[n0 - 1]) - s, {x});
        gap.record(h[n0] + G.constants().band_width(n0 + 1) - gk[n0 - 1] - s, {x});
        double worst = -kInf;
        for (std::size_t k = 1; k < gk.size(); ++k) worst = std::max(worst, gk[k - 1] - gk[k]);
        chain.record(worst, {x});
      }
      run.add(stab.finish());
      run.add(lower.finish());
      run.add(gap.finish());
      run.add(chain.finish());

      const auto segs = random_segments(dom, run.count(100), rng, inst.margin, window);
      run.add(check_convexity(id + "convexity", g, segs, 1e-6));
    }
  }

  // C^1 at the kinks of max(x, -x, 2x - 1).
  {
    GluingConfig cfg;
    cfg.eps = 0.1;
    cfg.solver.tolerance = 1e-12;
    const GluedApprox G = glue(corpus_entry("max3").parse(), cfg);
    const Function g = G.as_function();
    run.add(check_c1("gluing-e2e.max3.c1-kinks", g, {{0.0}, {1.0}}, {{1.0}}, 1e-5, 1e-3));
  }
}

// ---------------------------------------------------------------- corpus-demo

void corpus_demo(SuiteRun& run) {
  for (const CorpusEntry& e : corpus()) {
    const std::string id = "corpus-demo." + e.name + ".";
    const ConvexExpr expr = e.parse();
    const Function f = Function::from_expr(expr);
    const double margin = margin_of(e);
    SplitMix64 rng = run.stream();
    const std::size_t d = e.domain.dim();
    std::vector<Point> pts = d <= 3 ? grid_points(GridSpec{e.domain, d == 1 ? 101 : d == 2 ? 15 : 7, margin, e.window})
                                    : random_points(e.domain, run.count(400), rng, margin, e.window);
    {
      ViolationTracker t(id + "finite");
      for (const Point& x : pts) t.record(std::isfinite(f(x)) ? -1.0 : kInf, {x});
      run.add(t.finish());
    }
    const auto segs = random_segments(e.domain, run.count(200), rng, margin, e.window);
    run.add(check_convexity(id + "convexity", f, segs, 1e-9));
    {
      ViolationTracker t(id + "subgradient-inequality");
      for (const Segment& s : segs) {
        Point g(d);
        const double fa = f.value_and_subgradient(s.a, g);
        const double fb = f(s.b);
        Point diff(d);
        for (std::size_t i = 0; i < d; ++i) diff[i] = s.b[i] - s.a[i];
        t.record(fa + dot(g, diff) - fb - 1e-9 * (1.0 + std::abs(fa) + std::abs(fb)), {s.a, s.b});
      }
      run.add(t.finish());
    }
    {
      ViolationTracker t(id + "lipschitz-bound");
      for (std::size_t b = 0; b < run.count(20); ++b) {
        const Point c = random_point(e.domain, rng, margin, e.window);
        const double r = 0.5 * stratum_radius(e.domain, c);
        const double bound = expr.lipschitz_on(Ball{c, r}).value;
        for (int s = 0; s < 10; ++s) {
          const Point a = along(c, r * rng.uniform(), random_direction(d, rng));
          const Point q = along(c, r * rng.uniform(), random_direction(d, rng));
          const double fa = f(a);
          const double fq = f(q);
          t.record(std::abs(fa - fq) - bound * distance(a, q) - 1e-9 * (1.0 + std::abs(fa) + std::abs(fq)), {a, q});
        }
      }
      run.add(t.finish());
    }
    if (e.has_tag("series")) {
      // Max over the closed ball of radius 2 is 2^(2d), at +-2 e_d.
      ViolationTracker t(id + "ball-max-growth");
      const double expected = std::ldexp(1.0, 2 * static_cast<int>(d));
      Point axis(d, 0.0);
      axis[d - 1] = 2.0;
      double top = expr.evaluate_unchecked(axis);
      Point arg = axis;
      for (std::size_t s = 0; s < run.count(1000); ++s) {
        const Point q = along(Point(d, 0.0), 2.0 * std::pow(rng.uniform(), 1.0 / d), random_direction(d, rng));
        const double v = expr.evaluate_unchecked(q);
        if (v > top) {
          top = v;
          arg = q;
        }
      }
      t.record(std::abs(top - expected) - 1e-12 * expected, {arg});
      run.add(t.finish());
    }
    if (d <= 2) {
      GluingConfig cfg;
      cfg.eps = 0.1;
      const GluedApprox G = glue(expr, cfg);
      const auto gp = random_points(e.domain, run.count(20), rng, margin, e.window);
      ViolationTracker t(id + "glued-band");
      for (const Point& x : gp) {
        const double fx = f(x);
        const double gx = G.evaluate(x);
        t.record(std::max(fx - 0.2 - gx, gx - fx) - 10.0 * cfg.solver.tolerance * (1.0 + std::abs(fx)), {x});
      }
      run.add(t.finish());
    }
  }
}

using SuiteFn = void (*)(SuiteRun&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"lemma21", lemma21},           {"prop22", prop22},
      {"claim-envelopes", claim_envelopes}, {"gluing-e2e", gluing_e2e},
      {"corpus-demo", corpus_demo},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

Report run_suite(std::string_view name, std::uint64_t seed, const SuiteOptions& options) {
  if (!(options.sample_scale > 0.0)) throw Error("suite: sample scale must be positive");
  for (const auto& [n, fn] : registry()) {
    if (n == name) {
      SuiteRun run(name, seed, options);
      fn(run);
      return run.finish();
    }
  }
  throw Error("unknown suite '" + std::string(name) + "'");
}

}  // namespace smoothcvx
