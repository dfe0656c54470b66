#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "smoothcvx/errors.hpp"
#include "smoothcvx/gluing.hpp"
#include "smoothcvx/parse.hpp"
#include "smoothcvx/rng.hpp"

using namespace smoothcvx;

TEST(Constants, Schedule) {
  const BandConstants c{0.1};
  EXPECT_DOUBLE_EQ(c.lower_shift(1), 0.1);
  EXPECT_DOUBLE_EQ(c.center_shift(1), 0.05);
  EXPECT_DOUBLE_EQ(c.lower_shift(3), 0.1 * 1.75);
  EXPECT_DOUBLE_EQ(c.center_shift(3), 0.1 * 1.625);
  EXPECT_DOUBLE_EQ(c.lambda(1), 0.1 / 8);
  EXPECT_DOUBLE_EQ(c.mu(2), 0.001);
}

TEST(Constants, Invariants) {
  for (double eps : {1e-3, 0.1, 1.0, 50.0}) {
    const BandConstants c{eps};
    for (int n = 1; n <= kMaxChainLength; ++n) {
      const double w = c.band_width(n);
      ASSERT_GT(w, 0.0);
      EXPECT_NEAR(c.lower_shift(n) - c.center_shift(n), w, 4e-16 * eps);
      EXPECT_LE(4 * c.lambda(n) * n * n, w * (1 + 1e-15));
      EXPECT_LT(c.mu(n), w);
      ASSERT_TRUE(std::isnormal(c.lambda(n))) << n;
      ASSERT_TRUE(std::isnormal(c.mu(n))) << n;
      EXPECT_LE(c.lower_shift(n), 2 * eps);
    }
  }
}

TEST(Stratum, SquareAtOne) {
  const ConvexExpr f = parse_expr("sqnorm()", Domain::whole(1));
  EXPECT_EQ(stratum_index(f, Point{1.0}, GluingConfig{}), 3);
  EXPECT_EQ(stratum_index(f, Point{0.0}, GluingConfig{}), 1);
  EXPECT_NEAR(stratum_radius(f.domain(), Point{1.0}), 0.2, 1e-15);
}

TEST(Stratum, GloballyLipschitzIsOne) {
  const ConvexExpr f = parse_expr("norm()", Domain::whole(2));
  SplitMix64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Point x{rng.uniform(-100, 100), rng.uniform(-100, 100)};
    EXPECT_EQ(stratum_index(f, x, GluingConfig{}), 1);
  }
}

TEST(Stratum, BlowUpGrowsWithoutBound) {
  const ConvexExpr f = parse_expr("recip1m(affine(1;0))", Domain::box({-1}, {1}));
  GluingConfig cfg;
  cfg.max_stratum = 1000;
  EXPECT_GE(stratum_index(f, Point{0.9}, cfg), 100);
  int prev = 0;
  for (double x : {0.0, 0.5, 0.8, 0.9}) {
    const int n = stratum_index(f, Point{x}, cfg);
    EXPECT_GT(n, prev);
    prev = n;
  }
  cfg.max_stratum = 64;
  EXPECT_THROW((void)stratum_index(f, Point{0.9}, cfg), StratumOverflow);
  EXPECT_THROW((void)stratum_index(f, Point{1.0}, cfg), DomainError);
}

TEST(BuildH, FirstLevelOfNormSitsInItsBand) {
  const ConvexExpr e = parse_expr("norm()", Domain::whole(2));
  const Function f = Function::from_expr(e);
  const GluingConfig cfg;
  const BandConstants c{cfg.eps};
  const Function h1 = build_h(f, 1, c, cfg);
  SplitMix64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    EXPECT_LE(h1(x), f(x) - cfg.eps / 2);
    EXPECT_GE(h1(x), f(x) - cfg.eps - 1e-7);
  }
}

TEST(Glued, LazyChain) {
  const ConvexExpr f = parse_expr("sqnorm()", Domain::whole(1));
  const GluedApprox g = glue(f, GluingConfig{});
  EXPECT_EQ(g.built_count(), 0);
  for (double x = -0.5; x <= 0.5; x += 0.05) {
    ASSERT_LE(g.stratum(Point{x}), 2);
    (void)g.evaluate(Point{x});
  }
  EXPECT_EQ(g.built_count(), 3);
  (void)g.evaluate(Point{1.0});
  EXPECT_EQ(g.built_count(), 4);
}

TEST(Glued, SecondLevelIsTheManualComposition) {
  const ConvexExpr f = parse_expr("max(max(affine(1;0), affine(-1;0)), affine(2;-1))", Domain::whole(1));
  const GluingConfig cfg;
  const GluedApprox g = glue(f, cfg);
  const Theta mu2 = make_theta({cfg.eps / 100, cfg.mollifier_order});
  for (int i = -30; i <= 30; ++i) {
    const Point x{i * 0.1};
    const double manual = smooth_max_scalar(mu2, g.g(1)(x), g.h(2)(x));
    EXPECT_EQ(g.g(2)(x), manual);
    EXPECT_EQ(g.evaluate_level(2, x), manual);
  }
}

TEST(Glued, ChainIsMonotone) {
  const ConvexExpr f = parse_expr("pow(abs(1;0), 4)", Domain::whole(1));
  const GluedApprox g = glue(f, GluingConfig{});
  for (int i = -20; i <= 20; ++i) {
    const Point x{i * 0.075};
    for (int n = 2; n <= 6; ++n) EXPECT_GE(g.evaluate_level(n, x), g.evaluate_level(n - 1, x));
  }
}

TEST(Glued, BandAndStabilization) {
  const ConvexExpr f = parse_expr("sqnorm()", Domain::whole(1));
  const GluingConfig cfg;
  const GluedApprox g = glue(f, cfg);
  for (int i = 0; i <= 100; ++i) {
    const Point x{-5 + 0.1 * i};
    const double fx = f.evaluate(x), gx = g.evaluate(x);
    EXPECT_LE(gx, fx);
    EXPECT_GE(gx, fx - 2 * cfg.eps - 1e-7 * (1 + fx));
    EXPECT_LE(gx, fx - 0.488 * cfg.eps);
    const int n0 = g.stratum(x);
    EXPECT_EQ(g.evaluate_level(n0 + 2, x), gx);
    EXPECT_EQ(g.evaluate_level(n0 + 3, x), gx);
    EXPECT_EQ(glue_eval(g, x), gx);
  }
}

TEST(Glued, SmoothAtKinks) {
  const ConvexExpr f = parse_expr("max(max(affine(1;0), affine(-1;0)), affine(2;-1))", Domain::whole(1));
  const GluedApprox g = glue(f, GluingConfig{});
  for (double k : {0.0, 1.0}) {
    const double h = 1e-5;
    const double fwd = (g.evaluate(Point{k + h}) - g.evaluate(Point{k})) / h;
    const double bwd = (g.evaluate(Point{k}) - g.evaluate(Point{k - h})) / h;
    EXPECT_NEAR(fwd, bwd, 1e-3);
  }
}

TEST(Glued, ConcurrentEvaluationMatchesSerial) {
  const ConvexExpr f = parse_expr("pow(norm(), 4)", Domain::ball({0, 0}, 1.5));
  const GluedApprox shared = glue(f, GluingConfig{});
  const GluedApprox serial = glue(f, GluingConfig{});
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({-1.2 + 0.06 * i, 0.3 - 0.02 * i});
  std::vector<double> expected;
  for (const Point& x : pts) expected.push_back(serial.evaluate(x));
  std::vector<std::vector<double>> got(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (std::size_t i = 0; i < pts.size(); ++i) got[t].push_back(shared.evaluate(pts[(i + 7 * t) % pts.size()]));
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t)
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(got[t][i], expected[(i + 7 * t) % pts.size()]);
  EXPECT_EQ(shared.built_count(), serial.built_count());
}

TEST(Glued, OverflowIsReported) {
  const ConvexExpr f = parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.0));
  GluingConfig cfg;
  cfg.max_stratum = 8;
  const GluedApprox g = glue(f, cfg);
  EXPECT_NO_THROW((void)g.evaluate(Point{0.1, 0.1}));
  EXPECT_THROW((void)g.evaluate(Point{0.99, 0.0}), StratumOverflow);
}

TEST(Glued, ConfigValidation) {
  const ConvexExpr f = parse_expr("norm()", Domain::whole(1));
  GluingConfig cfg;
  cfg.eps = 0;
  EXPECT_THROW(glue(f, cfg), Error);
  cfg = {};
  cfg.max_stratum = 0;
  EXPECT_THROW(glue(f, cfg), Error);
  cfg.max_stratum = kMaxChainLength + 1;
  EXPECT_THROW(glue(f, cfg), Error);
}

TEST(Glued, HandleCarriesCertificate) {
  const GluedApprox g = glue(parse_expr("norm()", Domain::whole(2)), GluingConfig{});
  const Function fn = g.as_function();
  EXPECT_TRUE(fn.convex_certified());
  EXPECT_GE(fn.smoothness(), 1);
  EXPECT_EQ(fn(Point{1, 1}), g.evaluate(Point{1, 1}));
}
