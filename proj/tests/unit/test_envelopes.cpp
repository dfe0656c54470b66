#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "smoothcvx/envelopes.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/parse.hpp"
#include "smoothcvx/rng.hpp"

using namespace smoothcvx;

namespace {

Function line(const char* text) { return Function::from_expr(parse_expr(text, Domain::whole(1))); }
Function plane(const char* text) { return Function::from_expr(parse_expr(text, Domain::whole(2))); }

double huber(double x, double lambda) {
  return std::abs(x) <= lambda ? x * x / (2 * lambda) : std::abs(x) - lambda / 2;
}

}  // namespace

TEST(Moreau, HuberExamples) {
  const Function f = line("abs(1;0)");
  EXPECT_NEAR(moreau(f, 0.5, Point{2.0}).value, 1.75, 1e-8);
  EXPECT_NEAR(moreau(f, 0.5, Point{0.25}).value, 0.0625, 1e-8);
  for (double x = -3; x <= 3; x += 0.125) EXPECT_NEAR(moreau(f, 0.5, Point{x}).value, huber(x, 0.5), 1e-8) << x;
}

TEST(Moreau, HuberAgainstScalarOracle) {
  const Function f = line("abs(1;0)");
  for (double x : {-1.3, -0.05, 0.4, 2.5}) {
    const auto ref = oracle::golden([&](double y) { return std::abs(y) + (x - y) * (x - y) / (2 * 0.3); }, -5, 5);
    EXPECT_NEAR(moreau(f, 0.3, Point{x}).value, ref.value, 1e-8);
  }
}

TEST(Moreau, AffineShiftsByHalfLambdaNormSquared) {
  const Function f = plane("affine(3,-4;1)");
  for (const Point& x : {Point{0, 0}, Point{1, 2}, Point{-3, 0.5}}) {
    const double lambda = 0.2;
    const double expected = f(x) - lambda * 25.0 / 2;
    // Line minimization along the gradient direction as an oracle.
    const auto ref = oracle::golden(
        [&](double t) {
          const Point y{x[0] + t * 0.6, x[1] - t * 0.8};
          return f(y) + t * t / (2 * lambda);
        },
        -10, 10);
    EXPECT_NEAR(ref.value, expected, 1e-9);
    EXPECT_NEAR(moreau(f, lambda, x).value, expected, 1e-8 * (1 + std::abs(expected)));
  }
}

TEST(Moreau, BelowBaseAndMonotoneInLambda) {
  const Function f = plane("max(max(affine(1,0;0), affine(-1,2;0)), abs(0,1;1))");
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double a = moreau(f, 0.01, x).value, b = moreau(f, 0.1, x).value;
    EXPECT_LE(a, f(x));
    EXPECT_LE(b, a + 1e-12);
  }
}

TEST(PaschHausdorff, SquareExamples) {
  const Function f = line("sqnorm()");
  EXPECT_NEAR(pasch_hausdorff(f, 2.0, Point{3.0}).value, 5.0, 1e-8);
  EXPECT_EQ(pasch_hausdorff(f, 2.0, Point{0.5}).value, 0.25);
  const auto grid = oracle::grid_min([](double y) { return y * y + 2 * std::abs(3 - y); }, -5, 5, 100001);
  EXPECT_NEAR(pasch_hausdorff(f, 2.0, Point{3.0}).value, grid.value, 1e-8);
}

TEST(PaschHausdorff, NeverAboveBase) {
  const Function f = line("pow(abs(1;0), 4)");
  for (double x = -2; x <= 2; x += 0.1)
    for (double n : {1.0, 4.0}) EXPECT_LE(pasch_hausdorff(f, n, Point{x}).value, f(Point{x}));
}

TEST(PaschHausdorff, QuarticHandleIsFourLipschitz) {
  const Function h = envelope_fn(EnvelopeSpec::pasch_hausdorff(line("pow(abs(1;0), 4)"), 4.0));
  SplitMix64 rng(9);
  for (int i = 0; i < 400; ++i) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    if (a == b) continue;
    EXPECT_LE(std::abs(h(Point{a}) - h(Point{b})) / std::abs(a - b), 4.0 + 1e-6);
  }
  ASSERT_TRUE(h.global_lipschitz().has_value());
  EXPECT_EQ(*h.global_lipschitz(), 4.0);
}

TEST(PaschHausdorff, BlowUpBaseOnBoundedDomain) {
  const Function f = Function::from_expr(parse_expr("recip1m(affine(1;0))", Domain::box({-1}, {1})));
  const double v = pasch_hausdorff(f, 4.0, Point{0.9}).value;
  // Minimizer where 1/(1-y)^2 = 4, i.e. y = 1/2.
  EXPECT_NEAR(v, 2.0 + 4 * 0.4, 1e-8);
}

TEST(Combined, SquareAtOriginIsZero) {
  EXPECT_NEAR(combined_envelope(line("sqnorm()"), 2.0, 0.1, Point{0.0}).value, 0.0, 1e-12);
}

TEST(Combined, EqualsMoreauWhenSlopeCovers) {
  const Function f = line("abs(1;0)");
  for (double x : {-2.0, -0.01, 0.3, 1.0})
    EXPECT_NEAR(combined_envelope(f, 2.0, 0.25, Point{x}).value, moreau(f, 0.25, Point{x}).value, 2e-8);
}

TEST(Combined, PenaltyShape) {
  EXPECT_EQ(combined_penalty(2.0, 0.5, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(combined_penalty(2.0, 0.5, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(combined_penalty(2.0, 0.5, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(combined_penalty(2.0, 0.5, 3.0), 5.0);
}

TEST(Combined, MatchesNestedOracleOnSquare) {
  const Function f = line("sqnorm()");
  const double n = 1.5, lambda = 0.2;
  for (double x : {-2.0, 0.1, 0.9, 3.0}) {
    auto fn = [&](double y) { return oracle::golden([&](double z) { return z * z + n * std::abs(y - z); }, -6, 6).value; };
    const auto ref = oracle::golden([&](double y) { return fn(y) + (x - y) * (x - y) / (2 * lambda); }, -6, 6);
    EXPECT_NEAR(combined_envelope(f, n, lambda, Point{x}).value, ref.value, 1e-7);
  }
}

TEST(Envelope, MoreauBandForLipschitzBase) {
  const Function f = plane("max(max(affine(1,0;0), affine(-0.5,0.8660254037844386;0)), affine(-0.5,-0.8660254037844386;0))");
  const Function fl = envelope_fn(EnvelopeSpec::moreau(f, 0.05));
  SplitMix64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    EXPECT_LE(fl(x), f(x));
    EXPECT_GE(fl(x), f(x) - 4 * 0.05 - 2e-8);
  }
  EXPECT_GE(fl.smoothness(), 1);
}

TEST(Envelope, HuberSupErrorIsHalfLambda) {
  const Function f = line("abs(1;0)");
  const Function fl = envelope_fn(EnvelopeSpec::moreau(f, 0.5));
  double sup = 0;
  for (int i = 0; i <= 100; ++i) {
    const Point x{-5 + 0.1 * i};
    sup = std::max(sup, f(x) - fl(x));
  }
  EXPECT_NEAR(sup, 0.25, 1e-6);
}

TEST(Envelope, SpecValidation) {
  const Function f = line("abs(1;0)");
  EXPECT_THROW(EnvelopeSpec::moreau(f, 0.0).validate(), Error);
  EXPECT_THROW(EnvelopeSpec::pasch_hausdorff(f, -1.0).validate(), Error);
  EXPECT_THROW(EnvelopeSpec::combined(f, 1.0, std::nan("")).validate(), Error);
  InnerSolveConfig bad;
  bad.tolerance = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Envelope, HalfplaneDomainStaysInside) {
  const Function f = Function::from_expr(parse_expr(
      "abs(1,1;0) + 0.5 * norm()", Domain::halfspaces(2, {Halfspace{{1, 0}, 1}, Halfspace{{0, 1}, 1}})));
  const EnvelopeValue v = moreau(f, 0.5, Point{0.9, 0.9});
  EXPECT_TRUE(f.domain().contains(v.argmin));
  EXPECT_LE(v.value, f(Point{0.9, 0.9}));
  EXPECT_TRUE(v.converged);
}
