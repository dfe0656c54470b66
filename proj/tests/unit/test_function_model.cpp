#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "smoothcvx/domain.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/function.hpp"
#include "smoothcvx/parse.hpp"

using namespace smoothcvx;

namespace {

ConvexExpr on_plane(const char* text) { return parse_expr(text, Domain::whole(2)); }

}  // namespace

TEST(Parse, SqnormEvaluatesSumOfSquares) {
  const ConvexExpr e = on_plane("sqnorm()");
  EXPECT_EQ(e.evaluate(Point{3, 4}), 25.0);
  EXPECT_EQ(e.evaluate(Point{-1.5, 2}), 6.25);
}

TEST(Parse, MaxOfTwoAffinesIsAbsoluteValue) {
  const ConvexExpr e = on_plane("max(affine(1,0;0), affine(-1,0;0))");
  for (double x : {-3.0, -0.25, 0.0, 0.5, 7.0}) EXPECT_EQ(e.evaluate(Point{x, 9.0}), std::abs(x));
}

TEST(Parse, PowerBelowOneIsAConvexityViolation) {
  EXPECT_NO_THROW(on_plane("pow(abs(1,0;0), 1.0) + exp(affine(0,1;0))"));
  try {
    (void)on_plane("pow(abs(1,0;0), 0.5) + exp(affine(0,1;0))");
    FAIL() << "expected ConvexityError";
  } catch (const ConvexityError& e) {
    EXPECT_FALSE(e.node().empty());
    EXPECT_FALSE(e.rule().empty());
  }
}

TEST(Parse, SyntaxErrorsCarryTheOffset) {
  try {
    (void)on_plane("sqnorm() + ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.position(), 9u);
  }
  EXPECT_THROW(on_plane("frobnicate()"), ParseError);
  EXPECT_THROW(on_plane("affine(1,0;0"), ParseError);
}

TEST(Parse, DimensionMismatchIsADomainError) {
  EXPECT_THROW(on_plane("affine(1,2,3;0)"), DomainError);
}

TEST(Parse, ReciprocalNeedsACertificateBelowOne) {
  EXPECT_THROW(parse_expr("recip1m(norm())", Domain::whole(2)), DomainError);
  EXPECT_THROW(parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.5)), DomainError);
  EXPECT_NO_THROW(parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.0)));
}

TEST(Parse, NegativeScaleIsRejected) {
  EXPECT_THROW(on_plane("-1 * sqnorm()"), Error);
}

TEST(Parse, CanonicalTextRoundTrips) {
  const ConvexExpr e = on_plane("sqnorm() + 2 * max(norm(), softplus(1,-1;0.5))");
  const ConvexExpr again = on_plane(e.to_string().c_str());
  for (const Point& x : {Point{0.3, -0.7}, Point{2, 1}, Point{-4, 0}})
    EXPECT_EQ(e.evaluate(x), again.evaluate(x));
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(on_plane("sqnorm()").evaluate(Point{3, 4}), 25.0);
  EXPECT_EQ(parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.0)).evaluate(Point{0.5, 0}), 2.0);
  EXPECT_EQ(on_plane("abs(1,0;0)").evaluate(Point{-2, 7}), 2.0);
}

TEST(Evaluate, OutsideTheDomainThrows) {
  const ConvexExpr e = parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.0));
  EXPECT_THROW((void)e.evaluate(Point{1.0, 0}), DomainError);
  EXPECT_THROW((void)e.evaluate(Point{0.0}), DomainError);
}

TEST(Subgradient, Examples) {
  EXPECT_EQ(on_plane("sqnorm()").subgradient(Point{3, 4}), (Point{6, 8}));
  const ConvexExpr a = on_plane("max(affine(1,0;0), affine(-1,0;0))");
  EXPECT_EQ(a.subgradient(Point{0, 5}), (Point{1, 0}));
  EXPECT_EQ(a.subgradient(Point{-2, 0}), (Point{-1, 0}));
}

TEST(Subgradient, SatisfiesTheSubgradientInequality) {
  const ConvexExpr e = on_plane("pow(norm(), 3) + exp(affine(0.5,-0.25;0)) + 0.5 * abs(1,1;-1)");
  const std::vector<Point> pts = {{0.1, 0.2}, {-1, 2}, {1.5, -0.5}, {0, 0}, {0.5, 0.5}};
  for (const Point& x : pts) {
    const Point s = e.subgradient(x);
    for (const Point& y : pts) {
      const double lin = e.evaluate(x) + s[0] * (y[0] - x[0]) + s[1] * (y[1] - x[1]);
      EXPECT_LE(lin, e.evaluate(y) + 1e-12 * (1 + std::abs(e.evaluate(y))));
    }
  }
}

TEST(Lipschitz, SqnormOnUnitBall) {
  const ConvexExpr e = on_plane("sqnorm()");
  EXPECT_NEAR(e.lipschitz_on(Ball{{0, 0}, 1.0}).value, 2.0, 1e-12);
}

TEST(Lipschitz, SquareOnSmallBallMatchesGridOracle) {
  const ConvexExpr e = parse_expr("sqnorm()", Domain::whole(1));
  const LipschitzEstimate est = e.lipschitz_on(Ball{{1.0}, 0.1});
  const auto grid = oracle::grid_min([&](double y) { return -std::abs(e.subgradient(Point{y})[0]); }, 0.9, 1.1, 20001);
  EXPECT_NEAR(est.value, 2.2, 1e-12);
  EXPECT_GE(est.value, -grid.value - 1e-12);
  EXPECT_EQ(est.method, LipschitzMethod::AnalyticBound);
  EXPECT_FALSE(est.lower_estimate);
}

TEST(Lipschitz, AffineIsExact) {
  const ConvexExpr e = on_plane("affine(3,4;-2)");
  EXPECT_DOUBLE_EQ(e.lipschitz_on(Ball{{10, -3}, 5.0}).value, 5.0);
  EXPECT_DOUBLE_EQ(e.lipschitz_on_domain().value, 5.0);
}

TEST(Lipschitz, UnboundedWhereTheFunctionBlowsUp) {
  const ConvexExpr e = parse_expr("recip1m(norm())", Domain::ball({0, 0}, 1.0));
  EXPECT_THROW((void)e.lipschitz_on_domain(), UnboundedError);
  EXPECT_THROW((void)on_plane("sqnorm()").lipschitz_on_domain(), UnboundedError);
  EXPECT_NEAR(e.lipschitz_on(Ball{{0, 0}, 0.5}).value, 4.0, 1e-9);
}

TEST(Lipschitz, SampledEstimateIsALowerBound) {
  const ConvexExpr e = on_plane("sqnorm() + norm()");
  const Ball b{{0.5, 0.5}, 0.75};
  const LipschitzEstimate s = e.sampled_lipschitz(b, 256);
  EXPECT_TRUE(s.lower_estimate);
  EXPECT_EQ(s.method, LipschitzMethod::SampledSubgradient);
  EXPECT_LE(s.value, e.lipschitz_on(b).value + 1e-12);
  EXPECT_GT(s.value, 1.0);
}

TEST(Domain, ShapesAndSlack) {
  const Domain ball = Domain::ball({1, 0}, 2.0);
  EXPECT_TRUE(ball.contains(Point{2.5, 0}));
  EXPECT_FALSE(ball.contains(Point{3.0, 0}));
  EXPECT_NEAR(ball.slack(Point{2.5, 0}), 0.5, 1e-15);

  const Domain box = Domain::box({-1, 0}, {1, 4});
  EXPECT_NEAR(box.distance_to_boundary(Point{0, 1}), 1.0, 1e-15);
  EXPECT_TRUE(box.bounded());

  const Domain hs = Domain::halfspaces(2, {Halfspace{{1, 0}, 1}, Halfspace{{0, 1}, 1}});
  EXPECT_TRUE(hs.contains(Point{-100, 0.5}));
  EXPECT_FALSE(hs.contains(Point{1, 0}));
  EXPECT_FALSE(hs.bounded());
  EXPECT_TRUE(hs.contains(hs.interior_point()));

  EXPECT_TRUE(std::isinf(Domain::whole(3).slack(Point{1, 2, 3})));
}

TEST(Domain, RejectsEmptyInteriors) {
  EXPECT_THROW(Domain::ball({0}, 0.0), DomainError);
  EXPECT_THROW(Domain::box({0, 0}, {1, 0}), DomainError);
  EXPECT_THROW(Domain::halfspaces(1, {Halfspace{{1}, 0}, Halfspace{{-1}, 0}}), DomainError);
}

TEST(Domain, JsonRoundTrip) {
  for (const Domain& d : {Domain::whole(2), Domain::ball({0, 1}, 3), Domain::box({-1}, {2}),
                          Domain::halfspaces(2, {Halfspace{{1, 1}, 0.5}})}) {
    EXPECT_EQ(Domain::from_json(d.to_json()), d);
  }
  EXPECT_THROW(Domain::from_json(R"({"kind":"donut"})"), Error);
}

TEST(Function, FromExprCarriesTraits) {
  const Function f = Function::from_expr(on_plane("norm()"));
  EXPECT_TRUE(f.convex_certified());
  EXPECT_TRUE(f.has_subgradient());
  ASSERT_TRUE(f.global_lipschitz().has_value());
  EXPECT_NEAR(*f.global_lipschitz(), 1.0, 1e-12);
  EXPECT_EQ(f(Point{3, 4}), 5.0);

  const Function raw = Function::uncertified("cube", Domain::whole(1), [](PointView x) { return x[0] * x[0] * x[0]; });
  EXPECT_FALSE(raw.convex_certified());
  EXPECT_FALSE(raw.has_subgradient());
  EXPECT_EQ(raw(Point{-2}), -8.0);
}
