#include <benchmark/benchmark.h>

#include "smoothcvx/envelopes.hpp"
#include "smoothcvx/gluing.hpp"
#include "smoothcvx/parse.hpp"
#include "smoothcvx/rng.hpp"
#include "smoothcvx/smooth_max.hpp"

using namespace smoothcvx;

static void BM_Theta(benchmark::State& state) {
  const Theta th = make_theta({0.1, static_cast<int>(state.range(0))});
  double t = -0.09;
  for (auto _ : state) {
    benchmark::DoNotOptimize(th(t));
    t = t > 0.09 ? -0.09 : t + 1e-4;
  }
}
BENCHMARK(BM_Theta)->Arg(2)->Arg(8)->Arg(32);

static void BM_SmoothMax(benchmark::State& state) {
  const Theta th = make_theta({0.1, 2});
  SplitMix64 rng(1);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smooth_max_scalar(th, x, 0.01));
    x = rng.uniform(-0.2, 0.2);
  }
}
BENCHMARK(BM_SmoothMax);

static void BM_ExprEvaluate(benchmark::State& state) {
  const ConvexExpr e = parse_expr("pow(abs(1,0,0;0), 2) + pow(abs(0,1,0;0), 4) + pow(abs(0,0,1;0), 6)", Domain::whole(3));
  const Point x{0.3, -0.2, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(e.evaluate(x));
}
BENCHMARK(BM_ExprEvaluate);

static void BM_Subgradient(benchmark::State& state) {
  const ConvexExpr e = parse_expr("max(max(affine(1,0;0), affine(-1,2;0)), softplus(1,1;0))", Domain::whole(2));
  const Point x{0.3, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(e.subgradient(x));
}
BENCHMARK(BM_Subgradient);

static void BM_Moreau(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Function f = Function::from_expr(parse_expr("norm()", Domain::whole(dim)));
  Point x(dim, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(moreau(f, 0.1, x).value);
}
BENCHMARK(BM_Moreau)->Arg(1)->Arg(2)->Arg(3);

static void BM_PaschHausdorff(benchmark::State& state) {
  const Function f = Function::from_expr(parse_expr("pow(norm(), 4)", Domain::whole(2)));
  const Point x{1.5, -0.5};
  for (auto _ : state) benchmark::DoNotOptimize(pasch_hausdorff(f, 2.0, x).value);
}
BENCHMARK(BM_PaschHausdorff);

static void BM_GlueEvalWarm(benchmark::State& state) {
  const GluedApprox g = glue(parse_expr("pow(norm(), 4)", Domain::whole(2)), GluingConfig{});
  const Point x{0.7, 0.4};
  (void)glue_eval(g, x);
  for (auto _ : state) benchmark::DoNotOptimize(glue_eval(g, x));
}
BENCHMARK(BM_GlueEvalWarm)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
