#include <benchmark/benchmark.h>

#include "adeglab/amplify.hpp"
#include "adeglab/degrees.hpp"
#include "adeglab/experiments.hpp"
#include "adeglab/expr.hpp"
#include "adeglab/gadgets.hpp"
#include "adeglab/spectral.hpp"

using namespace adeglab;

namespace {

const Rational kThird(1, 3);

}  // namespace

static void BM_Interpolate(benchmark::State& state) {
  const auto f = make_builtin(Builtin::Maj, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(f));
}
BENCHMARK(BM_Interpolate)->Arg(5)->Arg(9)->Arg(13);

static void BM_ApproxDegreeExact(benchmark::State& state) {
  const auto f = function_from_expr(state.range(0) == 0 ? "AND2 o OR2" : "AND3 o OR3");
  for (auto _ : state) benchmark::DoNotOptimize(approx_degree(f, kThird).degree);
}
BENCHMARK(BM_ApproxDegreeExact)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Without symmetry reduction the LP has one row per input.
static void BM_ApproxDegreeFullLp(benchmark::State& state) {
  const auto f = function_from_expr("AND2 o OR2");
  DegreeOptions options;
  options.use_symmetry = false;
  options.mode = state.range(0) ? lp::Mode::floating() : lp::Mode::exact();
  for (auto _ : state) benchmark::DoNotOptimize(approx_degree(f, kThird, options).degree);
}
BENCHMARK(BM_ApproxDegreeFullLp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SpectralSensitivity(benchmark::State& state) {
  const auto f = function_from_expr(state.range(0) == 9 ? "MAJ3^2" : "(AND2 o OR2)^2");
  SpectralOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_sensitivity(f, options).lambda);
}
BENCHMARK(BM_SpectralSensitivity)->Arg(9)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GadgetCensus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gadget_census(3, std::nullopt, 1).passed);
}
BENCHMARK(BM_GadgetCensus)->Unit(benchmark::kMillisecond);

static void BM_MajorityProjection(benchmark::State& state) {
  const auto base = state.range(0) ? MajorityBase::AndOr : MajorityBase::Maj3;
  for (auto _ : state) benchmark::DoNotOptimize(majority_projection(5, base, {.d_max = 8, .seed = 1}).depth);
}
BENCHMARK(BM_MajorityProjection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AmplifierPipeline(benchmark::State& state) {
  PipelineConfig config;
  config.outer = make_builtin(Builtin::Or, 2);
  config.inner = make_builtin(Builtin::Parity, 2);
  config.t = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_amplifier_pipeline(config).bound_met);
}
BENCHMARK(BM_AmplifierPipeline)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
