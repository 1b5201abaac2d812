#include <benchmark/benchmark.h>

#include "isopar/families.hpp"
#include "isopar/focal.hpp"
#include "isopar/geometry.hpp"

using namespace isopar;

namespace {

AlgebraKind kind_of(int64_t m) { return algebra_of_dimension(static_cast<int>(m)); }

void BM_BuildCubic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(family_g3(kind_of(state.range(0))));
}
BENCHMARK(BM_BuildCubic)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExactIdentities(benchmark::State& state) {
  const auto f = family_g3(kind_of(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_cartan_muenzner(f));
}
BENCHMARK(BM_ExactIdentities)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto model = make_model(family_g3(kind_of(state.range(0))));
  SphereSampler rng;
  const LevelPoint pt = project_to_level(model, rng.point(model->dim()), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(pt));
}
BENCHMARK(BM_Spectrum)->Arg(1)->Arg(8);

void BM_Projection(benchmark::State& state) {
  const auto model = make_model(family_g3(kind_of(state.range(0))));
  SphereSampler rng;
  for (auto _ : state) benchmark::DoNotOptimize(project_to_level(model, rng.point(model->dim()), 0.3));
}
BENCHMARK(BM_Projection)->Arg(1)->Arg(8);

void BM_FocalMap(benchmark::State& state) {
  const auto model = make_model(family_g3(kind_of(state.range(0))));
  SphereSampler rng;
  const LevelPoint pt = project_to_level(model, rng.point(model->dim()), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(focal_map(pt, 1));
}
BENCHMARK(BM_FocalMap)->Arg(1)->Arg(8);

void BM_GradientFlow(benchmark::State& state) {
  const auto model = make_model(family_g3(AlgebraKind::Octonion));
  SphereSampler rng;
  const LevelPoint pt = project_to_level(model, rng.point(model->dim()), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(gradient_flow_geodesy(pt, 0.39));
}
BENCHMARK(BM_GradientFlow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
