#include <benchmark/benchmark.h>

#include "gradflow/catalog.hpp"
#include "gradflow/diffgeo.hpp"
#include "gradflow/flow.hpp"
#include "gradflow/random.hpp"
#include "gradflow/verify.hpp"

namespace {

using namespace gradflow;

const char* const kTemplates[] = {"linear", "x2-y2", "multi-index", "newtonian", "dipole", "combo3"};

// args: template index, dimension
void BM_EvalJet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  Rng rng(1);
  const ScalarField f = instantiate_template(kTemplates[state.range(0)], n, {}, rng);
  Vector p = Vector::Constant(n, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_jet(f, p));
  }
  state.SetLabel(kTemplates[state.range(0)]);
}
BENCHMARK(BM_EvalJet)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {3, 5}});

void BM_MeanCurvature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const ScalarField f = instantiate_template("dipole", n, {}, rng);
  const Jet2 jet = eval_jet(f, Vector::Constant(n, 1.5));
  for (auto _ : state) benchmark::DoNotOptimize(mean_curvature(jet));
}
BENCHMARK(BM_MeanCurvature)->DenseRange(2, 5);

void BM_TangentTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const ScalarField f = instantiate_template("dipole", n, {}, rng);
  const Jet2 jet = eval_jet(f, Vector::Constant(n, 1.5));
  const LevelSetFrame frame = frame_at(jet);
  for (auto _ : state) benchmark::DoNotOptimize(mean_curvature_by_tangent_trace(jet, frame));
}
BENCHMARK(BM_TangentTrace)->DenseRange(2, 5);

void BM_TraceFlow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField f = make_newtonian(Vector::Zero(n), n);
  const Vector p0 = 2.0 * Vector::Unit(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(trace_flow(f, p0, 0.9, 1e-3));
  state.SetItemsProcessed(state.iterations() * 900);
}
BENCHMARK(BM_TraceFlow)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_VerifyCombo(benchmark::State& state) {
  Rng rng(3);
  const ScalarField f = instantiate_template("combo3", 4, {}, rng);
  const Vector p0 = Vector::Constant(4, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(verify_identity(f, p0, 0.5, 1e-3));
}
BENCHMARK(BM_VerifyCombo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
