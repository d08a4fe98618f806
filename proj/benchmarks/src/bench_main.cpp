#include <benchmark/benchmark.h>

#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/harness.hpp"
#include "capnn/learners.hpp"
#include "capnn/processes.hpp"
#include "capnn/rng.hpp"

namespace {

using namespace capnn;

// Random pairs at the given bit width; the filter decides almost all of them.
void BM_CompareSeparated(benchmark::State& state) {
  SeededStream s(1, 1);
  std::vector<Dyadic> xs;
  for (int i = 0; i < 1024; ++i) xs.push_back(uniform_dyadic_bits(s, state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare(xs[i & 1023], xs[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_CompareSeparated)->Arg(64)->Arg(1024)->Arg(4096);

// Pairs 2^-bits apart force the exact fallback.
void BM_CompareNearTie(benchmark::State& state) {
  const Dyadic a = Dyadic::parse("1/2");
  const Dyadic b = sub(a, Dyadic::inverse_pow2(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compare(a, b));
}
BENCHMARK(BM_CompareNearTie)->Arg(80)->Arg(1024)->Arg(4096);

void BM_LearnerSteps(benchmark::State& state, LearnerConfig config) {
  const Trajectory tr = gen_1nn_adversarial(7, ScheduleParams::one_nn_desk(state.range(0)));
  for (auto _ : state) {
    Learner l(config);
    for (const auto& smp : tr.samples) l.step(smp.x, smp.y);
    benchmark::DoNotOptimize(l.dataset_size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_LearnerSteps, one_nn, LearnerConfig::one_nn())->Arg(5000);
BENCHMARK_CAPTURE(BM_LearnerSteps, two_c1nn, LearnerConfig::kc1nn(2))->Arg(5000);
BENCHMARK_CAPTURE(BM_LearnerSteps, knn_log2, LearnerConfig::knn(KnnSchedule::floor_log2()))
    ->Arg(5000);

void BM_Generate1nn(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_1nn_adversarial(3, ScheduleParams::one_nn_desk(state.range(0))));
  }
}
BENCHMARK(BM_Generate1nn)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
