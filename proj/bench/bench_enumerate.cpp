// Serial reference vs OpenMP kernels. Thread count follows SPHERECX_THREADS /
// OMP_NUM_THREADS.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <cstdlib>

#include "spherecx/arc_oracle.hpp"
#include "spherecx/enumerate.hpp"
#include "spherecx/experiments.hpp"

using namespace spherecx;

namespace {

ScaffoldPtr theta() {
  static auto sc = std::make_shared<const Scaffold>(theta_scaffold());
  return sc;
}

void threads_from_env() {
  if (const char* t = std::getenv("SPHERECX_THREADS")) omp_set_num_threads(std::max(1, std::atoi(t)));
}

void BM_SpheresSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_spheres_serial(*theta(), st.range(0)));
}
void BM_SpheresParallel(benchmark::State& st) {
  threads_from_env();
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_spheres(*theta(), st.range(0)));
  st.counters["threads"] = omp_get_max_threads();
}
void BM_SystemsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_systems_serial(theta(), st.range(0)));
}
void BM_SystemsParallel(benchmark::State& st) {
  threads_from_env();
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_systems(theta(), st.range(0)));
  st.counters["threads"] = omp_get_max_threads();
}

void BM_AcceptanceStepChecks(benchmark::State& st) {
  threads_from_env();
  auto cfg = ExperimentConfig::defaults();
  cfg.instances = 100;
  cfg.checks = {"strict_decrease", "step_distance", "complexity_monotonicity"};
  for (auto _ : st) benchmark::DoNotOptimize(run_acceptance(cfg));
}

void BM_DoublingCheck(benchmark::State& st) {
  const auto& S = surface_preset(0, 4);
  std::mt19937_64 rng(3);
  auto a = random_arc_system(S, rng, 4, 4);
  for (auto _ : st) benchmark::DoNotOptimize(check_doubling_commutes(a, {0, 1}));
}

}  // namespace

BENCHMARK(BM_SpheresSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpheresParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SystemsSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SystemsParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AcceptanceStepChecks)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DoublingCheck)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
