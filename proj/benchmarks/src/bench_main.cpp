// Microbenchmarks for the hot paths: dictionary analysis (Gram plus the
// cumulative coherence profile) and the three solvers on a mid-size
// instance. Not wired into ctest; run the binary directly when profiling.

#include <benchmark/benchmark.h>

#include "fwsparse/dictionary.hpp"
#include "fwsparse/pursuit.hpp"
#include "fwsparse/synth.hpp"

namespace {

using namespace fwsparse;

SynthConfig bench_config() {
  SynthConfig cfg;
  cfg.d = 200;
  cfg.n = 400;
  cfg.m = 3;
  cfg.dict_seed = 7;
  cfg.signal_seed = 8;
  return cfg;
}

struct BenchFixture {
  SynthConfig cfg = bench_config();
  Dictionary dict = gen_dictionary(cfg);
  SparseInstance inst = gen_instance(dict, cfg);
};

const BenchFixture& fixture() {
  static const BenchFixture fx;
  return fx;
}

void BM_DictionaryAnalyze(benchmark::State& state) {
  const auto& fx = fixture();
  for (auto _ : state) {
    auto metrics = DictionaryMetrics::analyze(fx.dict, state.range(0));
    benchmark::DoNotOptimize(metrics.coherence());
  }
}
BENCHMARK(BM_DictionaryAnalyze)->Arg(8)->Arg(64);

void BM_FwSolve(benchmark::State& state) {
  const auto& fx = fixture();
  FwConfig cfg;
  cfg.beta = 8.0 * fx.inst.coeff_l1;
  cfg.max_iters = state.range(0);
  for (auto _ : state) {
    auto trace = fw_solve(fx.dict, fx.inst.signal, cfg);
    benchmark::DoNotOptimize(trace.final_residual_norm);
  }
}
BENCHMARK(BM_FwSolve)->Arg(50)->Arg(200);

void BM_MpSolve(benchmark::State& state) {
  const auto& fx = fixture();
  FwConfig cfg;
  cfg.beta = 8.0 * fx.inst.coeff_l1;
  cfg.max_iters = state.range(0);
  for (auto _ : state) {
    auto trace = mp_solve(fx.dict, fx.inst.signal, cfg);
    benchmark::DoNotOptimize(trace.final_residual_norm);
  }
}
BENCHMARK(BM_MpSolve)->Arg(50);

void BM_OmpSolve(benchmark::State& state) {
  const auto& fx = fixture();
  FwConfig cfg;
  cfg.beta = 8.0 * fx.inst.coeff_l1;
  cfg.max_iters = 50;
  for (auto _ : state) {
    auto trace = omp_solve(fx.dict, fx.inst.signal, cfg);
    benchmark::DoNotOptimize(trace.final_residual_norm);
  }
}
BENCHMARK(BM_OmpSolve);

}  // namespace

BENCHMARK_MAIN();
