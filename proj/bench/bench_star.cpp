// Serial reference kernels against the OpenMP kernels on discretized problems.

#include <benchmark/benchmark.h>

#include "toelanczos/discretize.hpp"
#include "toelanczos/problems.hpp"
#include "toelanczos/tensor.hpp"

using namespace toel;

namespace {

Tensor4 tensor_for(const char* id, std::size_t M) {
  const Problem p = builtin(id);
  return discretize_problem(p, build_mesh(p.a, p.b, M, MeshKind::step));
}

HyperVec start_for(const char* id, std::size_t M) { return lift(builtin(id).v, M); }

void tt(benchmark::State& state, const char* id, bool parallel) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const Tensor4 a = tensor_for(id, M);
  for (auto _ : state) {
    Tensor4 c = parallel ? star_mul_tt(a, a) : serial::star_mul_tt(a, a);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["N"] = static_cast<double>(a.n1());
}

void tv(benchmark::State& state, const char* id, bool parallel) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const Tensor4 a = tensor_for(id, M);
  HyperVec v = star_mul_tv(a, start_for(id, M));
  for (auto _ : state) {
    HyperVec y = parallel ? star_mul_tv(a, v) : serial::star_mul_tv(a, v);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(tt, const3_serial, "const3", false)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(tt, const3_omp, "const3", true)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(tv, timedep5_serial, "timedep5", false)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(tv, timedep5_omp, "timedep5", true)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(tv, nmr1_serial, "nmr1", false)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(tv, nmr1_omp, "nmr1", true)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
