#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

#include "ascbem/compression.hpp"
#include "ascbem/kernel.hpp"

using namespace ascbem;

namespace {

void BM_Hankel(benchmark::State& state) {
  const double x0 = static_cast<double>(state.range(0));
  double x = x0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hankel1_0(x));
    x = x0 + std::fmod(x * 1.000113, 1.0);
  }
}
BENCHMARK(BM_Hankel)->Arg(1)->Arg(10)->Arg(100);

struct Problem {
  explicit Problem(double k)
      : disc(preset_scene(ScenePreset::circle), Wavenumber(k), 10.0),
        A(assemble_matrix(disc)),
        b(assemble_rhs(disc, IncidentWave::plane({1.0, 0.0}))) {
    const CVector c = A.partialPivLu().solve(b);
    const CorrelationConfig cfg;
    windows = windows_from_correlations(compute_correlations(A, c, disc, cfg), cfg, disc);
  }
  Discretization disc;
  CMatrix A;
  CVector b;
  WindowSet windows;
};

const Problem& problem(double k) {
  static std::map<double, Problem> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, Problem(k)).first;
  return it->second;
}

void BM_DenseAssembly(benchmark::State& state) {
  const Discretization disc(preset_scene(ScenePreset::circle),
                            Wavenumber(static_cast<double>(state.range(0))), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(disc).data());
  state.counters["N"] = disc.size();
}
BENCHMARK(BM_DenseAssembly)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CompressedAssembly(benchmark::State& state) {
  const Problem& p = problem(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_compressed(p.disc, p.windows).nnz());
  state.counters["N"] = p.disc.size();
}
BENCHMARK(BM_CompressedAssembly)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Matvec(benchmark::State& state) {
  const Problem& p = problem(static_cast<double>(state.range(0)));
  const auto M = compress(p.A, p.windows, p.disc);
  for (auto _ : state) benchmark::DoNotOptimize(M.multiply(p.b).data());
  state.counters["fill"] = M.fill_fraction();
}
BENCHMARK(BM_Matvec)->Arg(32)->Arg(64);

void BM_DenseMatvec(benchmark::State& state) {
  const Problem& p = problem(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    CVector y = p.A * p.b;
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_DenseMatvec)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
