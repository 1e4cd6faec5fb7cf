#include <benchmark/benchmark.h>

#include "matfact/datagen.hpp"
#include "matfact/estimation.hpp"
#include "matfact/numerics.hpp"
#include "matfact/ranksel.hpp"

using namespace matfact;

namespace {

GroundTruth setting_a(std::size_t t_len, bool heavy) {
  DgpConfig cfg;
  cfg.p1 = 20;
  cfg.p2 = static_cast<Eigen::Index>(t_len);
  cfg.t_len = t_len;
  cfg.seed = 17;
  if (heavy) cfg.dist = MatrixT{3};
  return gen_dataset(cfg);
}

FitConfig three() {
  FitConfig cfg;
  cfg.k1 = cfg.k2 = 3;
  return cfg;
}

void BM_FitPe(benchmark::State& state) {
  const auto d = setting_a(static_cast<std::size_t>(state.range(0)), false);
  for (auto _ : state) benchmark::DoNotOptimize(fit_pe(d.x, three()));
}

void BM_FitRmfa(benchmark::State& state) {
  const auto d = setting_a(static_cast<std::size_t>(state.range(0)), state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_rmfa(d.x, three()));
}

void BM_RitEr(benchmark::State& state) {
  const auto d = setting_a(static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(rit_er(d.x, 10, kDefaultRankIters));
}

void BM_GenDataset(benchmark::State& state) {
  DgpConfig cfg;
  cfg.p1 = 20;
  cfg.p2 = 50;
  cfg.t_len = 50;
  cfg.dist = MatrixT{3};
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(gen_dataset(cfg));
  }
}

void BM_TopKEig(benchmark::State& state) {
  const auto n = state.range(0);
  Matrix w = Matrix::Random(n, n);
  const Matrix m = w.transpose() * w;
  for (auto _ : state) benchmark::DoNotOptimize(top_k_eig(m, 3));
}

}  // namespace

BENCHMARK(BM_FitPe)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitRmfa)->Args({50, 0})->Args({50, 1})->Args({200, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RitEr)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenDataset)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopKEig)->Arg(20)->Arg(50)->Arg(200);
BENCHMARK_MAIN();
