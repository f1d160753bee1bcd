#include <benchmark/benchmark.h>

#include "trieig/conditioning.hpp"
#include "trieig/oracle.hpp"
#include "trieig/solver.hpp"

namespace {

using namespace trieig;

GeneralSystem Tail(std::size_t n, double gamma) {
  GeneralSystem sys;
  for (std::size_t i = 1; i <= n; ++i) sys.d.push_back(static_cast<double>(i));
  sys.c = gamma;
  return sys;
}

// gamma = n + 1 keeps the sum finite only for small n; naive stops at the
// first overflow, so its cost is bounded by n either way.
void BM_NaiveSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneralSystem sys = Tail(n, static_cast<double>(n + 1));
  for (auto _ : state) benchmark::DoNotOptimize(naive_solve(sys));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_NaiveSolve)->Arg(100)->Arg(600)->Arg(2000);

void BM_RobustSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneralSystem sys = Tail(n, static_cast<double>(n + 1));
  for (auto _ : state) benchmark::DoNotOptimize(robust_solve(sys));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RobustSolve)->Arg(100)->Arg(600)->Arg(2000);

void BM_ExtSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneralSystem sys = Tail(n, static_cast<double>(n + 1));
  for (auto _ : state) benchmark::DoNotOptimize(ext_solve(sys));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ExtSolve)->Arg(100)->Arg(600)->Arg(2000);

void BM_AllEigenvectors(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const MatrixParams p{m, 0, 1, static_cast<double>(m)};
  for (auto _ : state) benchmark::DoNotOptimize(eigenvectors(p, Method::Robust));
}
BENCHMARK(BM_AllEigenvectors)->Arg(600)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Residual(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const MatrixParams p{m, 0, 1, static_cast<double>(m)};
  const TriMatrix a = build_A(p);
  const auto col = eigenvector(p, Method::Robust, 1);
  const auto& v = std::get<ScaledVector>(col.vector);
  for (auto _ : state) benchmark::DoNotOptimize(residual(a, col.lambda, v));
}
BENCHMARK(BM_Residual)->Arg(600)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_ExactGrowthSequence(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(growth_sequence(GammaRatio::exact(Rational(static_cast<long>(m))), m));
}
BENCHMARK(BM_ExactGrowthSequence)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SkeelExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ExactSystem sys;
  for (std::size_t i = 1; i <= n; ++i) sys.d.emplace_back(static_cast<long>(i));
  sys.c = Rational(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(skeel_exact(sys));
}
BENCHMARK(BM_SkeelExact)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Perturbation(benchmark::State& state) {
  const MatrixParams p{50, 0, 1, 50};
  for (auto _ : state) benchmark::DoNotOptimize(perturbation_experiment(p, 1, 1e-8, 100, 7));
}
BENCHMARK(BM_Perturbation)->Unit(benchmark::kMillisecond);

void BM_ExtScalarMulAdd(benchmark::State& state) {
  ExtScalar acc(1.0);
  const ExtScalar f(1.0000001), g(0.5);
  for (auto _ : state) {
    acc = acc * f + g;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ExtScalarMulAdd);

}  // namespace

BENCHMARK_MAIN();
