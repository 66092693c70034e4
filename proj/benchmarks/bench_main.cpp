#include <complex>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "tdrk/catalog.hpp"
#include "tdrk/integrator.hpp"
#include "tdrk/problems.hpp"
#include "tdrk/spectral.hpp"
#include "tdrk/stability.hpp"

using namespace tdrk;

namespace {

std::vector<Real> random_reals(std::size_t n) {
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Real> out(n);
  for (auto& x : out) x = Real(u(rng));
  return out;
}

void BM_RoundValue(benchmark::State& state) {
  const auto f = static_cast<Format>(state.range(0));
  const auto xs = random_reals(4096);
  for (auto _ : state) {
    for (const auto& x : xs) benchmark::DoNotOptimize(round_value(x, f));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(xs.size()));
  state.SetLabel(std::string(format_name(f)));
}
BENCHMARK(BM_RoundValue)->DenseRange(0, 3);

void BM_Matvec(benchmark::State& state) {
  const auto f = static_cast<Format>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto d2 = fourier_d2(n, f, Implementation::Impl1);
  const auto xs = random_reals(n);
  const SimVector v(std::span<const Real>(xs), f);
  for (auto _ : state) benchmark::DoNotOptimize(d2->apply(v));
  state.SetLabel(std::string(format_name(f)));
}
BENCHMARK(BM_Matvec)->ArgsProduct({{0, 1, 2, 3}, {25, 100}});

void BM_TdrkStep(benchmark::State& state) {
  const auto low = static_cast<Format>(state.range(0));
  const auto p = make_problem({"advection", 50, Format::B64, low, Implementation::Impl1, 1.0});
  const StepConfig cfg{1e-2, 0.5, &get_method("TDRK3s4p2e"), p.get()};
  const SimVector u = p->initial_condition();
  for (auto _ : state) benchmark::DoNotOptimize(tdrk_step(u, cfg));
  state.SetLabel("64/" + std::string(format_name(low)));
}
BENCHMARK(BM_TdrkStep)->DenseRange(0, 2);

void BM_EvalR(benchmark::State& state) {
  const auto& t = get_method("TDRK4s6p1e").tableau;
  const std::complex<double> z(-2.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(eval_R(t, z, 0.25));
}
BENCHMARK(BM_EvalR);

}  // namespace
BENCHMARK_MAIN();
