// Serial reference vs OpenMP path for the data-parallel kernels.
// Argument: lattice radius (d = 2 for the spectral kernels, d = 1 for F).

#include <benchmark/benchmark.h>

#include "tdirac/clifford.hpp"
#include "tdirac/kernels.hpp"
#include "tdirac/littlewood_paley.hpp"
#include "tdirac/nonlinear.hpp"
#include "tdirac/sampling.hpp"
#include "tdirac/solver.hpp"
#include "tdirac/spectral.hpp"

using namespace tdirac;

namespace {

Exec policy(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
}

SpinorField field(int d, int radius, int d0) {
  Rng rng(1);
  return random_field(FrequencyLattice(d, radius), d0, rng);
}

void BM_ProjectPm(benchmark::State& state) {
  const GammaSet g = build_gamma(3);
  const SpinorField f = field(3, static_cast<int>(state.range(0)), g.d0);
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(project_pm(g, f, Sign::plus, 1.0, exec));
  label(state);
}

void BM_HalfWave(benchmark::State& state) {
  const SpinorField f = field(2, static_cast<int>(state.range(0)), 2);
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(solver::half_wave(f, 0.7, Sign::minus, 1.0, exec));
  label(state);
}

void BM_ApplyPj(benchmark::State& state) {
  const SpinorField f = field(2, static_cast<int>(state.range(0)), 2);
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(lp::apply_Pj(f, 3, exec));
  label(state);
}

void BM_ProjectorMultiplier(benchmark::State& state) {
  const GammaSet g = build_gamma(2);
  const SpinorField f = field(2, static_cast<int>(state.range(0)), g.d0);
  const Multiplier m = projector_multiplier(g, f.lattice(), Sign::plus);
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(apply_multiplier(m, f, exec));
  label(state);
}

void BM_EvaluateF(benchmark::State& state) {
  nl::PowerSeriesNonlinearity F(2);
  F.add_term({3, 0}, {1.0, 0.0});
  F.add_term({1, 2}, {0.0, 0.5});
  F.add_term({0, 3}, {0.0, 1.0});
  const SpinorField f = field(1, static_cast<int>(state.range(0)), 2);
  const Exec exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(nl::evaluate_F_field(F, f, 0, exec));
  label(state);
}

void BM_Axpy(benchmark::State& state) {
  const SpinorField a = field(2, static_cast<int>(state.range(0)), 4);
  const SpinorField b = field(2, static_cast<int>(state.range(0)), 4);
  SpinorField out = a;
  const Exec exec = policy(state);
  for (auto _ : state) {
    kernels::axpy(out.coeffs(), a.coeffs(), Complex(0.5, 0.25), b.coeffs(), exec);
    benchmark::ClobberMemory();
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_ProjectPm)->ArgsProduct({{8, 16}, {0, 1}});
BENCHMARK(BM_HalfWave)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_ApplyPj)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_ProjectorMultiplier)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_EvaluateF)->ArgsProduct({{64, 1024}, {0, 1}});
BENCHMARK(BM_Axpy)->ArgsProduct({{32, 128}, {0, 1}});

BENCHMARK_MAIN();
