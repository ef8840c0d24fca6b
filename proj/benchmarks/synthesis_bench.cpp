#include <benchmark/benchmark.h>

#include <random>

#include "formation/hierarchy.hpp"
#include "formation/sim.hpp"
#include "formation/topology.hpp"

namespace {

using namespace formation;

struct Problem {
  MultiAgentSystem sys;
  CVector f;
  EigenSpec star;
};

Problem make_problem(Index n) {
  std::mt19937_64 rng(7);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  RVector a(n), b(n);
  CVector f(n);
  for (Index i = 0; i < n; ++i) {
    a(i) = uniform(-2.0, 2.0);
    const double mag = uniform(0.5, 2.0);
    b(i) = uniform(0.0, 1.0) < 0.5 ? -mag : mag;
    f(i) = std::polar(1.0, uniform(0.0, 6.28318530717958647));
  }
  Problem p{make_diagonal_system(a, b), f, {}};
  CVector lambdas(n - 1);
  for (Index i = 0; i < n - 1; ++i) lambdas(i) = Complex(-1.0 - 1e-3 * static_cast<double>(i), 0.0);
  p.star = star_spec(p.sys, f, lambdas);
  return p;
}

void BM_AssignDistinct(benchmark::State& state) {
  const auto p = make_problem(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign_distinct(p.sys, p.star).F.data());
  }
}
BENCHMARK(BM_AssignDistinct)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

void BM_Hierarchical(benchmark::State& state) {
  const auto p = make_problem(state.range(0));
  const auto part = balanced_partition(p.sys.n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hierarchical_synthesize(p.sys, p.f, part, GroupTopology::Star).F.data());
  }
}
BENCHMARK(BM_Hierarchical)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Arg(1000);

void BM_Eig(benchmark::State& state) {
  const auto p = make_problem(state.range(0));
  const auto res = assign_distinct(p.sys, p.star);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numeric::eig(res.closed_loop).residual);
  }
}
BENCHMARK(BM_Eig)->Arg(50)->Arg(100)->Arg(200);

void BM_SimulatePentagonStep(benchmark::State& state) {
  const auto p = make_problem(state.range(0));
  const auto res = assign_distinct(p.sys, p.star);
  SimConfig cfg;
  cfg.t_max = 1.0;
  cfg.record_every = 100;
  CVector x0(p.sys.n());
  for (Index i = 0; i < x0.size(); ++i) x0(i) = Complex(0.1 * static_cast<double>(i), -0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_linear(res.closed_loop, x0, cfg, CMatrix(p.f)).formation_error.back());
  }
}
BENCHMARK(BM_SimulatePentagonStep)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
