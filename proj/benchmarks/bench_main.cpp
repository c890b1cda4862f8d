#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nlds/attractor.hpp"
#include "nlds/grid.hpp"
#include "nlds/integrator.hpp"

using namespace nlds;

static void BM_ImplicitDiffusionStep(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const auto u = GridFunction::sample(g, [](double x) { return std::sin(3.0 * x); });
  for (auto _ : state) benchmark::DoNotOptimize(implicit_diffusion_step(u, 1.5, 1e-4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImplicitDiffusionStep)->Arg(127)->Arg(255)->Arg(511)->Arg(1023)->Arg(2047);

static void BM_QuasilinearStep(benchmark::State& state) {
  ProblemSpec s = ProblemSpec::canonical();
  s.disc.n_interior = static_cast<int>(state.range(0));
  QuasilinearStepper stepper(s, s.initial_function(), 1e-4);
  for (auto _ : state) {
    stepper.step();
    benchmark::DoNotOptimize(stepper.state());
  }
}
BENCHMARK(BM_QuasilinearStep)->Arg(127)->Arg(255)->Arg(511);

static void BM_HausdorffSemidist(benchmark::State& state) {
  const Grid g(255);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<GridFunction> A, B;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 0.01 * static_cast<double>(i);
    A.push_back(GridFunction::sample(g, [a](double x) { return std::sin(x + a); }));
    B.push_back(GridFunction::sample(g, [a](double x) { return std::cos(x - a); }));
  }
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_semidist(A, B, NormKind::l2));
}
BENCHMARK(BM_HausdorffSemidist)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK_MAIN();
