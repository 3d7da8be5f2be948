#include "cusmuda/cut_pool.hpp"
#include "cusmuda/lp.hpp"
#include "cusmuda/models.hpp"
#include "cusmuda/solver.hpp"
#include "cusmuda/stage_problem.hpp"

#include <benchmark/benchmark.h>

using namespace cusmuda;

namespace {

LPProblem dense_lp(int n, std::uint64_t seed) {
  Rng rng(seed);
  LPProblem lp;
  lp.objective = Vector(n);
  for (int j = 0; j < n; ++j) lp.objective[j] = -rng.uniform(0.1, 1.0);
  lp.eq_matrix.resize(0, n);
  lp.le_matrix = Matrix(n, n);
  lp.le_rhs = Vector(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.le_matrix(i, j) = rng.uniform(0.0, 1.0);
    lp.le_rhs[i] = rng.uniform(1.0, 10.0);
  }
  return lp;
}

void BM_SolveLp(benchmark::State& state) {
  const LPProblem lp = dense_lp(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp).objective_value);
}
BENCHMARK(BM_SolveLp)->Arg(10)->Arg(30)->Arg(60);

void BM_CutPoolAdd(benchmark::State& state) {
  const auto n = state.range(0);
  const auto selector = state.range(1) == 0 ? SelectorSpec::Level1() : SelectorSpec::MLMLevel1();
  Rng rng(5);
  std::vector<Vector> points, betas;
  for (int k = 0; k < n; ++k) {
    points.push_back(Vector::NullaryExpr(5, [&](Eigen::Index) { return rng.uniform(0, 10); }));
    betas.push_back(Vector::NullaryExpr(5, [&](Eigen::Index) { return rng.uniform(-1, 1); }));
  }
  for (auto _ : state) {
    CutPool pool(5, selector);
    for (int k = 0; k < n; ++k) {
      pool.add_trial_point(points[static_cast<std::size_t>(k)]);
      pool.add_cut(Cut{-betas[static_cast<std::size_t>(k)].dot(points[static_cast<std::size_t>(k)]),
                       betas[static_cast<std::size_t>(k)], k});
    }
    pool.sync();
    benchmark::DoNotOptimize(pool.selected_indices().size());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CutPoolAdd)->Args({200, 0})->Args({200, 1})->Args({1000, 0})->Args({1000, 1});

void BM_MicroRun(benchmark::State& state) {
  const auto& preset = find_preset(state.range(0) == 0 ? "micro-inventory-T4M3" : "micro-portfolio-T4M3");
  const auto p = preset.build();
  for (auto _ : state) benchmark::DoNotOptimize(Solver(p, preset.run).run().iterations);
}
BENCHMARK(BM_MicroRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InventoryIteration(benchmark::State& state) {
  const auto& preset = find_preset("inventory-T10");
  const auto p = preset.build();
  RunConfig cfg = preset.run;
  cfg.selector = state.range(0) == 0 ? SelectorSpec::Level1() : SelectorSpec::MLMLevel1();
  for (auto _ : state) {
    Solver solver(p, cfg);
    benchmark::DoNotOptimize(solver.backward_pass(solver.forward_pass(1), 1));
  }
}
BENCHMARK(BM_InventoryIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
