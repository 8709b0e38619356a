#include <benchmark/benchmark.h>

#include "mgplan/mgplan.hpp"

using namespace mgplan;

namespace {

const GridMap& cluttered() {
  static const GridMap map = generate_map(3, 64, 64);
  return map;
}

WeightMatrix random_matrix(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  WeightMatrix w(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) w.set_symmetric(i, j, rng.uniform(1.0, 100.0));
  return w;
}

void BM_GridShortestPath(benchmark::State& state) {
  const GridMap& map = cluttered();
  const GoalSet goals = place_goals(map, 2, 1, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(grid_shortest_path(map, goals[0], goals[1]).length);
}
BENCHMARK(BM_GridShortestPath);

void BM_BuildWeightMatrix(benchmark::State& state) {
  const GridMap& map = cluttered();
  const GoalSet goals = place_goals(map, static_cast<std::size_t>(state.range(0)), 2, 8.0);
  const Estimator oracle = Estimator::grid_oracle();
  for (auto _ : state) benchmark::DoNotOptimize(build_weight_matrix(map, goals, oracle).estimate_calls);
}
BENCHMARK(BM_BuildWeightMatrix)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_HeldKarp(benchmark::State& state) {
  const WeightMatrix w = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(held_karp(w).cost);
}
BENCHMARK(BM_HeldKarp)->DenseRange(6, 13, 1)->Unit(benchmark::kMicrosecond);

void BM_LocalSearch(benchmark::State& state) {
  const WeightMatrix w = random_matrix(static_cast<std::size_t>(state.range(0)), 9);
  const Tour start = nearest_neighbor(w);
  for (auto _ : state) benchmark::DoNotOptimize(local_search_improve(w, start).order.data());
}
BENCHMARK(BM_LocalSearch)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);

// Guided leg (oracle mask) against uniform sampling on the same pair.
void BM_LegGuided(benchmark::State& state) {
  const GridMap& map = cluttered();
  const GoalSet goals = place_goals(map, 2, 1, 40.0);
  const RegionMask mask = Estimator::grid_oracle().estimate_pair(map, goals[0], goals[1]).mask;
  PlannerConfig cfg = PlannerConfig::defaults_for(map);
  std::int64_t samples = 0;
  for (auto _ : state) {
    ++cfg.seed;
    try {
      samples += plan_leg_rrt(map, goals[0], goals[1], mask, cfg).samples_used;
    } catch (const NoPathFound&) {
      samples += cfg.max_samples;
    }
  }
  state.counters["samples"] = benchmark::Counter(static_cast<double>(samples), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_LegGuided)->Unit(benchmark::kMillisecond);

void BM_LegUniform(benchmark::State& state) {
  const GridMap& map = cluttered();
  const GoalSet goals = place_goals(map, 2, 1, 40.0);
  PlannerConfig cfg = PlannerConfig::defaults_for(map);
  std::int64_t samples = 0;
  for (auto _ : state) {
    ++cfg.seed;
    try {
      samples += plan_leg_rrt_uniform(map, goals[0], goals[1], cfg).samples_used;
    } catch (const NoPathFound&) {
      samples += cfg.max_samples;
    }
  }
  state.counters["samples"] = benchmark::Counter(static_cast<double>(samples), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_LegUniform)->Unit(benchmark::kMillisecond);

void BM_LegRrtStar(benchmark::State& state) {
  const GridMap& map = cluttered();
  const GoalSet goals = place_goals(map, 2, 1, 40.0);
  PlannerConfig cfg = PlannerConfig::defaults_for(map);
  for (auto _ : state) {
    ++cfg.seed;
    try {
      benchmark::DoNotOptimize(plan_leg_rrt_star(map, goals[0], goals[1], cfg).path.length);
    } catch (const NoPathFound&) {
    }
  }
}
BENCHMARK(BM_LegRrtStar)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
