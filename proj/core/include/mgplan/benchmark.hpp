#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgplan/pipeline.hpp"

namespace mgplan {

struct Scenario {
  std::string id;
  GridMap map;
  GoalSet goals;
};

struct BenchmarkConfig {
  std::vector<Algorithm> algorithms{Algorithm::RegionRrt, Algorithm::RrtStar, Algorithm::EuclideanRrtStar};
  int repeats = 20;
  std::uint64_t base_seed = 0;
  // Step size, tolerance and rewire radius of 0 mean "derive from the map".
  PlannerConfig planner{.step_size = 0.0, .goal_tolerance = 0.0, .rewire_radius = 0.0};
  TspConfig tsp;
  Estimator estimator = Estimator::grid_oracle();
  bool check_integrity = true;
  unsigned workers = 1;  // concurrent runs
};

struct BenchmarkRecord {
  std::string scenario;
  Algorithm algorithm = Algorithm::RegionRrt;
  int repeat = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double total_cost = 0.0;
  double wall_time_s = 0.0;
  std::size_t samples = 0;
  Tour order;
  std::string failure;    // why the run failed, when !ok
  std::string integrity;  // validate_solution message for successful runs
};

struct AggregateRow {
  std::string scenario;
  Algorithm algorithm = Algorithm::RegionRrt;
  int runs = 0;
  int failures = 0;
  double cost_median = 0.0, cost_min = 0.0, cost_max = 0.0;
  double time_median = 0.0, time_min = 0.0, time_max = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRecord> records;
  std::vector<AggregateRow> aggregates;
};

// seed(s, a, r) = derive_seed(base, {s, a, r}) with s the scenario index.
std::uint64_t run_seed(std::uint64_t base, std::size_t scenario, Algorithm algorithm, int repeat);

BenchmarkReport run_benchmark(std::span<const Scenario> scenarios, const BenchmarkConfig& config);

// Header: scenario,algorithm,repeat,seed,cost,time_s,samples,order. With
// include_time false the time_s column is written as "-" so the file is a
// pure function of the inputs.
std::string benchmark_csv(std::span<const BenchmarkRecord> records, bool include_time);

std::string aggregate_table(std::span<const AggregateRow> rows, bool include_time);

// 0 for an empty input (aggregates over runs that all failed).
double median(std::vector<double> values);

}  // namespace mgplan
