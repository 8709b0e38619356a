#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgplan/estimator.hpp"
#include "mgplan/grid_world.hpp"
#include "mgplan/planner.hpp"
#include "mgplan/tsp.hpp"

namespace mgplan {

enum class Algorithm {
  RegionRrt,         // estimator weights + region-guided RRT legs
  RrtStar,           // RRT* on every pair, weights = path lengths
  EuclideanRrtStar,  // straight-line weights, RRT* on the chosen legs only
};

std::string algorithm_name(Algorithm a);  // REGION_RRT, RRT_STAR, EUCLIDEAN_RRT_STAR
Algorithm parse_algorithm(const std::string& text);  // also accepts region-rrt etc.

struct StageTimings {
  double estimation_s = 0.0;
  double tsp_s = 0.0;
  double planning_s = 0.0;
  double total_s = 0.0;
};

struct Solution {
  Tour tour;
  std::vector<PathPolyline> legs;  // legs[k]: tour[k] -> tour[(k+1) % M]
  double total_cost = 0.0;
  StageTimings timings;
  std::uint64_t seed = 0;
  WeightMatrix weights;
  TspResult::Method tsp_method = TspResult::Method::Exact;
  std::size_t planner_calls = 0;
  std::size_t estimate_calls = 0;
  std::size_t samples_total = 0;
};

struct PipelineOptions {
  PlannerConfig planner;  // planner.seed is the master seed
  TspConfig tsp;
  unsigned workers = 1;
};

// Estimate every pair, order the goals, then plan each leg with RRT guided
// by that pair's mask. Leg seeds derive from (master seed, leg index).
// For M = 2 the single leg is planned once and traversed back.
Solution run_pipeline(const GridMap& map, const GoalSet& goals, const Estimator& estimator,
                      const PipelineOptions& options);

// RrtStar or EuclideanRrtStar.
Solution baseline_pipeline(const GridMap& map, const GoalSet& goals, Algorithm algorithm,
                           const PipelineOptions& options);

Solution solve(const GridMap& map, const GoalSet& goals, Algorithm algorithm, const Estimator& estimator,
               const PipelineOptions& options);

// Empty when the solution is a closed walk through every goal: valid tour,
// legs chained within goal_tolerance, each leg collision free at
// collision_resolution / 2, and total_cost matching the legs.
std::string validate_solution(const GridMap& map, const GoalSet& goals, const Solution& solution,
                              const PlannerConfig& cfg);

// JSON document with order, cost, method, legs and, when include_timings,
// stage timings. Contains nothing else that varies between identical runs.
std::string solution_json(const Solution& solution, bool include_timings);

// Reads back the fields written by solution_json (tour, legs, total_cost).
Solution parse_solution_json(const std::string& text);

}  // namespace mgplan
