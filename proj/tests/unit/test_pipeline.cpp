#include <doctest.h>

#include <cmath>

#include "mgplan/errors.hpp"
#include "mgplan/pipeline.hpp"
#include "support/oracles.hpp"

using namespace mgplan;

namespace {

PipelineOptions options_for(const GridMap& map, std::uint64_t seed) {
  PipelineOptions o;
  o.planner = PlannerConfig::defaults_for(map);
  o.planner.seed = seed;
  return o;
}

// Cell-centred goals near a regular polygon around the map centre.
GoalSet polygon_goals(int size, std::size_t m, double radius, const std::vector<std::size_t>& label_at) {
  std::vector<Point> pts(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m) + 0.3;
    pts[label_at[k]] = {std::floor(size / 2.0 + radius * std::cos(a)) + 0.5,
                        std::floor(size / 2.0 + radius * std::sin(a)) + 0.5};
  }
  return GoalSet(pts);
}

WeightMatrix euclidean_matrix(const GoalSet& g) {
  WeightMatrix w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) w.set_symmetric(i, j, distance(g[i], g[j]));
  return w;
}

double oracle_tour_cost(const GridMap& map, const GoalSet& goals, const Tour& tour) {
  const auto all = oracle::grid_all_pairs(map);
  double sum = 0.0;
  for (std::size_t k = 0; k < tour.order.size(); ++k) {
    const std::size_t a = tour.order[k], b = tour.order[(k + 1) % tour.order.size()];
    sum += all[map.index(cell_of(goals[a]))][map.index(cell_of(goals[b]))];
  }
  return sum;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (Algorithm a : {Algorithm::RegionRrt, Algorithm::RrtStar, Algorithm::EuclideanRrtStar})
    CHECK(parse_algorithm(algorithm_name(a)) == a);
  CHECK(parse_algorithm("region-rrt") == Algorithm::RegionRrt);
  CHECK(parse_algorithm("euclidean-rrt-star") == Algorithm::EuclideanRrtStar);
  CHECK_THROWS_AS(parse_algorithm("prm"), InvalidArgument);
}

TEST_CASE("two goals: out and back") {
  const GridMap map = GridMap::empty(32, 32);
  const GoalSet goals({{4.5, 4.5}, {26.5, 20.5}});
  const PipelineOptions opt = options_for(map, 3);
  const Solution s = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
  CHECK(s.tour.order == std::vector<std::size_t>{0, 1});
  REQUIRE(s.legs.size() == 2);
  CHECK(s.total_cost >= 2.0 * distance(goals[0], goals[1]));
  CHECK(s.legs[1].points == s.legs[0].reversed().points);
  CHECK(s.planner_calls == 1);
  CHECK(validate_solution(map, goals, s, opt.planner).empty());
}

TEST_CASE("run_pipeline is deterministic") {
  const GridMap map = generate_map(5, 40, 40, ObstacleSpec::scaled_for(40, 40));
  const GoalSet goals = place_goals(map, 5, 5, 8.0);
  const PipelineOptions opt = options_for(map, 17);
  const Solution a = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
  const Solution b = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
  CHECK(a.tour == b.tour);
  REQUIRE(a.legs.size() == b.legs.size());
  for (std::size_t k = 0; k < a.legs.size(); ++k) CHECK(a.legs[k].points == b.legs[k].points);
  CHECK(a.total_cost == b.total_cost);
  CHECK(solution_json(a, false) == solution_json(b, false));

  PipelineOptions parallel = opt;
  parallel.workers = 3;
  const Solution c = run_pipeline(map, goals, Estimator::grid_oracle(), parallel);
  CHECK(solution_json(a, false) == solution_json(c, false));
}

TEST_CASE("empty map: oracle tour equals the Euclidean optimum") {
  const GridMap map = GridMap::empty(48, 48);
  const GoalSet goals = polygon_goals(48, 5, 17.0, {0, 3, 1, 4, 2});
  const PairEstimates est = build_weight_matrix(map, goals, Estimator::grid_oracle());
  const TspResult on_oracle = held_karp(est.weights);
  const TspResult on_euclid = held_karp(euclidean_matrix(goals));
  CHECK(on_oracle.tour == on_euclid.tour);
  CHECK(on_euclid.tour.order == std::vector<std::size_t>{0, 2, 4, 1, 3});

  const Solution s = run_pipeline(map, goals, Estimator::grid_oracle(), options_for(map, 2));
  CHECK(s.tour == on_euclid.tour);
}

TEST_CASE("baselines on an empty map") {
  const GridMap map = GridMap::empty(48, 48);
  const GoalSet goals = polygon_goals(48, 5, 17.0, {0, 3, 1, 4, 2});
  const PipelineOptions opt = options_for(map, 8);
  const Solution region = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
  const Solution star = baseline_pipeline(map, goals, Algorithm::RrtStar, opt);
  const Solution euclid = baseline_pipeline(map, goals, Algorithm::EuclideanRrtStar, opt);
  CHECK(star.tour == region.tour);
  CHECK(euclid.tour == region.tour);
  CHECK(euclid.planner_calls == 5);
  CHECK(star.planner_calls == 10);
  CHECK(region.planner_calls == 5);
  CHECK(region.estimate_calls == 10);
  for (const Solution* s : {&region, &star, &euclid}) CHECK(validate_solution(map, goals, *s, opt.planner).empty());
  CHECK_THROWS_AS(baseline_pipeline(map, goals, Algorithm::RegionRrt, opt), InvalidArgument);
}

TEST_CASE("solution invariants on cluttered maps") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GridMap map = generate_map(seed + 40, 40, 40, ObstacleSpec::scaled_for(40, 40));
    const GoalSet goals = place_goals(map, 4, seed, 8.0);
    const PipelineOptions opt = options_for(map, seed);
    Solution s;
    try {
      s = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
    } catch (const NoPathFound&) {
      continue;
    }
    CHECK(validate_solution(map, goals, s, opt.planner).empty());
    CHECK(s.total_cost >= 0.95 * oracle_tour_cost(map, goals, s.tour));
    double legs = 0.0;
    for (const auto& leg : s.legs) legs += path_cost(leg);
    CHECK(std::abs(legs - s.total_cost) <= 1e-6);

    const StageTimings& t = s.timings;
    CHECK(t.estimation_s >= 0.0);
    CHECK(t.tsp_s >= 0.0);
    CHECK(t.planning_s >= 0.0);
    CHECK(t.estimation_s + t.tsp_s + t.planning_s <= t.total_s);
  }
}

TEST_CASE("validate_solution rejects broken solutions") {
  const GridMap map = GridMap::empty(32, 32);
  const GoalSet goals({{4.5, 4.5}, {26.5, 4.5}, {15.5, 26.5}});
  const PipelineOptions opt = options_for(map, 1);
  const Solution good = run_pipeline(map, goals, Estimator::euclidean(), opt);
  REQUIRE(validate_solution(map, goals, good, opt.planner).empty());

  Solution s = good;
  s.legs.pop_back();
  CHECK_FALSE(validate_solution(map, goals, s, opt.planner).empty());
  s = good;
  s.total_cost += 1.0;
  CHECK_FALSE(validate_solution(map, goals, s, opt.planner).empty());
  s = good;
  s.tour.order[1] = s.tour.order[0];
  CHECK_FALSE(validate_solution(map, goals, s, opt.planner).empty());
  s = good;
  s.legs[0].points.front() = {20.5, 20.5};
  CHECK_FALSE(validate_solution(map, goals, s, opt.planner).empty());
}

TEST_CASE("solution JSON round trip") {
  const GridMap map = GridMap::empty(32, 32);
  const GoalSet goals({{4.5, 4.5}, {26.5, 4.5}, {15.5, 26.5}, {4.5, 20.5}});
  const Solution s = run_pipeline(map, goals, Estimator::grid_oracle(), options_for(map, 4));
  const std::string text = solution_json(s, false);
  CHECK(text.find("timings") == std::string::npos);
  CHECK(solution_json(s, true).find("timings") != std::string::npos);
  const Solution back = parse_solution_json(text);
  CHECK(back.tour == s.tour);
  REQUIRE(back.legs.size() == s.legs.size());
  for (std::size_t k = 0; k < s.legs.size(); ++k) CHECK(back.legs[k].points == s.legs[k].points);
  CHECK(back.total_cost == s.total_cost);
  CHECK(solution_json(back, false).size() > 0);
  CHECK_THROWS(parse_solution_json("{\"order\": 3}"));
}

TEST_CASE("unreachable goals abort with the pair") {
  std::vector<std::uint8_t> cells(32 * 32, 0);
  for (int y = 0; y < 32; ++y) cells[static_cast<std::size_t>(y * 32 + 16)] = 1;
  const GridMap map(32, 32, cells);
  const GoalSet goals({{4.5, 4.5}, {8.5, 20.5}, {26.5, 4.5}});
  try {
    run_pipeline(map, goals, Estimator::grid_oracle(), options_for(map, 1));
    FAIL("expected Unreachable");
  } catch (const Unreachable& e) {
    // Lowest failing pair: goal 0 and goal 2 sit on opposite sides.
    CHECK(e.first() == 0);
    CHECK(e.second() == 2);
  }
}
