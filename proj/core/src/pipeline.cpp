#include "mgplan/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include <json.hpp>

#include "mgplan/errors.hpp"

namespace mgplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs job(0..n-1) on up to `workers` threads. Results are stored by index by
// the caller; the lowest-index failure is rethrown.
void for_each_index(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

constexpr std::uint64_t kLegStream = 0x4c4547;   // "LEG"
constexpr std::uint64_t kPairStream = 0x50414952;  // "PAIR"

PlannerConfig with_seed(const PlannerConfig& cfg, std::uint64_t seed) {
  PlannerConfig c = cfg;
  c.seed = seed;
  return c;
}

std::size_t next_goal(const Tour& t, std::size_t k) { return t.order[(k + 1) % t.order.size()]; }

void finish(Solution& sol) {
  sol.total_cost = 0.0;
  for (const auto& leg : sol.legs) sol.total_cost += leg.length;
}

// Plans legs for consecutive tour pairs with `plan(from, to, seed)`.
void plan_tour_legs(Solution& sol, const GoalSet& goals, const PipelineOptions& opt,
                    const std::function<LegResult(std::size_t, std::size_t, const PlannerConfig&)>& plan) {
  const std::size_t m = goals.size();
  const std::size_t planned = m == 2 ? 1 : m;
  std::vector<std::optional<LegResult>> legs(planned);
  for_each_index(planned, opt.workers, [&](std::size_t k) {
    const std::size_t a = sol.tour.order[k];
    const std::size_t b = next_goal(sol.tour, k);
    try {
      legs[k] = plan(a, b, with_seed(opt.planner, derive_seed(opt.planner.seed, {kLegStream, k})));
    } catch (const NoPathFound& e) {
      throw NoPathFound("leg " + std::to_string(a) + "->" + std::to_string(b) + ": " + e.what(), a, b);
    }
  });
  for (auto& leg : legs) {
    sol.samples_total += static_cast<std::size_t>(leg->samples_used);
    sol.legs.push_back(std::move(leg->path));
  }
  sol.planner_calls += planned;
  if (m == 2) sol.legs.push_back(sol.legs.front().reversed());
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::RegionRrt: return "REGION_RRT";
    case Algorithm::RrtStar: return "RRT_STAR";
    case Algorithm::EuclideanRrtStar: return "EUCLIDEAN_RRT_STAR";
  }
  return "UNKNOWN";
}

Algorithm parse_algorithm(const std::string& text) {
  std::string t;
  for (char c : text) t += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (t == "REGION_RRT") return Algorithm::RegionRrt;
  if (t == "RRT_STAR") return Algorithm::RrtStar;
  if (t == "EUCLIDEAN_RRT_STAR") return Algorithm::EuclideanRrtStar;
  throw InvalidArgument("unknown algorithm \"" + text + "\"");
}

Solution run_pipeline(const GridMap& map, const GoalSet& goals, const Estimator& estimator,
                      const PipelineOptions& options) {
  options.planner.validate();
  goals.check_on(map);
  const auto t0 = Clock::now();
  Solution sol;
  sol.seed = options.planner.seed;

  auto t = Clock::now();
  PairEstimates est = build_weight_matrix(map, goals, estimator, options.workers);
  sol.timings.estimation_s = seconds_since(t);
  sol.estimate_calls = est.estimate_calls;
  sol.weights = est.weights;

  t = Clock::now();
  const TspResult order = solve_tsp(est.weights, options.tsp);
  sol.timings.tsp_s = seconds_since(t);
  sol.tour = order.tour;
  sol.tsp_method = order.method;

  t = Clock::now();
  plan_tour_legs(sol, goals, options, [&](std::size_t a, std::size_t b, const PlannerConfig& cfg) {
    return plan_leg_rrt(map, goals[a], goals[b], est.mask(a, b), cfg);
  });
  sol.timings.planning_s = seconds_since(t);
  finish(sol);
  sol.timings.total_s = seconds_since(t0);
  return sol;
}

Solution baseline_pipeline(const GridMap& map, const GoalSet& goals, Algorithm algorithm,
                           const PipelineOptions& options) {
  options.planner.validate();
  goals.check_on(map);
  const auto t0 = Clock::now();
  const std::size_t m = goals.size();
  Solution sol;
  sol.seed = options.planner.seed;

  if (algorithm == Algorithm::EuclideanRrtStar) {
    auto t = Clock::now();
    const PairEstimates est = build_weight_matrix(map, goals, Estimator::euclidean(), options.workers);
    sol.timings.estimation_s = seconds_since(t);
    sol.estimate_calls = est.estimate_calls;
    sol.weights = est.weights;

    t = Clock::now();
    const TspResult order = solve_tsp(est.weights, options.tsp);
    sol.timings.tsp_s = seconds_since(t);
    sol.tour = order.tour;
    sol.tsp_method = order.method;

    t = Clock::now();
    plan_tour_legs(sol, goals, options, [&](std::size_t a, std::size_t b, const PlannerConfig& cfg) {
      return plan_leg_rrt_star(map, goals[a], goals[b], cfg);
    });
    sol.timings.planning_s = seconds_since(t);
  } else if (algorithm == Algorithm::RrtStar) {
    // Pair plans double as the distance estimate; they are reused as legs.
    auto t = Clock::now();
    const std::size_t n = pair_count(m);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    std::vector<std::optional<LegResult>> plans(n);
    for_each_index(n, options.workers, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      try {
        plans[p] = plan_leg_rrt_star(map, goals[i], goals[j],
                                     with_seed(options.planner, derive_seed(options.planner.seed, {kPairStream, p})));
      } catch (const NoPathFound& e) {
        throw NoPathFound("pair " + std::to_string(i) + "-" + std::to_string(j) + ": " + e.what(), i, j);
      }
    });
    sol.weights = WeightMatrix(m);
    for (std::size_t p = 0; p < n; ++p) {
      sol.weights.set_symmetric(pairs[p].first, pairs[p].second, plans[p]->path.length);
      sol.samples_total += static_cast<std::size_t>(plans[p]->samples_used);
    }
    sol.planner_calls = n;
    sol.timings.planning_s = seconds_since(t);

    t = Clock::now();
    const TspResult order = solve_tsp(sol.weights, options.tsp);
    sol.timings.tsp_s = seconds_since(t);
    sol.tour = order.tour;
    sol.tsp_method = order.method;

    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t a = sol.tour.order[k];
      const std::size_t b = next_goal(sol.tour, k);
      const PathPolyline& path = plans[pair_index(a, b, m)]->path;
      sol.legs.push_back(a < b ? path : path.reversed());
    }
  } else {
    throw InvalidArgument("baseline_pipeline does not run " + algorithm_name(algorithm));
  }
  finish(sol);
  sol.timings.total_s = seconds_since(t0);
  return sol;
}

Solution solve(const GridMap& map, const GoalSet& goals, Algorithm algorithm, const Estimator& estimator,
               const PipelineOptions& options) {
  if (algorithm == Algorithm::RegionRrt) return run_pipeline(map, goals, estimator, options);
  return baseline_pipeline(map, goals, algorithm, options);
}

std::string validate_solution(const GridMap& map, const GoalSet& goals, const Solution& sol,
                              const PlannerConfig& cfg) {
  const std::size_t m = goals.size();
  try {
    check_tour(sol.tour, m);
  } catch (const InvalidTour& e) {
    return e.what();
  }
  if (sol.legs.size() != m) return "expected " + std::to_string(m) + " legs, found " + std::to_string(sol.legs.size());
  const double tol = cfg.goal_tolerance + 1e-9;
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const PathPolyline& leg = sol.legs[k];
    if (leg.points.size() < 2) return "leg " + std::to_string(k) + " has fewer than 2 points";
    const Point from = goals[sol.tour.order[k]];
    const Point to = goals[next_goal(sol.tour, k)];
    if (distance(leg.points.front(), from) > tol) return "leg " + std::to_string(k) + " does not start at its goal";
    if (distance(leg.points.back(), to) > tol) return "leg " + std::to_string(k) + " does not end at its goal";
    const PathPolyline& following = sol.legs[(k + 1) % m];
    if (distance(leg.points.back(), following.points.front()) > tol) {
      return "legs " + std::to_string(k) + " and " + std::to_string((k + 1) % m) + " do not chain";
    }
    if (!path_collision_free(map, leg, cfg.collision_resolution / 2.0)) {
      return "leg " + std::to_string(k) + " collides at half resolution";
    }
    const double len = path_cost(leg);
    if (std::abs(len - leg.length) > 1e-6) return "leg " + std::to_string(k) + " length field is stale";
    sum += len;
  }
  if (std::abs(sum - sol.total_cost) > 1e-6) return "total cost does not match the legs";
  return {};
}

std::string solution_json(const Solution& sol, bool include_timings) {
  nlohmann::ordered_json j;
  j["order"] = sol.tour.order;
  j["cost"] = sol.total_cost;
  j["method"] = method_name(sol.tsp_method);
  j["seed"] = sol.seed;
  j["planner_calls"] = sol.planner_calls;
  j["samples"] = sol.samples_total;
  auto legs = nlohmann::ordered_json::array();
  for (const auto& leg : sol.legs) {
    auto pts = nlohmann::ordered_json::array();
    for (const Point& p : leg.points) pts.push_back({p.x, p.y});
    legs.push_back({{"length", leg.length}, {"points", pts}});
  }
  j["legs"] = legs;
  if (include_timings) {
    j["timings"] = {{"estimation_s", sol.timings.estimation_s},
                    {"tsp_s", sol.timings.tsp_s},
                    {"planning_s", sol.timings.planning_s},
                    {"total_s", sol.timings.total_s}};
  }
  return j.dump(2) + "\n";
}

Solution parse_solution_json(const std::string& text) {
  Solution sol;
  try {
    const auto j = nlohmann::json::parse(text);
    sol.tour.order = j.at("order").get<std::vector<std::size_t>>();
    sol.total_cost = j.at("cost").get<double>();
    for (const auto& leg : j.at("legs")) {
      std::vector<Point> pts;
      for (const auto& p : leg.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      sol.legs.push_back(PathPolyline::from_points(std::move(pts)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("<solution>", 0, e.what());
  }
  return sol;
}

}  // namespace mgplan
