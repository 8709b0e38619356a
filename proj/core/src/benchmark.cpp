#include "mgplan/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <thread>

#include "mgplan/errors.hpp"
#include "mgplan/text_util.hpp"

namespace mgplan {

std::uint64_t run_seed(std::uint64_t base, std::size_t scenario, Algorithm algorithm, int repeat) {
  return derive_seed(base, {static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(algorithm),
                            static_cast<std::uint64_t>(repeat)});
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

PlannerConfig planner_for(const GridMap& map, const PlannerConfig& base) {
  PlannerConfig cfg = base;
  const PlannerConfig d = PlannerConfig::defaults_for(map);
  if (cfg.step_size <= 0.0) cfg.step_size = d.step_size;
  if (cfg.goal_tolerance <= 0.0) cfg.goal_tolerance = cfg.step_size;
  if (cfg.rewire_radius <= 0.0) cfg.rewire_radius = 3.0 * cfg.step_size;
  return cfg;
}

BenchmarkRecord run_one(const Scenario& sc, std::size_t s, Algorithm a, int r, const BenchmarkConfig& config) {
  BenchmarkRecord rec;
  rec.scenario = sc.id;
  rec.algorithm = a;
  rec.repeat = r;
  rec.seed = run_seed(config.base_seed, s, a, r);
  PipelineOptions opt;
  opt.planner = planner_for(sc.map, config.planner);
  opt.planner.seed = rec.seed;
  opt.tsp = config.tsp;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Solution sol = solve(sc.map, sc.goals, a, config.estimator, opt);
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.ok = true;
    rec.total_cost = sol.total_cost;
    rec.samples = sol.samples_total;
    rec.order = sol.tour;
    if (config.check_integrity) rec.integrity = validate_solution(sc.map, sc.goals, sol, opt.planner);
  } catch (const Error& e) {
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.failure = e.what();
  }
  return rec;
}

}  // namespace

BenchmarkReport run_benchmark(std::span<const Scenario> scenarios, const BenchmarkConfig& config) {
  if (config.repeats < 1) throw InvalidArgument("repeats must be at least 1");
  struct Job {
    std::size_t s;
    Algorithm a;
    int r;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < scenarios.size(); ++s)
    for (Algorithm a : config.algorithms)
      for (int r = 0; r < config.repeats; ++r) jobs.push_back({s, a, r});

  BenchmarkReport report;
  report.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& j = jobs[k];
      report.records[k] = run_one(scenarios[j.s], j.s, j.a, j.r, config);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (Algorithm a : config.algorithms) {
      AggregateRow row;
      row.scenario = scenarios[s].id;
      row.algorithm = a;
      std::vector<double> costs, times;
      for (const auto& rec : report.records) {
        if (rec.scenario != row.scenario || rec.algorithm != a) continue;
        ++row.runs;
        if (!rec.ok) {
          ++row.failures;
          continue;
        }
        costs.push_back(rec.total_cost);
        times.push_back(rec.wall_time_s);
      }
      if (!costs.empty()) {
        row.cost_median = median(costs);
        row.cost_min = *std::min_element(costs.begin(), costs.end());
        row.cost_max = *std::max_element(costs.begin(), costs.end());
        row.time_median = median(times);
        row.time_min = *std::min_element(times.begin(), times.end());
        row.time_max = *std::max_element(times.begin(), times.end());
      }
      report.aggregates.push_back(row);
    }
  }
  return report;
}

std::string benchmark_csv(std::span<const BenchmarkRecord> records, bool include_time) {
  std::string out = "scenario,algorithm,repeat,seed,cost,time_s,samples,order\n";
  for (const auto& r : records) {
    out += r.scenario + "," + algorithm_name(r.algorithm) + "," + std::to_string(r.repeat) + "," +
           std::to_string(r.seed) + ",";
    out += r.ok ? format_double(r.total_cost) : std::string("nan");
    out += ",";
    out += include_time ? format_double(r.wall_time_s) : std::string("-");
    out += "," + std::to_string(r.samples) + ",";
    if (r.ok) {
      for (std::size_t i = 0; i < r.order.order.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(r.order.order[i]);
      }
    } else {
      out += "failed";
    }
    out += "\n";
  }
  return out;
}

std::string aggregate_table(std::span<const AggregateRow> rows, bool include_time) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-20s %5s %5s %11s %11s %11s", "scenario", "algorithm", "runs", "fail",
                "cost_med", "cost_min", "cost_max");
  out += buf;
  if (include_time) {
    std::snprintf(buf, sizeof buf, " %10s %10s %10s", "time_med", "time_min", "time_max");
    out += buf;
  }
  out += "\n";
  for (const auto& r : rows) {
    if (r.failures == r.runs) {
      // Nothing succeeded, so there is nothing to summarise.
      std::snprintf(buf, sizeof buf, "%-16s %-20s %5d %5d %11s %11s %11s", r.scenario.c_str(),
                    algorithm_name(r.algorithm).c_str(), r.runs, r.failures, "-", "-", "-");
      out += buf;
      if (include_time) {
        std::snprintf(buf, sizeof buf, " %10s %10s %10s", "-", "-", "-");
        out += buf;
      }
      out += "\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%-16s %-20s %5d %5d %11.3f %11.3f %11.3f", r.scenario.c_str(),
                  algorithm_name(r.algorithm).c_str(), r.runs, r.failures, r.cost_median, r.cost_min, r.cost_max);
    out += buf;
    if (include_time) {
      std::snprintf(buf, sizeof buf, " %10.4f %10.4f %10.4f", r.time_median, r.time_min, r.time_max);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace mgplan
