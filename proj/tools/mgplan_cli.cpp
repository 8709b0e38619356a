// mgplan command-line front end.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgplan/mgplan.hpp"
#include "mgplan/text_util.hpp"

namespace fs = std::filesystem;
using namespace mgplan;

namespace {

enum class Timing { Wall, None };

Timing parse_timing(const std::string& s) {
  if (s == "wall") return Timing::Wall;
  if (s == "none") return Timing::None;
  throw InvalidArgument("--timing must be wall or none");
}

Estimator parse_estimator(const std::string& s, std::optional<double> radius) {
  if (s == "euclidean") return Estimator::euclidean();
  if (s == "oracle") return Estimator::grid_oracle(radius);
  if (s.rfind("external:", 0) == 0) return load_external_predictions(s.substr(9));
  throw InvalidArgument("unknown estimator \"" + s + "\" (euclidean, oracle or external:<dir>)");
}

Point parse_point(const std::string& s) {
  const auto f = split(s, ',');
  Point p;
  if (f.size() != 2 || !parse_double(trim(f[0]), p.x) || !parse_double(trim(f[1]), p.y)) {
    throw InvalidArgument("expected \"x,y\", got \"" + s + "\"");
  }
  return p;
}

// Writes to path, or stdout for "" and "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

MapFormat format_for(const fs::path& p) { return p.extension() == ".pgm" ? MapFormat::Pgm : MapFormat::Text; }

// Planner knobs shared by plan, pipeline and bench. Unset values fall back to
// the per-map defaults.
struct PlannerFlags {
  std::optional<double> step, tolerance, rewire, k, threshold;
  std::optional<int> max_samples;
  std::string sampling = "threshold";

  void add_to(CLI::App* app) {
    app->add_option("--step", step, "RRT step size (default 2% of the larger map side)");
    app->add_option("--tolerance", tolerance, "goal tolerance (default: step)");
    app->add_option("--rewire-radius", rewire, "RRT* rewire radius (default: 3 x step)");
    app->add_option("--max-samples", max_samples, "sample budget per leg (default 2000)");
    app->add_option("--k", k, "goal-sample probability (default 0.1)");
    app->add_option("--mask-threshold", threshold, "region cutoff for threshold sampling (default 0.5)");
    app->add_option("--sampling", sampling, "region sampling: threshold or density")
        ->check(CLI::IsMember({"threshold", "density"}));
  }

  // base carries the fields that depend on the map; zeros are left for
  // run_benchmark to derive per scenario.
  PlannerConfig apply(PlannerConfig cfg) const {
    if (step) {
      cfg.step_size = *step;
      if (!tolerance) cfg.goal_tolerance = *step;
      if (!rewire) cfg.rewire_radius = 3.0 * *step;
    }
    if (tolerance) cfg.goal_tolerance = *tolerance;
    if (rewire) cfg.rewire_radius = *rewire;
    if (k) cfg.k = *k;
    if (threshold) cfg.mask_threshold = *threshold;
    if (max_samples) cfg.max_samples = *max_samples;
    cfg.sampling = sampling == "density" ? RegionSampling::Density : RegionSampling::Threshold;
    return cfg;
  }
};

std::vector<RegionMask> all_masks(const GridMap& map, const GoalSet& goals, const Estimator& est) {
  return build_weight_matrix(map, goals, est).masks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-goal path planning: pair estimation, goal ordering and region-guided RRT."};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string timing_flag = "none";
  std::optional<double> radius;
  std::string estimator_flag = "oracle";

  // gen-map --------------------------------------------------------------
  auto* gen_map = app.add_subcommand("gen-map", "generate a random obstacle map and optionally goals");
  struct {
    int width = 64, height = 64, goals = 0, walls = 3, gap = 2, clutter = 0;
    double separation = 8.0;
    std::optional<double> min_density, max_density;
    std::optional<int> obstacles;
    bool passage = false;
    std::string out, goals_out;
  } gm;
  gen_map->add_option("--width", gm.width)->capture_default_str();
  gen_map->add_option("--height", gm.height)->capture_default_str();
  gen_map->add_option("--seed", seed)->capture_default_str();
  gen_map->add_option("--min-density", gm.min_density);
  gen_map->add_option("--max-density", gm.max_density);
  gen_map->add_option("--obstacles", gm.obstacles, "exact rectangle count (default 8 to 24)");
  gen_map->add_flag("--passage", gm.passage, "walls with narrow gaps instead of rectangles");
  gen_map->add_option("--walls", gm.walls, "passage walls")->capture_default_str();
  gen_map->add_option("--gap", gm.gap, "passage gap width")->capture_default_str();
  gen_map->add_option("--clutter", gm.clutter, "extra rectangles in passage mode")->capture_default_str();
  gen_map->add_option("--goals", gm.goals, "number of goals to place (0: none)")->capture_default_str();
  gen_map->add_option("--min-separation", gm.separation)->capture_default_str();
  gen_map->add_option("--out", gm.out, "map file (.pgm selects PGM, else text)")->required();
  gen_map->add_option("--goals-out", gm.goals_out, "goal file");

  // gen-dataset ----------------------------------------------------------
  auto* gen_ds = app.add_subcommand("gen-dataset", "generate labelled two-goal samples");
  struct {
    int n = 200, width = 64, height = 64;
    std::string out;
  } gd;
  gen_ds->add_option("--n", gd.n)->capture_default_str();
  gen_ds->add_option("--width", gd.width)->capture_default_str();
  gen_ds->add_option("--height", gd.height)->capture_default_str();
  gen_ds->add_option("--seed", seed)->capture_default_str();
  gen_ds->add_option("--radius", radius, "label dilation radius (default max(w,h)/32)");
  gen_ds->add_option("--out", gd.out)->required();

  // estimate -------------------------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "estimate every goal pair; write weights and masks");
  struct {
    std::string map, goals, weights, predictions;
    unsigned workers = 1;
  } es;
  estimate->add_option("--map", es.map)->required()->check(CLI::ExistingFile);
  estimate->add_option("--goals", es.goals)->required()->check(CLI::ExistingFile);
  estimate->add_option("--estimator", estimator_flag, "euclidean, oracle or external:<dir>")->capture_default_str();
  estimate->add_option("--radius", radius, "oracle dilation radius");
  estimate->add_option("--seed", seed);
  estimate->add_option("--workers", es.workers)->capture_default_str();
  estimate->add_option("--out", es.weights, "weight matrix CSV (default stdout)");
  estimate->add_option("--predictions", es.predictions, "also write pair_i_j.pgm + distances.csv here");

  // tsp ------------------------------------------------------------------
  auto* tsp = app.add_subcommand("tsp", "order goals from a weight matrix");
  struct {
    std::string weights, out;
    std::size_t exact_limit = 13;
  } ts;
  tsp->add_option("--weights", ts.weights)->required()->check(CLI::ExistingFile);
  tsp->add_option("--exact-limit", ts.exact_limit, "largest M solved exactly")->capture_default_str();
  tsp->add_option("--seed", seed);
  tsp->add_option("--out", ts.out, "JSON result (default stdout)");

  // plan -----------------------------------------------------------------
  auto* plan = app.add_subcommand("plan", "plan a single leg");
  struct {
    std::string map, start, goal, mask, algorithm = "rrt", out, stats;
  } pl;
  PlannerFlags plan_flags;
  plan->add_option("--map", pl.map)->required()->check(CLI::ExistingFile);
  plan->add_option("--start", pl.start, "x,y")->required();
  plan->add_option("--goal", pl.goal, "x,y")->required();
  plan->add_option("--algorithm", pl.algorithm)->check(CLI::IsMember({"rrt", "rrt-star"}))->capture_default_str();
  plan->add_option("--mask", pl.mask, "region mask PGM for rrt (default: all free space)")->check(CLI::ExistingFile);
  plan->add_option("--seed", seed)->capture_default_str();
  plan->add_option("--timing", timing_flag, "wall or none")->capture_default_str();
  plan->add_option("--out", pl.out, "path CSV of x,y rows (default stdout)");
  plan->add_option("--stats", pl.stats, "JSON with length and samples_used");
  plan_flags.add_to(plan);

  // pipeline -------------------------------------------------------------
  auto* pipeline = app.add_subcommand("pipeline", "estimate, order and plan a closed multi-goal tour");
  struct {
    std::string map, goals, algorithm = "region-rrt", out, svg;
    unsigned workers = 1;
    bool masks = false;
  } pp;
  PlannerFlags pipe_flags;
  pipeline->add_option("--map", pp.map)->required()->check(CLI::ExistingFile);
  pipeline->add_option("--goals", pp.goals)->required()->check(CLI::ExistingFile);
  pipeline->add_option("--algorithm", pp.algorithm, "region-rrt, rrt-star or euclidean-rrt-star")
      ->capture_default_str();
  pipeline->add_option("--estimator", estimator_flag)->capture_default_str();
  pipeline->add_option("--radius", radius, "oracle dilation radius");
  pipeline->add_option("--seed", seed)->capture_default_str();
  pipeline->add_option("--workers", pp.workers)->capture_default_str();
  pipeline->add_option("--timing", timing_flag, "wall adds stage timings to the JSON")->capture_default_str();
  pipeline->add_option("--out", pp.out, "solution JSON (default stdout)");
  pipeline->add_option("--svg", pp.svg, "render the solution");
  pipeline->add_flag("--svg-masks", pp.masks, "overlay the estimated masks in the SVG");
  pipe_flags.add_to(pipeline);

  // bench ----------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "repeat algorithms over scenarios");
  struct {
    std::vector<std::string> scenarios;
    std::vector<std::string> algorithms{"region-rrt", "rrt-star", "euclidean-rrt-star"};
    int repeats = 20;
    unsigned workers = 1;
    std::string out, summary;
  } bn;
  PlannerFlags bench_flags;
  bench->add_option("--scenario", bn.scenarios, "id=map:goals (repeatable)")->required();
  bench->add_option("--algorithms", bn.algorithms)->delimiter(',')->capture_default_str();
  bench->add_option("--repeats", bn.repeats)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--estimator", estimator_flag, "estimator for region-rrt")->capture_default_str();
  bench->add_option("--radius", radius, "oracle dilation radius");
  bench->add_option("--workers", bn.workers)->capture_default_str();
  bench->add_option("--timing", timing_flag, "wall fills the time_s column")->capture_default_str();
  bench->add_option("--out", bn.out, "per-run CSV (default stdout)");
  bench->add_option("--summary", bn.summary, "median/min/max table");
  bench_flags.add_to(bench);

  // score ----------------------------------------------------------------
  auto* score = app.add_subcommand("score", "compare predicted regions and distances with labels");
  struct {
    std::string labels, predictions, dataset, out;
    std::vector<double> alpha{1.0, 1.0, 1.0};
  } sc;
  score->add_option("--labels", sc.labels, "label directory (pair_i_j.pgm + distances.csv)");
  score->add_option("--predictions", sc.predictions, "prediction directory (same layout)")->required();
  score->add_option("--dataset", sc.dataset, "dataset root; predictions then hold one directory per sample");
  score->add_option("--alpha", sc.alpha, "loss weights for BCE, Dice, MSE")->delimiter(',')->expected(3);
  score->add_option("--seed", seed);
  score->add_option("--out", sc.out, "CSV report (default stdout)");

  // render ---------------------------------------------------------------
  auto* render = app.add_subcommand("render", "draw a map, goals, masks and a solution as SVG");
  struct {
    std::string map, goals, solution, masks, out;
  } rd;
  render->add_option("--map", rd.map)->required()->check(CLI::ExistingFile);
  render->add_option("--goals", rd.goals)->check(CLI::ExistingFile);
  render->add_option("--solution", rd.solution, "solution JSON")->check(CLI::ExistingFile);
  render->add_option("--masks", rd.masks, "prediction directory whose pair masks are overlaid");
  render->add_option("--seed", seed);
  render->add_option("--out", rd.out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Timing timing = parse_timing(timing_flag);

    if (*gen_map) {
      GridMap map = GridMap::empty(2, 2);
      if (gm.passage) {
        PassageSpec ps;
        ps.walls = gm.walls;
        ps.gap = gm.gap;
        ps.clutter = gm.clutter;
        map = generate_passage_map(seed, gm.width, gm.height, ps);
      } else {
        ObstacleSpec os = ObstacleSpec::scaled_for(gm.width, gm.height);
        if (gm.min_density) os.min_density = *gm.min_density;
        if (gm.max_density) os.max_density = *gm.max_density;
        if (gm.obstacles) os.min_obstacles = os.max_obstacles = *gm.obstacles;
        map = generate_map(seed, gm.width, gm.height, os);
      }
      save_map(gm.out, map, format_for(gm.out));
      if (gm.goals > 0) {
        const GoalSet goals = place_goals(map, gm.goals, derive_seed(seed, {1}), gm.separation);
        emit(gm.goals_out, format_goals(goals));
      }
    } else if (*gen_ds) {
      DatasetSpec spec;
      spec.width = gd.width;
      spec.height = gd.height;
      spec.obstacles = ObstacleSpec::scaled_for(gd.width, gd.height);
      spec.dilation_radius = radius;
      const DatasetManifest man = generate_dataset(gd.n, seed, gd.out, spec);
      std::fprintf(stderr, "%zu samples: %zu train, %zu val, %zu test\n", man.samples.size(), man.train, man.val,
                   man.test);
    } else if (*estimate) {
      const GridMap map = load_map(es.map);
      const GoalSet goals = load_goals(es.goals);
      const PairEstimates est = build_weight_matrix(map, goals, parse_estimator(estimator_flag, radius), es.workers);
      emit(es.weights, format_weight_csv(est.weights));
      if (!es.predictions.empty()) export_predictions(es.predictions, est);
    } else if (*tsp) {
      const WeightMatrix w = parse_weight_csv(read_file(ts.weights), ts.weights);
      TspConfig cfg;
      cfg.exact_limit = ts.exact_limit;
      const TspResult r = solve_tsp(w, cfg);
      nlohmann::ordered_json j;
      j["order"] = r.tour.order;
      j["cost"] = r.cost;
      j["method"] = method_name(r.method);
      emit(ts.out, j.dump(2) + "\n");
    } else if (*plan) {
      const GridMap map = load_map(pl.map);
      PlannerConfig cfg = plan_flags.apply(PlannerConfig::defaults_for(map));
      cfg.seed = seed;
      const Point start = parse_point(pl.start), goal = parse_point(pl.goal);
      const auto t0 = std::chrono::steady_clock::now();
      LegResult leg;
      if (pl.algorithm == "rrt-star") {
        leg = plan_leg_rrt_star(map, start, goal, cfg);
      } else if (!pl.mask.empty()) {
        leg = plan_leg_rrt(map, start, goal, RegionMask::from_image(read_pgm(pl.mask)), cfg);
      } else {
        leg = plan_leg_rrt_uniform(map, start, goal, cfg);
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::string csv;
      for (const Point& p : leg.path.points) csv += format_double(p.x) + "," + format_double(p.y) + "\n";
      emit(pl.out, csv);
      if (!pl.stats.empty()) {
        nlohmann::ordered_json j;
        j["length"] = leg.path.length;
        j["samples_used"] = leg.samples_used;
        if (timing == Timing::Wall) j["wall_time_s"] = secs;
        write_file(pl.stats, j.dump(2) + "\n");
      }
    } else if (*pipeline) {
      const GridMap map = load_map(pp.map);
      const GoalSet goals = load_goals(pp.goals);
      PipelineOptions opt;
      opt.planner = pipe_flags.apply(PlannerConfig::defaults_for(map));
      opt.planner.seed = seed;
      opt.workers = pp.workers;
      const Estimator est = parse_estimator(estimator_flag, radius);
      const Solution sol = solve(map, goals, parse_algorithm(pp.algorithm), est, opt);
      emit(pp.out, solution_json(sol, timing == Timing::Wall));
      if (!pp.svg.empty()) {
        const std::vector<RegionMask> masks = pp.masks ? all_masks(map, goals, est) : std::vector<RegionMask>{};
        write_svg(pp.svg, map, &goals, masks, &sol);
      }
    } else if (*bench) {
      std::vector<Scenario> scenarios;
      for (const std::string& s : bn.scenarios) {
        const auto eq = s.find('='), colon = s.rfind(':');
        if (eq == std::string::npos || colon == std::string::npos || colon < eq) {
          throw InvalidArgument("--scenario expects id=map:goals, got \"" + s + "\"");
        }
        scenarios.push_back({s.substr(0, eq), load_map(s.substr(eq + 1, colon - eq - 1)), load_goals(s.substr(colon + 1))});
      }
      BenchmarkConfig cfg;
      cfg.algorithms.clear();
      for (const auto& a : bn.algorithms) cfg.algorithms.push_back(parse_algorithm(a));
      cfg.repeats = bn.repeats;
      cfg.base_seed = seed;
      cfg.planner = bench_flags.apply(cfg.planner);
      cfg.estimator = parse_estimator(estimator_flag, radius);
      cfg.workers = bn.workers;
      const BenchmarkReport rep = run_benchmark(scenarios, cfg);
      emit(bn.out, benchmark_csv(rep.records, timing == Timing::Wall));
      if (!bn.summary.empty()) write_file(bn.summary, aggregate_table(rep.aggregates, timing == Timing::Wall));
      for (const auto& r : rep.records) {
        if (!r.ok) {
          std::fprintf(stderr, "%s %s repeat %d failed: %s\n", r.scenario.c_str(), algorithm_name(r.algorithm).c_str(),
                       r.repeat, r.failure.c_str());
        } else if (!r.integrity.empty()) {
          std::fprintf(stderr, "%s %s repeat %d integrity: %s\n", r.scenario.c_str(),
                       algorithm_name(r.algorithm).c_str(), r.repeat, r.integrity.c_str());
        }
      }
    } else if (*score) {
      losses::LossWeights lw{sc.alpha};
      lw.validate();
      std::vector<std::pair<fs::path, fs::path>> dirs;  // (labels, predictions)
      if (!sc.dataset.empty()) {
        for (const auto& s : load_manifest(sc.dataset).samples) {
          dirs.emplace_back(fs::path(sc.dataset) / s.id, fs::path(sc.predictions) / s.id);
        }
      } else if (!sc.labels.empty()) {
        dirs.emplace_back(sc.labels, sc.predictions);
      } else {
        throw InvalidArgument("score needs --labels or --dataset");
      }
      std::vector<losses::LabelPair> labels;
      std::vector<PairEstimate> preds;
      std::string csv = "pair,bce,dice,mse,total\n";
      for (const auto& [ldir, pdir] : dirs) {
        const ExternalPredictions truth = read_predictions(ldir);
        const ExternalPredictions guess = read_predictions(pdir);
        for (const auto& [ij, c] : truth.distances) {
          const auto it = guess.distances.find(ij);
          if (it == guess.distances.end()) throw MissingPrediction(ij.first, ij.second, "no row in " + pdir.string());
          losses::LabelPair lp{read_pair_mask(ldir, ij.first, ij.second), c};
          lp.validate();
          PairEstimate pe{it->second, read_pair_mask(pdir, ij.first, ij.second)};
          const losses::PairScore s = losses::score_pair(lp, pe, lw);
          std::string id = std::to_string(ij.first) + "_" + std::to_string(ij.second);
          if (dirs.size() > 1) id = ldir.filename().string() + "/" + id;
          csv += id + "," + format_double(s.bce) + "," + format_double(s.dice) + "," + format_double(s.mse) + "," +
                 format_double(s.total) + "\n";
          labels.push_back(std::move(lp));
          preds.push_back(std::move(pe));
        }
      }
      const losses::PairScore all = losses::score_all(labels, preds, lw);
      csv += "all," + format_double(all.bce) + "," + format_double(all.dice) + "," + format_double(all.mse) + "," +
             format_double(all.total) + "\n";
      emit(sc.out, csv);
    } else if (*render) {
      const GridMap map = load_map(rd.map);
      std::optional<GoalSet> goals;
      if (!rd.goals.empty()) goals = load_goals(rd.goals);
      std::optional<Solution> sol;
      if (!rd.solution.empty()) sol = parse_solution_json(read_file(rd.solution));
      std::vector<RegionMask> masks;
      if (!rd.masks.empty()) {
        for (const auto& [ij, d] : read_predictions(rd.masks).distances) {
          masks.push_back(read_pair_mask(rd.masks, ij.first, ij.second));
        }
      }
      write_svg(rd.out, map, goals ? &*goals : nullptr, masks, sol ? &*sol : nullptr);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mgplan: %s\n", e.what());
    return 1;
  }
  return 0;
}
