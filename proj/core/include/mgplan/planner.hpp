#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mgplan/estimator.hpp"
#include "mgplan/grid_world.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {

enum class RegionSampling {
  Threshold,  // uniform over cells with mask >= mask_threshold
  Density,    // cell chosen with probability proportional to its mask value
};

struct PlannerConfig {
  double step_size = 2.0;
  int max_samples = 2000;
  double k = 0.1;  // probability of drawing the goal instead of a region sample
  double goal_tolerance = 2.0;
  double collision_resolution = 0.25;  // re-check resolution; tree edges use segment_clear
  double rewire_radius = 6.0;
  double mask_threshold = 0.5;
  RegionSampling sampling = RegionSampling::Threshold;
  std::uint64_t seed = 0;

  // step = 2% of the larger map side, tolerance = step, rewire = 3 * step.
  static PlannerConfig defaults_for(const GridMap& map);

  void validate() const;  // throws InvalidArgument
};

struct TreeNode {
  Point point;
  std::size_t parent = kNoParent;
  double cost = 0.0;  // from the root

  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
};

struct Tree {
  std::vector<TreeNode> nodes;

  // Empty string when consistent: single root at 0, every other node has one
  // valid parent, no cycles, costs within tol of parent cost + edge length.
  // ordered_parents additionally requires parent index < child index.
  std::string check(bool ordered_parents, double tol = 1e-9) const;
};

struct PathPolyline {
  std::vector<Point> points;
  double length = 0.0;

  static PathPolyline from_points(std::vector<Point> points);
  PathPolyline reversed() const;
};

// Sum of segment lengths.
double path_cost(const PathPolyline& path);

// Every segment passes segment_free at `resolution`.
bool path_collision_free(const GridMap& map, const PathPolyline& path, double resolution);

// Region sampler with goal biasing. Cells considered are free cells meeting
// the mask criterion; an empty region falls back to all free cells.
class HybridSampler {
 public:
  HybridSampler(const GridMap& map, const RegionMask& mask, const PlannerConfig& cfg);

  Point sample(Point goal, Rng& rng) const;
  Point sample_region(Rng& rng) const;

  bool fell_back() const noexcept { return fell_back_; }
  std::size_t region_cells() const noexcept { return cells_.size(); }

 private:
  double k_;
  RegionSampling mode_;
  std::vector<Cell> cells_;
  std::vector<double> cumulative_;  // Density mode only
  bool fell_back_ = false;
};

std::size_t nearest_node(const Tree& tree, Point p);

Point steer(Point from, Point to, double step);

struct LegResult {
  PathPolyline path;
  int samples_used = 0;
  double first_path_length = 0.0;  // RRT*: cost of the first goal connection
  Tree tree;
};

using TreeObserver = std::function<void(const Tree&)>;

// Region-guided RRT: hybrid sampling, stops at the first node within
// goal_tolerance that sees the goal. Throws NoPathFound.
LegResult plan_leg_rrt(const GridMap& map, Point start, Point goal, const RegionMask& mask,
                       const PlannerConfig& cfg, const TreeObserver& observer = {});

// plan_leg_rrt with a free-space mask, i.e. uniform sampling over free cells
// with the same goal bias.
LegResult plan_leg_rrt_uniform(const GridMap& map, Point start, Point goal, const PlannerConfig& cfg,
                               const TreeObserver& observer = {});

// RRT* with choose-parent and rewiring inside rewire_radius. Spends the
// whole sample budget and returns the cheapest goal connection.
LegResult plan_leg_rrt_star(const GridMap& map, Point start, Point goal, const PlannerConfig& cfg,
                            const TreeObserver& observer = {});

}  // namespace mgplan
