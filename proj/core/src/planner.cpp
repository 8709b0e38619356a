#include "mgplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mgplan/errors.hpp"

namespace mgplan {

PlannerConfig PlannerConfig::defaults_for(const GridMap& map) {
  PlannerConfig cfg;
  cfg.step_size = 0.02 * static_cast<double>(std::max(map.width(), map.height()));
  cfg.goal_tolerance = cfg.step_size;
  cfg.rewire_radius = 3.0 * cfg.step_size;
  return cfg;
}

void PlannerConfig::validate() const {
  if (!(step_size > 0.0)) throw InvalidArgument("step_size must be positive");
  if (max_samples < 1) throw InvalidArgument("max_samples must be at least 1");
  if (!(k >= 0.0 && k <= 1.0)) throw InvalidArgument("k must lie in [0,1]");
  if (!(goal_tolerance >= 0.0)) throw InvalidArgument("goal_tolerance must be nonnegative");
  if (!(collision_resolution > 0.0)) throw InvalidArgument("collision_resolution must be positive");
  if (!(rewire_radius >= 0.0)) throw InvalidArgument("rewire_radius must be nonnegative");
  if (!(mask_threshold >= 0.0 && mask_threshold <= 1.0)) throw InvalidArgument("mask_threshold must lie in [0,1]");
}

std::string Tree::check(bool ordered_parents, double tol) const {
  if (nodes.empty()) return "empty tree";
  if (nodes[0].parent != TreeNode::kNoParent || nodes[0].cost != 0.0) return "bad root";
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.parent == TreeNode::kNoParent || n.parent >= nodes.size() || n.parent == i) {
      return "node " + std::to_string(i) + " has an invalid parent";
    }
    if (ordered_parents && n.parent >= i) return "node " + std::to_string(i) + " precedes its parent";
    const TreeNode& p = nodes[n.parent];
    if (std::abs(n.cost - (p.cost + distance(p.point, n.point))) > tol) {
      return "node " + std::to_string(i) + " cost is inconsistent";
    }
    std::size_t at = i, hops = 0;
    while (at != 0) {
      at = nodes[at].parent;
      if (++hops > nodes.size()) return "cycle through node " + std::to_string(i);
    }
  }
  return {};
}

PathPolyline PathPolyline::from_points(std::vector<Point> points) {
  PathPolyline p;
  p.points = std::move(points);
  p.length = path_cost(p);
  return p;
}

PathPolyline PathPolyline::reversed() const {
  std::vector<Point> pts(points.rbegin(), points.rend());
  return from_points(std::move(pts));
}

double path_cost(const PathPolyline& path) {
  double sum = 0.0;
  for (std::size_t i = 1; i < path.points.size(); ++i) sum += distance(path.points[i - 1], path.points[i]);
  return sum;
}

bool path_collision_free(const GridMap& map, const PathPolyline& path, double resolution) {
  if (path.points.size() < 2) return false;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    if (!map.contains(path.points[i - 1]) || !map.contains(path.points[i])) return false;
    if (!segment_free(map, path.points[i - 1], path.points[i], resolution)) return false;
  }
  return true;
}

HybridSampler::HybridSampler(const GridMap& map, const RegionMask& mask, const PlannerConfig& cfg)
    : k_(cfg.k), mode_(cfg.sampling) {
  if (!mask.matches(map)) throw DimensionMismatch("mask shape differs from the map");
  double total = 0.0;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.cells()[i]) continue;
    const Cell c = map.cell_at(i);
    const double v = mask.at(c);
    const bool take = mode_ == RegionSampling::Threshold ? v >= cfg.mask_threshold : v > 0.0;
    if (!take) continue;
    cells_.push_back(c);
    if (mode_ == RegionSampling::Density) {
      total += v;
      cumulative_.push_back(total);
    }
  }
  if (cells_.empty()) {
    fell_back_ = true;
    cumulative_.clear();
    mode_ = RegionSampling::Threshold;
    for (std::size_t i = 0; i < map.cell_count(); ++i) {
      if (!map.cells()[i]) cells_.push_back(map.cell_at(i));
    }
  }
}

Point HybridSampler::sample_region(Rng& rng) const {
  std::size_t idx;
  if (mode_ == RegionSampling::Density) {
    const double r = rng.uniform01() * cumulative_.back();
    idx = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) - cumulative_.begin());
    idx = std::min(idx, cells_.size() - 1);
  } else {
    idx = static_cast<std::size_t>(rng.below(cells_.size()));
  }
  const Cell c = cells_[idx];
  const double ox = rng.uniform01();
  const double oy = rng.uniform01();
  return {c.x + ox, c.y + oy};
}

Point HybridSampler::sample(Point goal, Rng& rng) const {
  if (rng.uniform01() > k_) return sample_region(rng);
  return goal;
}

std::size_t nearest_node(const Tree& tree, Point p) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const double dx = tree.nodes[i].point.x - p.x;
    const double dy = tree.nodes[i].point.y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Point steer(Point from, Point to, double step) {
  const double d = distance(from, to);
  if (d <= step) return to;
  const double f = step / d;
  return {from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f};
}

namespace {

void check_endpoints(const GridMap& map, Point start, Point goal) {
  if (!map.contains(start) || !map.contains(goal)) throw OutOfBounds("leg endpoint outside the map");
  if (map.blocked(cell_of(start)) || map.blocked(cell_of(goal))) {
    throw InvalidArgument("leg endpoint lies in an obstacle");
  }
}

PathPolyline trace_path(const Tree& tree, std::size_t leaf, Point goal) {
  std::vector<Point> pts;
  for (std::size_t at = leaf; at != TreeNode::kNoParent; at = tree.nodes[at].parent) pts.push_back(tree.nodes[at].point);
  std::reverse(pts.begin(), pts.end());
  if (pts.size() < 2 || !(pts.back() == goal)) pts.push_back(goal);
  return PathPolyline::from_points(std::move(pts));
}

bool sees_goal(const GridMap& map, Point p, Point goal, const PlannerConfig& cfg) {
  return distance(p, goal) <= cfg.goal_tolerance && segment_clear(map, p, goal);
}

}  // namespace

LegResult plan_leg_rrt(const GridMap& map, Point start, Point goal, const RegionMask& mask,
                       const PlannerConfig& cfg, const TreeObserver& observer) {
  cfg.validate();
  check_endpoints(map, start, goal);
  const HybridSampler sampler(map, mask, cfg);
  Rng rng(cfg.seed);

  LegResult out;
  out.tree.nodes.push_back({start, TreeNode::kNoParent, 0.0});
  if (sees_goal(map, start, goal, cfg)) {
    out.path = PathPolyline::from_points({start, goal});
    out.first_path_length = out.path.length;
    return out;
  }
  for (int s = 1; s <= cfg.max_samples; ++s) {
    const Point q = sampler.sample(goal, rng);
    const std::size_t near = nearest_node(out.tree, q);
    const TreeNode from = out.tree.nodes[near];
    const Point p = steer(from.point, q, cfg.step_size);
    if (p == from.point || !map.contains(p)) continue;
    if (!segment_clear(map, from.point, p)) continue;
    out.tree.nodes.push_back({p, near, from.cost + distance(from.point, p)});
    if (observer) observer(out.tree);
    if (sees_goal(map, p, goal, cfg)) {
      out.path = trace_path(out.tree, out.tree.nodes.size() - 1, goal);
      out.samples_used = s;
      out.first_path_length = out.path.length;
      return out;
    }
  }
  throw NoPathFound("RRT found no path within " + std::to_string(cfg.max_samples) + " samples");
}

LegResult plan_leg_rrt_uniform(const GridMap& map, Point start, Point goal, const PlannerConfig& cfg,
                               const TreeObserver& observer) {
  return plan_leg_rrt(map, start, goal, RegionMask::free_space(map), cfg, observer);
}

LegResult plan_leg_rrt_star(const GridMap& map, Point start, Point goal, const PlannerConfig& cfg,
                            const TreeObserver& observer) {
  cfg.validate();
  check_endpoints(map, start, goal);
  const HybridSampler sampler(map, RegionMask::free_space(map), cfg);
  Rng rng(cfg.seed);

  LegResult out;
  auto& nodes = out.tree.nodes;
  std::vector<std::vector<std::size_t>> children(1);
  std::vector<std::size_t> goal_nodes;
  nodes.push_back({start, TreeNode::kNoParent, 0.0});
  if (sees_goal(map, start, goal, cfg)) {
    goal_nodes.push_back(0);
    out.first_path_length = distance(start, goal);
  }

  auto is_ancestor = [&](std::size_t anc, std::size_t node) {
    for (std::size_t at = node; at != TreeNode::kNoParent; at = nodes[at].parent)
      if (at == anc) return true;
    return false;
  };
  auto refresh_subtree = [&](std::size_t root) {
    std::deque<std::size_t> queue(children[root].begin(), children[root].end());
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      const TreeNode& p = nodes[nodes[c].parent];
      nodes[c].cost = p.cost + distance(p.point, nodes[c].point);
      queue.insert(queue.end(), children[c].begin(), children[c].end());
    }
  };

  std::vector<std::size_t> near;
  for (int s = 1; s <= cfg.max_samples; ++s) {
    const Point q = sampler.sample(goal, rng);
    const std::size_t nearest = nearest_node(out.tree, q);
    const Point p = steer(nodes[nearest].point, q, cfg.step_size);
    if (p == nodes[nearest].point || !map.contains(p)) continue;
    if (!segment_clear(map, nodes[nearest].point, p)) continue;

    near.clear();
    const double r2 = cfg.rewire_radius * cfg.rewire_radius;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double dx = nodes[i].point.x - p.x, dy = nodes[i].point.y - p.y;
      if (dx * dx + dy * dy <= r2) near.push_back(i);
    }

    std::size_t parent = nearest;
    double cost = nodes[nearest].cost + distance(nodes[nearest].point, p);
    for (std::size_t i : near) {
      if (i == nearest) continue;
      const double c = nodes[i].cost + distance(nodes[i].point, p);
      if (c < cost && segment_clear(map, nodes[i].point, p)) {
        cost = c;
        parent = i;
      }
    }
    const std::size_t id = nodes.size();
    nodes.push_back({p, parent, cost});
    children.emplace_back();
    children[parent].push_back(id);

    for (std::size_t i : near) {
      if (i == parent || i == 0) continue;
      const double c = cost + distance(p, nodes[i].point);
      if (c < nodes[i].cost && !is_ancestor(i, id) && segment_clear(map, p, nodes[i].point)) {
        auto& siblings = children[nodes[i].parent];
        siblings.erase(std::find(siblings.begin(), siblings.end(), i));
        nodes[i].parent = id;
        nodes[i].cost = c;
        children[id].push_back(i);
        refresh_subtree(i);
      }
    }

    if (sees_goal(map, p, goal, cfg)) {
      if (goal_nodes.empty()) out.first_path_length = trace_path(out.tree, id, goal).length;
      goal_nodes.push_back(id);
    }
    if (observer) observer(out.tree);
  }
  if (goal_nodes.empty()) {
    throw NoPathFound("RRT* found no path within " + std::to_string(cfg.max_samples) + " samples");
  }
  std::size_t best = goal_nodes.front();
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t g : goal_nodes) {
    const double c = nodes[g].cost + distance(nodes[g].point, goal);
    if (c < best_cost) {
      best_cost = c;
      best = g;
    }
  }
  out.path = trace_path(out.tree, best, goal);
  out.samples_used = cfg.max_samples;
  return out;
}

}  // namespace mgplan
