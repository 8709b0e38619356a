#include "mgplan/grid_world.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "mgplan/errors.hpp"
#include "mgplan/rng.hpp"

namespace mgplan {

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> blocked)
    : width_(width), height_(height), cells_(std::move(blocked)) {
  if (width < 2 || height < 2) {
    throw InvalidArgument("map must be at least 2x2, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("cell table size does not match map dimensions");
  }
  for (auto& c : cells_) c = c ? 1 : 0;
  free_count_ = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 0));
  if (free_count_ == 0) throw InvalidArgument("map has no free cell");
}

GridMap GridMap::empty(int width, int height) {
  return GridMap(width, height,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                           static_cast<std::size_t>(std::max(height, 0))));
}

GoalSet::GoalSet(std::vector<Point> goals) : goals_(std::move(goals)) {
  if (goals_.size() < 2) throw InvalidArgument("a goal set needs at least 2 goals");
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (!std::isfinite(goals_[i].x) || !std::isfinite(goals_[i].y)) {
      throw InvalidArgument("goal " + std::to_string(i) + " is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (goals_[i] == goals_[j]) {
        throw InvalidArgument("goals " + std::to_string(j) + " and " + std::to_string(i) +
                              " coincide");
      }
    }
  }
}

void GoalSet::check_on(const GridMap& map) const {
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (!map.contains(goals_[i]) || !map.free(cell_of(goals_[i]))) {
      throw InvalidArgument("goal " + std::to_string(i) + " is not in a free cell");
    }
  }
}

bool is_free(const GridMap& map, Point p) {
  if (!map.contains(p)) {
    throw OutOfBounds("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") is outside the map");
  }
  return map.free(cell_of(p));
}

bool segment_free(const GridMap& map, Point a, Point b, double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("collision resolution must be positive");
  if (!map.contains(a) || !map.contains(b)) {
    throw OutOfBounds("segment endpoint outside the map");
  }
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  const double len = distance(a, b);
  const auto steps = static_cast<std::size_t>(std::ceil(len / resolution));
  if (steps == 0) return map.free(cell_of(a));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    const Point p{std::lerp(a.x, b.x, t), std::lerp(a.y, b.y, t)};
    if (map.blocked(cell_of(p))) return false;
  }
  return true;
}

bool segment_clear(const GridMap& map, Point a, Point b) {
  if (!map.contains(a) || !map.contains(b)) {
    throw OutOfBounds("segment endpoint outside the map");
  }
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  auto at = [&](double t) { return Point{std::lerp(a.x, b.x, t), std::lerp(a.y, b.y, t)}; };
  auto hit = [&](Point p) {
    const Cell c = cell_of(p);
    return map.contains(c) && map.blocked(c);
  };

  // Parameters where the segment crosses a grid line.
  std::vector<double> ts{0.0, 1.0};
  auto crossings = [&](double p0, double p1) {
    if (p0 == p1) return;
    const double lo = std::min(p0, p1), hi = std::max(p0, p1);
    for (double g = std::ceil(lo); g <= hi; g += 1.0) ts.push_back((g - p0) / (p1 - p0));
  };
  crossings(a.x, b.x);
  crossings(a.y, b.y);
  std::sort(ts.begin(), ts.end());

  // Between crossings the segment stays inside one cell. At a crossing every
  // cell within kSlack is tested, so grazing a corner counts as touching it.
  constexpr double kSlack = 1e-9;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Point p = at(ts[i]);
    if (i + 1 < ts.size() && hit(at(0.5 * (ts[i] + ts[i + 1])))) return false;
    for (double dx : {-kSlack, kSlack})
      for (double dy : {-kSlack, kSlack})
        if (hit({p.x + dx, p.y + dy})) return false;
  }
  return !hit(a) && !hit(b);
}

namespace {

void fill_rect(std::vector<std::uint8_t>& cells, int width, int x0, int y0, int w, int h) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = 1;
}

bool well_connected(const GridMap& map) {
  const Components comps = free_components(map);
  const int big = comps.largest();
  return big >= 0 && 2 * comps.sizes[static_cast<std::size_t>(big)] >= map.free_count();
}

}  // namespace

Components free_components(const GridMap& map) {
  Components out;
  out.labels.assign(map.cell_count(), -1);
  // Diagonal moves need both orthogonal neighbours free, so 4-neighbour
  // flooding yields exactly the no-corner-cutting 8-connected components.
  constexpr int dx[4] = {1, 0, -1, 0};
  constexpr int dy[4] = {0, -1, 0, 1};
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < map.cell_count(); ++start) {
    if (map.cells()[start] != 0 || out.labels[start] >= 0) continue;
    const int label = static_cast<int>(out.sizes.size());
    std::size_t size = 0;
    out.labels[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      ++size;
      const Cell c = map.cell_at(idx);
      for (int d = 0; d < 4; ++d) {
        const Cell n{c.x + dx[d], c.y + dy[d]};
        if (!map.contains(n) || map.blocked(n)) continue;
        const std::size_t ni = map.index(n);
        if (out.labels[ni] >= 0) continue;
        out.labels[ni] = label;
        stack.push_back(ni);
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

int Components::largest() const {
  int best = -1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (best < 0 || sizes[i] > sizes[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

ObstacleSpec ObstacleSpec::scaled_for(int width, int height) {
  ObstacleSpec s;
  const double f = static_cast<double>(std::max(width, height)) / 64.0;
  s.min_size = std::max(1, static_cast<int>(std::lround(s.min_size * f)));
  s.max_size = std::max(s.min_size, static_cast<int>(std::lround(s.max_size * f)));
  return s;
}

GridMap generate_map(std::uint64_t seed, int width, int height, const ObstacleSpec& spec) {
  if (width < 2 || height < 2) throw InvalidArgument("map must be at least 2x2");
  if (spec.min_obstacles < 0 || spec.max_obstacles < spec.min_obstacles || spec.min_size < 1 ||
      spec.max_size < spec.min_size || spec.min_density > spec.max_density) {
    throw InvalidArgument("inconsistent obstacle spec");
  }
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<std::uint8_t> cells(n, 0);
    const int count = rng.range(spec.min_obstacles, spec.max_obstacles);
    for (int k = 0; k < count; ++k) {
      const int w = std::min(rng.range(spec.min_size, spec.max_size), width);
      const int h = std::min(rng.range(spec.min_size, spec.max_size), height);
      const int x = rng.range(0, width - w);
      const int y = rng.range(0, height - h);
      fill_rect(cells, width, x, y, w, h);
    }
    const auto blocked = static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 1));
    if (blocked == n) continue;
    const double density = static_cast<double>(blocked) / static_cast<double>(n);
    if (density < spec.min_density || density > spec.max_density) continue;
    GridMap map(width, height, std::move(cells));
    if (well_connected(map)) return map;
  }
  throw GenerationFailed("no map satisfied the obstacle spec after " +
                         std::to_string(spec.max_attempts) + " attempts");
}

GridMap generate_passage_map(std::uint64_t seed, int width, int height, const PassageSpec& spec) {
  if (spec.walls < 0 || spec.wall_thickness < 1 || spec.gap < 1 || spec.gap >= height) {
    throw InvalidArgument("inconsistent passage spec");
  }
  const int bays = spec.walls + 1;
  if (spec.walls * spec.wall_thickness + bays * 2 > width) {
    throw InvalidArgument("map too narrow for the requested walls");
  }
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> cells(n, 0);
  std::vector<int> wall_x;
  for (int w = 0; w < spec.walls; ++w) {
    const int x = (w + 1) * width / bays - spec.wall_thickness / 2;
    wall_x.push_back(x);
    fill_rect(cells, width, x, 0, spec.wall_thickness, height);
  }
  if (spec.clutter > 0) {
    for (int k = 0; k < spec.clutter; ++k) {
      const int w = rng.range(1, spec.clutter_max_size);
      const int h = rng.range(1, spec.clutter_max_size);
      fill_rect(cells, width, rng.range(0, width - std::min(w, width)), rng.range(0, height - std::min(h, height)),
                std::min(w, width), std::min(h, height));
    }
  }
  // Gaps last so clutter can never seal a passage; each gap also gets a
  // cleared apron of one cell on both sides.
  for (int x : wall_x) {
    const int gy = rng.range(1, height - spec.gap - 1);
    for (int y = gy; y < gy + spec.gap; ++y) {
      for (int xx = std::max(0, x - 1); xx < std::min(width, x + spec.wall_thickness + 1); ++xx) {
        cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(xx)] = 0;
      }
    }
  }
  return GridMap(width, height, std::move(cells));
}

GoalSet place_goals(const GridMap& map, int m, std::uint64_t seed, double min_separation,
                    int max_attempts) {
  if (m < 2) throw InvalidArgument("need at least 2 goals");
  if (!(min_separation >= 0.0)) throw InvalidArgument("min_separation must be nonnegative");
  const Components comps = free_components(map);
  const int big = comps.largest();
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < comps.labels.size(); ++i) {
    if (comps.labels[i] == big) pool.push_back(i);
  }
  if (pool.size() < static_cast<std::size_t>(m)) {
    throw PlacementFailed("largest free component has fewer than " + std::to_string(m) + " cells");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Point> goals;
    std::vector<Cell> used;
    bool ok = true;
    for (int g = 0; g < m && ok; ++g) {
      ok = false;
      for (int draw = 0; draw < max_attempts; ++draw) {
        const Cell c = map.cell_at(pool[rng.below(pool.size())]);
        const Point p{c.x + rng.uniform01(), c.y + rng.uniform01()};
        if (std::find(used.begin(), used.end(), c) != used.end()) continue;
        const bool separated = std::all_of(goals.begin(), goals.end(), [&](const Point& q) {
          return distance(p, q) >= min_separation;
        });
        if (!separated) continue;
        goals.push_back(p);
        used.push_back(c);
        ok = true;
        break;
      }
    }
    if (ok) return GoalSet(std::move(goals));
  }
  throw PlacementFailed("could not place " + std::to_string(m) + " goals with separation " +
                        std::to_string(min_separation));
}

}  // namespace mgplan
