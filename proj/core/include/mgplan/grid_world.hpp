#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mgplan {

// Continuous position in cell units; the containing cell is (floor(x), floor(y)).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

inline Cell cell_of(Point p) {
  return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

inline Point cell_center(Cell c) { return {c.x + 0.5, c.y + 0.5}; }

inline double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Immutable occupancy grid. Row-major, row 0 is y = 0. A nonzero cell is an
// obstacle.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<std::uint8_t> blocked);

  static GridMap empty(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  bool contains(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool contains(Point p) const noexcept {
    return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.y >= 0.0 &&
           p.x < width_ && p.y < height_;
  }

  // Unchecked; c must be inside the map.
  bool blocked(Cell c) const noexcept { return cells_[index(c)] != 0; }
  bool free(Cell c) const noexcept { return cells_[index(c)] == 0; }

  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t idx) const noexcept {
    return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
            static_cast<int>(idx / static_cast<std::size_t>(width_))};
  }

  std::span<const std::uint8_t> cells() const noexcept { return cells_; }
  std::size_t free_count() const noexcept { return free_count_; }
  double density() const noexcept {
    return 1.0 - static_cast<double>(free_count_) / static_cast<double>(cells_.size());
  }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
  std::size_t free_count_ = 0;
};

// Ordered goals; at least two, pairwise distinct, finite.
class GoalSet {
 public:
  explicit GoalSet(std::vector<Point> goals);

  std::size_t size() const noexcept { return goals_.size(); }
  const Point& operator[](std::size_t i) const noexcept { return goals_[i]; }
  std::span<const Point> points() const noexcept { return goals_; }

  // Throws InvalidArgument unless every goal lies in a free cell of map.
  void check_on(const GridMap& map) const;

  friend bool operator==(const GoalSet&, const GoalSet&) = default;

 private:
  std::vector<Point> goals_;
};

// Throws OutOfBounds when p is outside [0,width) x [0,height).
bool is_free(const GridMap& map, Point p);

// Checks ceil(|b-a| / resolution) + 1 evenly spaced points, endpoints
// included. Endpoints are put in canonical order first so the result does not
// depend on direction.
bool segment_free(const GridMap& map, Point a, Point b, double resolution = 0.25);

// Exact test: false when any point of the closed segment lies in, or within
// 1e-9 of, a blocked cell. Implies segment_free at every resolution.
bool segment_clear(const GridMap& map, Point a, Point b);

struct ObstacleSpec {
  int min_obstacles = 8;
  int max_obstacles = 24;
  int min_size = 3;   // rectangle side, cells
  int max_size = 14;
  double min_density = 0.15;
  double max_density = 0.35;
  int max_attempts = 100;

  // The defaults are sized for 64x64. This scales rectangle sides with the
  // larger map side so the expected density stays the same.
  static ObstacleSpec scaled_for(int width, int height);
};

// Random axis-aligned rectangles. Retries until density is within bounds and
// the largest free component holds at least half of the free cells.
GridMap generate_map(std::uint64_t seed, int width, int height, const ObstacleSpec& spec = {});

// Vertical walls spanning the full height, each pierced by a single narrow gap.
struct PassageSpec {
  int walls = 3;
  int wall_thickness = 2;
  int gap = 2;
  int clutter = 0;  // extra random rectangles between walls
  int clutter_max_size = 6;
};

GridMap generate_passage_map(std::uint64_t seed, int width, int height, const PassageSpec& spec = {});

// Free-space component labels under the planner's motion rule (8 neighbours,
// no corner cutting). Obstacles get label -1; labels are assigned in raster
// order of first appearance.
struct Components {
  std::vector<int> labels;
  std::vector<std::size_t> sizes;

  int largest() const;  // lowest label among the largest components, -1 if none
};

Components free_components(const GridMap& map);

// M goals in distinct free cells of the largest free component with pairwise
// Euclidean distance >= min_separation.
GoalSet place_goals(const GridMap& map, int m, std::uint64_t seed, double min_separation,
                    int max_attempts = 100);

}  // namespace mgplan
