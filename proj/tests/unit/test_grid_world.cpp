#include <doctest.h>

#include <cmath>
#include <set>

#include "mgplan/errors.hpp"
#include "mgplan/grid_world.hpp"
#include "mgplan/rng.hpp"
#include "support/oracles.hpp"

using namespace mgplan;

namespace {

GridMap with_blocked(int w, int h, std::initializer_list<Cell> blocked) {
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w * h), 0);
  for (Cell c : blocked) cells[static_cast<std::size_t>(c.y * w + c.x)] = 1;
  return GridMap(w, h, cells);
}

// 8x8 with the full column x = 4 blocked except for the listed rows.
GridMap wall_map(std::initializer_list<int> gaps) {
  std::vector<std::uint8_t> cells(64, 0);
  for (int y = 0; y < 8; ++y) cells[static_cast<std::size_t>(y * 8 + 4)] = 1;
  for (int y : gaps) cells[static_cast<std::size_t>(y * 8 + 4)] = 0;
  return GridMap(8, 8, cells);
}

}  // namespace

TEST_CASE("GridMap validates its construction") {
  CHECK_THROWS_AS(GridMap(1, 4, std::vector<std::uint8_t>(4)), InvalidArgument);
  CHECK_THROWS_AS(GridMap(3, 3, std::vector<std::uint8_t>(8)), InvalidArgument);
  CHECK_THROWS_AS(GridMap(2, 2, std::vector<std::uint8_t>(4, 1)), InvalidArgument);
  const GridMap m(3, 2, {0, 7, 0, 0, 0, 1});
  CHECK(m.blocked({1, 0}));
  CHECK(m.cells()[1] == 1);
  CHECK(m.free_count() == 4);
  CHECK(m.density() == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("is_free") {
  const GridMap open = GridMap::empty(4, 4);
  CHECK(is_free(open, {1.5, 1.5}));
  const GridMap one = with_blocked(4, 4, {{2, 2}});
  CHECK_FALSE(is_free(one, {2.5, 2.9}));
  CHECK(is_free(one, {2.5, 3.0}));
  CHECK_THROWS_AS(is_free(one, {-1, 0}), OutOfBounds);
  CHECK_THROWS_AS(is_free(one, {4.0, 1.0}), OutOfBounds);
  CHECK_THROWS_AS(is_free(one, {NAN, 1.0}), OutOfBounds);
}

TEST_CASE("segment_free examples") {
  const GridMap open = GridMap::empty(8, 8);
  CHECK(segment_free(open, {0.1, 0.1}, {7.9, 7.9}));
  CHECK(segment_free(wall_map({}), {1, 1}, {1, 1}));
  CHECK_FALSE(segment_free(wall_map({}), {1, 4}, {7, 4}, 0.25));

  const GridMap gap = wall_map({3});
  const Point a{1, 3.5}, b{7, 3.5};
  CHECK(segment_free(gap, a, b, 0.25));
  CHECK(oracle::segment_free_fine(gap, a, b, 0.01));

  CHECK_THROWS_AS(segment_free(open, {0, 0}, {9, 0}), OutOfBounds);
  CHECK_THROWS_AS(segment_free(open, {0, 0}, {1, 0}, 0.0), InvalidArgument);
}

TEST_CASE("segment_free does not depend on direction") {
  Rng rng(17);
  const GridMap map = generate_map(5, 24, 24, ObstacleSpec::scaled_for(24, 24));
  for (int n = 0; n < 500; ++n) {
    const Point a{rng.uniform(0, 24), rng.uniform(0, 24)};
    const Point b{rng.uniform(0, 24), rng.uniform(0, 24)};
    CHECK(segment_free(map, a, b, 0.3) == segment_free(map, b, a, 0.3));
  }
}

TEST_CASE("segment_clear is exact and conservative") {
  const GridMap gap = wall_map({3});
  CHECK(segment_clear(gap, {1, 3.5}, {7, 3.5}));
  CHECK_FALSE(segment_clear(gap, {1, 4.5}, {7, 4.5}));
  // Passing diagonally through the corner shared by two obstacles' free
  // neighbours still touches the blocked cells.
  const GridMap diag = with_blocked(4, 4, {{1, 2}, {2, 1}});
  CHECK_FALSE(segment_clear(diag, {1.5, 1.5}, {2.5, 2.5}));
  CHECK(segment_clear(diag, {0.5, 0.5}, {1.5, 1.5}));

  // Whenever segment_clear accepts, dense sampling agrees.
  Rng rng(99);
  const GridMap map = generate_map(11, 32, 32, ObstacleSpec::scaled_for(32, 32));
  int accepted = 0;
  for (int n = 0; n < 2000; ++n) {
    const Point a{rng.uniform(0, 32), rng.uniform(0, 32)};
    const Point b{a.x + rng.uniform(-4, 4), a.y + rng.uniform(-4, 4)};
    if (!map.contains(b)) continue;
    if (segment_clear(map, a, b)) {
      ++accepted;
      CHECK(oracle::segment_free_fine(map, a, b, 0.005));
      CHECK(segment_free(map, a, b, 0.25));
      CHECK(segment_free(map, a, b, 0.125));
    }
  }
  CHECK(accepted > 100);
}

TEST_CASE("generate_map") {
  SUBCASE("deterministic") { CHECK(generate_map(3, 64, 48) == generate_map(3, 64, 48)); }
  SUBCASE("scaled spec works on small maps") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const GridMap m = generate_map(seed, 16, 16, ObstacleSpec::scaled_for(16, 16));
      CHECK(m.density() >= 0.15);
      CHECK(m.density() <= 0.35);
    }
  }
  SUBCASE("zero obstacles") {
    ObstacleSpec s;
    s.min_obstacles = s.max_obstacles = 0;
    s.min_density = 0.0;
    const GridMap m = generate_map(1, 16, 16, s);
    CHECK(m.free_count() == 256);
  }
  SUBCASE("density within bounds") {
    const GridMap m = generate_map(7, 64, 64);
    std::size_t blocked = 0;
    for (auto c : m.cells()) blocked += c;
    const double d = static_cast<double>(blocked) / 4096.0;
    CHECK(d >= 0.15);
    CHECK(d <= 0.35);
  }
  SUBCASE("largest component holds most free space") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const GridMap m = generate_map(seed, 48, 48, ObstacleSpec::scaled_for(48, 48));
      const Components c = free_components(m);
      CHECK(2 * c.sizes[static_cast<std::size_t>(c.largest())] >= m.free_count());
    }
  }
  SUBCASE("impossible spec fails") {
    ObstacleSpec s;
    s.min_density = 0.9;
    s.max_density = 0.95;
    s.max_attempts = 5;
    CHECK_THROWS_AS(generate_map(1, 32, 32, s), GenerationFailed);
  }
}

TEST_CASE("passage maps have one narrow gap per wall") {
  PassageSpec ps;
  ps.walls = 3;
  ps.gap = 2;
  const GridMap m = generate_passage_map(4, 64, 64, ps);
  CHECK(m == generate_passage_map(4, 64, 64, ps));
  const Components c = free_components(m);
  CHECK(c.sizes.size() == 1);
  CHECK_THROWS_AS(generate_passage_map(1, 8, 8, ps), InvalidArgument);
}

TEST_CASE("free_components matches no-corner-cutting reachability") {
  // Two free cells touching only at a corner are separate components.
  const GridMap m = with_blocked(2, 2, {{1, 0}, {0, 1}});
  const Components c = free_components(m);
  CHECK(c.sizes.size() == 2);
  CHECK(c.labels[0] != c.labels[3]);

  const GridMap g = generate_map(21, 20, 20, ObstacleSpec::scaled_for(20, 20));
  const auto all = oracle::grid_all_pairs(g);
  const Components gc = free_components(g);
  for (std::size_t i = 0; i < g.cell_count(); i += 7) {
    for (std::size_t j = 0; j < g.cell_count(); j += 5) {
      if (g.cells()[i] || g.cells()[j]) continue;
      CHECK((gc.labels[i] == gc.labels[j]) == std::isfinite(all[i][j]));
    }
  }
}

TEST_CASE("place_goals") {
  SUBCASE("separation postcondition") {
    const GridMap m = GridMap::empty(32, 32);
    const GoalSet g = place_goals(m, 5, 1, 4.0);
    REQUIRE(g.size() == 5);
    std::set<std::pair<int, int>> cells;
    for (std::size_t i = 0; i < 5; ++i) {
      cells.insert({cell_of(g[i]).x, cell_of(g[i]).y});
      for (std::size_t j = 0; j < i; ++j) CHECK(distance(g[i], g[j]) >= 4.0);
    }
    CHECK(cells.size() == 5);
  }
  SUBCASE("infeasible separation") {
    CHECK_THROWS_AS(place_goals(GridMap::empty(2, 2), 2, 1, 10.0), PlacementFailed);
  }
  SUBCASE("deterministic and in one component") {
    const GridMap m = generate_map(8, 48, 48, ObstacleSpec::scaled_for(48, 48));
    const GoalSet a = place_goals(m, 6, 3, 5.0);
    CHECK(a == place_goals(m, 6, 3, 5.0));
    const Components c = free_components(m);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(c.labels[m.index(cell_of(a[i]))] == c.largest());
  }
}

TEST_CASE("GoalSet invariants") {
  CHECK_THROWS_AS(GoalSet({{1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(GoalSet({{1, 1}, {1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(GoalSet({{1, 1}, {INFINITY, 1}}), InvalidArgument);
  const GoalSet g({{0.5, 0.5}, {2.5, 2.5}});
  CHECK_THROWS_AS(g.check_on(with_blocked(3, 3, {{2, 2}})), InvalidArgument);
  CHECK_NOTHROW(g.check_on(GridMap::empty(3, 3)));
}
