#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mgplan/errors.hpp"
#include "mgplan/estimator.hpp"
#include "mgplan/map_io.hpp"
#include "mgplan/text_util.hpp"
#include "support/oracles.hpp"

using namespace mgplan;
namespace fs = std::filesystem;

namespace {

GridMap wall_with_gap() {
  // 8x8, wall at x = 4 with a single gap at y = 6.
  std::vector<std::uint8_t> cells(64, 0);
  for (int y = 0; y < 8; ++y)
    if (y != 6) cells[static_cast<std::size_t>(y * 8 + 4)] = 1;
  return GridMap(8, 8, cells);
}

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mgplan_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("euclidean_estimate") {
  const GridMap m = GridMap::empty(8, 8);
  CHECK(euclidean_estimate(m, {0, 0}, {3, 4}).distance == 5.0);
  CHECK(euclidean_estimate(m, {1, 1}, {1, 1}).distance == 0.0);
  CHECK(euclidean_estimate(m, {1, 1}, {4, 5}).distance == 5.0);
  const RegionMask mask = euclidean_estimate(m, {0, 0}, {3, 4}).mask;
  CHECK(mask == RegionMask::free_space(m));
}

TEST_CASE("grid_shortest_path examples") {
  const GridPath diag = grid_shortest_path(GridMap::empty(3, 3), {0.5, 0.5}, {2.5, 2.5});
  CHECK(diag.length == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(diag.cells.size() == 3);

  std::vector<std::uint8_t> c(9, 0);
  c[4] = 1;
  const GridMap center(3, 3, c);
  const GridPath around = grid_shortest_path(center, {0.5, 0.5}, {2.5, 2.5});
  CHECK(around.length == 4.0);
  CHECK(oracle::grid_all_pairs(center)[0][8] == 4.0);

  std::vector<std::uint8_t> wall(16, 0);
  for (int y = 0; y < 4; ++y) wall[static_cast<std::size_t>(y * 4 + 2)] = 1;
  CHECK_THROWS_AS(grid_shortest_path(GridMap(4, 4, wall), {0.5, 0.5}, {3.5, 3.5}), Unreachable);
  CHECK_THROWS_AS(grid_shortest_path(GridMap(4, 4, wall), {2.5, 0.5}, {3.5, 3.5}), InvalidArgument);
  CHECK_THROWS_AS(grid_shortest_path(GridMap(4, 4, wall), {0.5, 0.5}, {4.5, 3.5}), OutOfBounds);
}

TEST_CASE("grid_shortest_path agrees with an exhaustive oracle on small maps") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GridMap m = generate_map(seed, 12, 12, ObstacleSpec::scaled_for(12, 12));
    const auto all = oracle::grid_all_pairs(m);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      if (m.cells()[i]) continue;
      std::vector<char> reached;
      const auto exact = oracle::grid_exact_from(m, m.cell_at(i), reached);
      for (std::size_t j = 0; j < m.cell_count(); j += 3) {
        if (m.cells()[j]) continue;
        const Point a = cell_center(m.cell_at(i)), b = cell_center(m.cell_at(j));
        if (!std::isfinite(all[i][j])) {
          CHECK_THROWS_AS(grid_shortest_path(m, a, b), Unreachable);
          continue;
        }
        const GridPath p = grid_shortest_path(m, a, b);
        CHECK(p.length == doctest::Approx(all[i][j]).epsilon(1e-12));
        CHECK(p.cost == exact[j]);
        // The returned cells form a valid walk of that cost.
        GridCost walk;
        for (std::size_t k = 1; k < p.cells.size(); ++k) {
          const int dx = std::abs(p.cells[k].x - p.cells[k - 1].x), dy = std::abs(p.cells[k].y - p.cells[k - 1].y);
          REQUIRE(std::max(dx, dy) == 1);
          CHECK(m.free(p.cells[k]));
          if (dx && dy) {
            CHECK(m.free({p.cells[k].x, p.cells[k - 1].y}));
            CHECK(m.free({p.cells[k - 1].x, p.cells[k].y}));
          }
          walk = walk + GridCost{dx && dy ? 0 : 1, dx && dy ? 1 : 0};
        }
        CHECK(walk == p.cost);
      }
    }
  }
}

TEST_CASE("grid distance is a metric") {
  const GridMap m = generate_map(31, 14, 14, ObstacleSpec::scaled_for(14, 14));
  const auto d = oracle::grid_all_pairs(m);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < m.cell_count(); i += 5)
    if (!m.cells()[i] && std::isfinite(d[i][m.cell_count() / 2]) ) pts.push_back(cell_center(m.cell_at(i)));
  auto dist = [&](Point a, Point b) { return grid_shortest_path(m, a, b).length; };
  for (std::size_t i = 0; i < pts.size(); i += 2)
    for (std::size_t j = 0; j < pts.size(); j += 3) {
      if (!std::isfinite(d[m.index(cell_of(pts[i]))][m.index(cell_of(pts[j]))])) continue;
      CHECK(dist(pts[i], pts[j]) == dist(pts[j], pts[i]));
      CHECK(dist(pts[i], pts[j]) >= distance(pts[i], pts[j]) - 1e-12);
    }
}

TEST_CASE("GridCost ordering is exact") {
  CHECK(GridCost{3, 0} < GridCost{0, 3});      // 3 < 4.24
  CHECK(GridCost{2, 0} > GridCost{0, 1});      // 2 > 1.41
  CHECK(GridCost{7, 0} < GridCost{2, 4});      // 7 < 7.657
  CHECK(GridCost{1, 2} == GridCost{1, 2});
  CHECK((GridCost{0, 5} <=> GridCost{7, 0}) == std::strong_ordering::greater);  // 7.07 > 7
  CHECK(GridCost{2, 3}.value() == doctest::Approx(2 + 3 * std::sqrt(2.0)));
}

TEST_CASE("dilate_path_to_region") {
  const GridMap m = GridMap::empty(11, 11);
  const std::vector<Cell> one{{5, 5}};
  const RegionMask r = dilate_path_to_region(m, one, 1.5);
  int count = 0;
  for (double v : r.values()) count += v == 1.0;
  int expected = 0;
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) expected += std::hypot(x - 5, y - 5) <= 1.5;
  CHECK(expected == 9);
  CHECK(count == expected);

  const GridPath p = grid_shortest_path(wall_with_gap(), {0.5, 0.5}, {7.5, 0.5});
  const RegionMask zero = dilate_path_to_region(wall_with_gap(), p.cells, 0.0);
  std::size_t ones = 0;
  for (double v : zero.values()) ones += v == 1.0;
  CHECK(ones == p.cells.size());
  for (Cell c : p.cells) CHECK(zero.at(c) == 1.0);

  const RegionMask all = dilate_path_to_region(wall_with_gap(), p.cells, 100.0);
  CHECK(all == RegionMask::free_space(wall_with_gap()));
  CHECK(default_dilation_radius(GridMap::empty(64, 32)) == 2.0);
}

TEST_CASE("estimators on the same pair") {
  const GridMap m = GridMap::empty(3, 3);
  const PairEstimate o = Estimator::grid_oracle().estimate_pair(m, {0.5, 0.5}, {2.5, 2.5});
  CHECK(o.distance == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(o.mask.at({0, 0}) == 1.0);
  CHECK(o.mask.at({2, 2}) == 1.0);
  const PairEstimate e = Estimator::euclidean().estimate_pair(m, {0.5, 0.5}, {2.5, 2.5});
  CHECK(e.distance == doctest::Approx(2.0 * std::sqrt(2.0)));

  const GridMap w = wall_with_gap();
  const Point a{1.5, 1.5}, b{6.5, 1.5};
  const PairEstimate detour = Estimator::grid_oracle().estimate_pair(w, a, b);
  CHECK(detour.distance > distance(a, b));
  CHECK(detour.distance ==
        doctest::Approx(oracle::grid_all_pairs(w)[w.index(cell_of(a))][w.index(cell_of(b))]).epsilon(1e-12));
  CHECK(Estimator::euclidean().name() == "euclidean");
  CHECK(Estimator::grid_oracle().name() == "oracle");
}

TEST_CASE("build_weight_matrix") {
  SUBCASE("euclidean on an empty map") {
    const GridMap m = GridMap::empty(10, 10);
    const GoalSet g({{1, 1}, {4, 5}, {9, 1}});
    const PairEstimates e = build_weight_matrix(m, g, Estimator::euclidean());
    CHECK(e.weights(0, 1) == 5.0);
    CHECK(e.weights(0, 2) == 8.0);
    CHECK(e.weights(1, 2) == distance(g[1], g[2]));
    CHECK(e.estimate_calls == 3);
    CHECK_NOTHROW(e.weights.validate());
  }
  SUBCASE("oracle dominates straight lines and is symmetric") {
    const GridMap m = generate_map(3, 32, 32, ObstacleSpec::scaled_for(32, 32));
    const GoalSet g = place_goals(m, 4, 9, 4.0);
    const PairEstimates e = build_weight_matrix(m, g, Estimator::grid_oracle());
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(e.weights(i, j) == e.weights(j, i));
        if (i != j) CHECK(e.weights(i, j) >= distance(cell_center(cell_of(g[i])), cell_center(cell_of(g[j]))) - 1e-12);
      }
    CHECK(e.masks.size() == 6);
  }
  SUBCASE("worker count does not change the result") {
    const GridMap m = generate_map(4, 48, 48, ObstacleSpec::scaled_for(48, 48));
    const GoalSet g = place_goals(m, 6, 2, 4.0);
    const PairEstimates one = build_weight_matrix(m, g, Estimator::grid_oracle(), 1);
    const PairEstimates four = build_weight_matrix(m, g, Estimator::grid_oracle(), 4);
    CHECK(one.weights == four.weights);
    CHECK(one.masks == four.masks);
  }
  SUBCASE("unreachable pair is named") {
    std::vector<std::uint8_t> c(16, 0);
    for (int y = 0; y < 4; ++y) c[static_cast<std::size_t>(y * 4 + 2)] = 1;
    const GridMap m(4, 4, c);
    const GoalSet g({{0.5, 0.5}, {1.5, 3.5}, {3.5, 3.5}});
    try {
      build_weight_matrix(m, g, Estimator::grid_oracle());
      FAIL("expected Unreachable");
    } catch (const Unreachable& e) {
      CHECK(e.first() == 0);
      CHECK(e.second() == 2);
    }
  }
}

TEST_CASE("external predictions") {
  const fs::path dir = tmp_dir("external");
  const GridMap m = generate_map(6, 32, 32, ObstacleSpec::scaled_for(32, 32));
  const GoalSet g = place_goals(m, 4, 1, 4.0);
  const PairEstimates oracle_est = build_weight_matrix(m, g, Estimator::grid_oracle());
  export_predictions(dir, oracle_est);

  SUBCASE("round trip") {
    const PairEstimates back = build_weight_matrix(m, g, load_external_predictions(dir));
    CHECK(back.weights == oracle_est.weights);
    for (std::size_t k = 0; k < back.masks.size(); ++k) {
      const auto a = back.masks[k].values(), b = oracle_est.masks[k].values();
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1.0 / 255.0);
    }
  }
  SUBCASE("missing pair file") {
    fs::remove(dir / "pair_1_3.pgm");
    try {
      build_weight_matrix(m, g, load_external_predictions(dir));
      FAIL("expected MissingPrediction");
    } catch (const MissingPrediction& e) {
      CHECK(e.first() == 1);
      CHECK(e.second() == 3);
    }
  }
  SUBCASE("wrong mask size") {
    write_pgm(dir / "pair_0_1.pgm", GrayImage{4, 4, std::vector<std::uint8_t>(16, 255)});
    CHECK_THROWS_AS(build_weight_matrix(m, g, load_external_predictions(dir)), DimensionMismatch);
  }
  SUBCASE("malformed distances") {
    write_file(dir / "distances.csv", "0,1,2.5\n0;2;3\n");
    CHECK_THROWS_AS(load_external_predictions(dir), FormatError);
  }
  SUBCASE("needs pair ids") {
    CHECK_THROWS_AS(load_external_predictions(dir).estimate_pair(m, g[0], g[1]), InvalidArgument);
  }
  CHECK_THROWS_AS(load_external_predictions(dir / "nope"), IoError);
}

TEST_CASE("RegionMask") {
  CHECK_THROWS_AS(RegionMask(2, 2, {0, 0, 0}), DimensionMismatch);
  CHECK_THROWS_AS(RegionMask(1, 2, {0, 1.5}), InvalidArgument);
  const RegionMask r(2, 1, {0.2, 1.0});
  CHECK_FALSE(r.is_binary());
  const GrayImage img = r.to_image();
  CHECK(img.pixels[0] == 51);
  CHECK(img.pixels[1] == 255);
  CHECK(RegionMask::from_image(img).values()[0] == doctest::Approx(0.2));
}
