#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mgplan/errors.hpp"
#include "mgplan/svg.hpp"

using namespace mgplan;

namespace {

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t p = text.find(what); p != std::string::npos; p = text.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("map only") {
  const GridMap map(10, 6, std::vector<std::uint8_t>(60, 0));
  const std::string svg = render_svg(map, nullptr, {}, nullptr);
  CHECK(svg.find("width=\"40\"") != std::string::npos);
  CHECK(svg.find("height=\"24\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 0);
  CHECK(svg.find("id=\"masks\"") == std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("obstacles are drawn black") {
  std::vector<std::uint8_t> cells(16, 0);
  cells[5] = 1;
  const std::string svg = render_svg(GridMap(4, 4, cells), nullptr, {}, nullptr);
  const auto group = svg.find("id=\"obstacles\" fill=\"black\"");
  REQUIRE(group != std::string::npos);
  CHECK(svg.find("<rect x=\"4\" y=\"4\"", group) != std::string::npos);
}

TEST_CASE("solution legs and goals") {
  const GridMap map = GridMap::empty(32, 32);
  const GoalSet goals({{4.5, 4.5}, {26.5, 4.5}, {15.5, 26.5}, {4.5, 20.5}});
  PipelineOptions opt;
  opt.planner = PlannerConfig::defaults_for(map);
  const Solution sol = run_pipeline(map, goals, Estimator::grid_oracle(), opt);
  const std::string svg = render_svg(map, &goals, {}, &sol);
  CHECK(count(svg, "<polyline") == 4);
  CHECK(count(svg, "<circle") == 4);
  CHECK(svg.find("id=\"masks\"") == std::string::npos);

  const std::vector<RegionMask> masks{RegionMask::filled(32, 32, 1.0)};
  const std::string with_masks = render_svg(map, &goals, masks, &sol);
  CHECK(with_masks.find("id=\"masks\"") != std::string::npos);
}

TEST_CASE("write_svg") {
  const auto path = std::filesystem::temp_directory_path() / "mgplan_test_svg.svg";
  const GridMap map = GridMap::empty(8, 8);
  write_svg(path, map, nullptr, {}, nullptr);
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  CHECK(s.str() == render_svg(map, nullptr, {}, nullptr));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_svg("/nonexistent-dir/x.svg", map, nullptr, {}, nullptr), IoError);
}

TEST_CASE("mask shape must match") {
  const GridMap map = GridMap::empty(8, 8);
  const std::vector<RegionMask> masks{RegionMask::filled(4, 4, 1.0)};
  CHECK_THROWS(render_svg(map, nullptr, masks, nullptr));
}
