#include "mgplan/svg.hpp"

#include <cstdio>

#include "mgplan/errors.hpp"
#include "mgplan/map_io.hpp"

namespace mgplan {

namespace {

constexpr const char* kLegColors[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                      "#17becf", "#8c564b", "#e377c2", "#bcbd22"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

void cell_rect(std::string& out, int x, int y, int w, const char* attrs) {
  const double s = kSvgUnitsPerCell;
  out += "<rect x=\"" + num(x * s) + "\" y=\"" + num(y * s) + "\" width=\"" + num(w * s) + "\" height=\"" + num(s) +
         "\" " + attrs + "/>\n";
}

}  // namespace

std::string render_svg(const GridMap& map, const GoalSet* goals, std::span<const RegionMask> masks,
                       const Solution* solution) {
  const double s = kSvgUnitsPerCell;
  const std::string w = num(map.width() * s);
  const std::string h = num(map.height() * s);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
         " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"white\"/>\n";

  out += "<g id=\"obstacles\" fill=\"black\">\n";
  for (int y = 0; y < map.height(); ++y) {
    int x = 0;
    while (x < map.width()) {
      if (!map.blocked({x, y})) {
        ++x;
        continue;
      }
      int run = 1;
      while (x + run < map.width() && map.blocked({x + run, y})) ++run;
      cell_rect(out, x, y, run, "");
      x += run;
    }
  }
  out += "</g>\n";

  if (!masks.empty()) {
    out += "<g id=\"masks\" fill=\"red\">\n";
    for (const RegionMask& mask : masks) {
      if (!mask.matches(map)) throw DimensionMismatch("mask shape differs from the map");
      for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
          const double v = mask.at({x, y});
          if (v <= 0.0) continue;
          const std::string attr = "fill-opacity=\"" + num(0.35 * v) + "\"";
          cell_rect(out, x, y, 1, attr.c_str());
        }
      }
    }
    out += "</g>\n";
  }

  if (solution) {
    out += "<g id=\"legs\" fill=\"none\" stroke-width=\"1.5\" stroke-linejoin=\"round\">\n";
    for (std::size_t k = 0; k < solution->legs.size(); ++k) {
      out += "<polyline stroke=\"" + std::string(kLegColors[k % std::size(kLegColors)]) + "\" points=\"";
      bool first = true;
      for (const Point& p : solution->legs[k].points) {
        if (!first) out += ' ';
        out += num(p.x * s) + "," + num(p.y * s);
        first = false;
      }
      out += "\"/>\n";
    }
    out += "</g>\n";
  }

  if (goals) {
    out += "<g id=\"goals\">\n";
    for (std::size_t i = 0; i < goals->size(); ++i) {
      const Point p = (*goals)[i];
      out += "<circle cx=\"" + num(p.x * s) + "\" cy=\"" + num(p.y * s) + "\" r=\"4\" fill=\"red\"/>\n";
      out += "<text x=\"" + num(p.x * s + 5) + "\" y=\"" + num(p.y * s - 5) +
             "\" font-size=\"10\" font-family=\"sans-serif\" fill=\"red\">" + std::to_string(i) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::filesystem::path& path, const GridMap& map, const GoalSet* goals,
               std::span<const RegionMask> masks, const Solution* solution) {
  write_file(path, render_svg(map, goals, masks, solution));
}

}  // namespace mgplan
