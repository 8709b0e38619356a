#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mgplan/grid_world.hpp"

namespace mgplan {

enum class MapFormat { Text, Pgm };

// Text: "width height" then height rows of '.' (free) / '#' (obstacle).
// Pgm: binary P5, 0 = obstacle, 255 = free.
void save_map(const std::filesystem::path& path, const GridMap& map, MapFormat format = MapFormat::Text);

// Detects the format from the leading bytes.
GridMap load_map(const std::filesystem::path& path);

std::string format_map_text(const GridMap& map);
GridMap parse_map_text(const std::string& text, const std::string& source = "<map>");

// One "x,y" pair per line; goal index = line number - 1.
void save_goals(const std::filesystem::path& path, const GoalSet& goals);
GoalSet load_goals(const std::filesystem::path& path);
GoalSet parse_goals(const std::string& text, const std::string& source = "<goals>");
std::string format_goals(const GoalSet& goals);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 first

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes, const std::string& source = "<pgm>");
std::string encode_pgm(const GrayImage& image);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace mgplan
