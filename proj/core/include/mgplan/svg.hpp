#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "mgplan/estimator.hpp"
#include "mgplan/grid_world.hpp"
#include "mgplan/pipeline.hpp"

namespace mgplan {

inline constexpr double kSvgUnitsPerCell = 4.0;

// Obstacles black on white, masks as a translucent red overlay, goals as
// numbered red circles, one coloured <polyline> per leg.
std::string render_svg(const GridMap& map, const GoalSet* goals, std::span<const RegionMask> masks,
                       const Solution* solution);

void write_svg(const std::filesystem::path& path, const GridMap& map, const GoalSet* goals,
               std::span<const RegionMask> masks, const Solution* solution);

}  // namespace mgplan
