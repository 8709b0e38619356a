#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mgplan/grid_world.hpp"

namespace mgplan {

struct DatasetSpec {
  int width = 64;
  int height = 64;
  ObstacleSpec obstacles;
  double min_separation = 8.0;
  std::optional<double> dilation_radius;  // default_dilation_radius(map) when absent
};

struct DatasetSample {
  std::string id;
  std::string split;  // train, val or test
  double distance = 0.0;
};

struct DatasetManifest {
  std::vector<DatasetSample> samples;
  std::size_t train = 0, val = 0, test = 0;
};

// Two-goal samples with label masks dilated from the optimal grid path:
//   out_dir/manifest.json
//   out_dir/<id>/{map.txt, goals.csv, pair_0_1.pgm, distances.csv}
// Each sample directory doubles as a prediction directory for pair (0,1).
// Splits are 6:2:2 after a seeded shuffle.
DatasetManifest generate_dataset(int n_maps, std::uint64_t seed, const std::filesystem::path& out_dir,
                                 const DatasetSpec& spec = {});

// Empty when the sample's mask covers every cell of the optimal path and the
// stored distance equals the oracle length exactly.
std::string validate_dataset_sample(const std::filesystem::path& sample_dir);

DatasetManifest load_manifest(const std::filesystem::path& out_dir);

}  // namespace mgplan
