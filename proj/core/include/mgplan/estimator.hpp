#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgplan/grid_world.hpp"
#include "mgplan/map_io.hpp"
#include "mgplan/weight_matrix.hpp"

namespace mgplan {

// Per-cell promise values in [0,1], same shape as the map it belongs to.
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(int width, int height, std::vector<double> values);

  static RegionMask filled(int width, int height, double value);
  // 1 on free cells, 0 on obstacles.
  static RegionMask free_space(const GridMap& map);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(Cell c) const noexcept {
    return values_[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x)];
  }
  bool matches(const GridMap& map) const noexcept { return width_ == map.width() && height_ == map.height(); }
  bool is_binary() const noexcept;

  // Grayscale round-trip: value -> round(255 v), byte -> byte / 255.
  GrayImage to_image() const;
  static RegionMask from_image(const GrayImage& image);

  friend bool operator==(const RegionMask&, const RegionMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

struct PairEstimate {
  double distance = 0.0;
  RegionMask mask;
};

// Exact cost of a grid walk: straight + diagonal * sqrt(2). Ordering is exact
// (no floating point), so equal-length walks compare equal regardless of step
// order.
struct GridCost {
  std::int64_t straight = 0;
  std::int64_t diagonal = 0;

  double value() const noexcept;

  friend GridCost operator+(GridCost a, GridCost b) noexcept {
    return {a.straight + b.straight, a.diagonal + b.diagonal};
  }
  friend bool operator==(const GridCost&, const GridCost&) = default;
  friend std::strong_ordering operator<=>(const GridCost& a, const GridCost& b) noexcept;
};

struct GridPath {
  std::vector<Cell> cells;  // from cell(a) to cell(b), inclusive
  GridCost cost;
  double length = 0.0;  // cost.value()
};

// Dijkstra over cell centres; 8 neighbours in the order E,N,W,S,NE,NW,SW,SE
// (N is -y), no corner cutting, FIFO among equal costs. Throws Unreachable.
GridPath grid_shortest_path(const GridMap& map, Point a, Point b);

// Free cells whose centre lies within radius of some path cell centre.
RegionMask dilate_path_to_region(const GridMap& map, std::span<const Cell> path, double radius);

// max(width, height) / 32.
double default_dilation_radius(const GridMap& map);

PairEstimate euclidean_estimate(const GridMap& map, Point a, Point b);

enum class EstimatorKind { Euclidean, GridOracle, External };

struct PairId {
  std::size_t i = 0;
  std::size_t j = 0;
};

// Distances and mask files produced outside this library, one directory per
// map: pair_<i>_<j>.pgm (i < j) plus distances.csv with "i,j,distance" rows.
struct ExternalPredictions {
  std::filesystem::path directory;
  std::map<std::pair<std::size_t, std::size_t>, double> distances;
};

class Estimator {
 public:
  static Estimator euclidean();
  // radius <= 0 or absent selects default_dilation_radius(map).
  static Estimator grid_oracle(std::optional<double> dilation_radius = std::nullopt);
  static Estimator external(ExternalPredictions predictions);

  EstimatorKind kind() const noexcept { return kind_; }
  std::string name() const;

  // ids is required for External and ignored otherwise.
  PairEstimate estimate_pair(const GridMap& map, Point a, Point b,
                             std::optional<PairId> ids = std::nullopt) const;

 private:
  EstimatorKind kind_ = EstimatorKind::Euclidean;
  std::optional<double> radius_;
  std::shared_ptr<const ExternalPredictions> external_;
};

// map_id, when nonempty, selects directory / map_id. Throws IoError,
// MissingPrediction (no distances.csv) or FormatError.
ExternalPredictions read_predictions(const std::filesystem::path& directory, const std::string& map_id = {});
Estimator load_external_predictions(const std::filesystem::path& directory, const std::string& map_id = {});

// pair_<i>_<j>.pgm from a prediction directory. Throws MissingPrediction.
RegionMask read_pair_mask(const std::filesystem::path& directory, std::size_t i, std::size_t j);

struct PairEstimates {
  WeightMatrix weights;
  std::vector<RegionMask> masks;  // indexed by pair_index
  std::size_t estimate_calls = 0;

  const RegionMask& mask(std::size_t i, std::size_t j) const {
    return masks[pair_index(i, j, weights.size())];
  }
};

// One estimate per unordered pair, written by pair index, so the result does
// not depend on workers. Throws Unreachable(i, j) for the lowest failing pair.
PairEstimates build_weight_matrix(const GridMap& map, const GoalSet& goals, const Estimator& estimator,
                                  unsigned workers = 1);

// Writes the layout read by load_external_predictions.
void export_predictions(const std::filesystem::path& directory, const PairEstimates& estimates);

}  // namespace mgplan
