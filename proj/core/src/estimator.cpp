#include "mgplan/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <queue>
#include <thread>

#include "mgplan/errors.hpp"
#include "mgplan/text_util.hpp"

namespace mgplan {

RegionMask::RegionMask(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1 ||
      values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionMismatch("mask values do not match " + std::to_string(width) + "x" + std::to_string(height));
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("mask value outside [0,1]");
  }
}

RegionMask RegionMask::filled(int width, int height, double value) {
  return RegionMask(width, height,
                    std::vector<double>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value));
}

RegionMask RegionMask::free_space(const GridMap& map) {
  std::vector<double> v(map.cell_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = map.cells()[i] ? 0.0 : 1.0;
  return RegionMask(map.width(), map.height(), std::move(v));
}

bool RegionMask::is_binary() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

GrayImage RegionMask::to_image() const {
  GrayImage img{width_, height_, {}};
  img.pixels.reserve(values_.size());
  for (double v : values_) img.pixels.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  return img;
}

RegionMask RegionMask::from_image(const GrayImage& image) {
  std::vector<double> v;
  v.reserve(image.pixels.size());
  for (std::uint8_t p : image.pixels) v.push_back(static_cast<double>(p) / 255.0);
  return RegionMask(image.width, image.height, std::move(v));
}

double GridCost::value() const noexcept {
  return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
}

std::strong_ordering operator<=>(const GridCost& a, const GridCost& b) noexcept {
  // sign of x + y*sqrt(2) for integers x, y
  const std::int64_t x = a.straight - b.straight;
  const std::int64_t y = a.diagonal - b.diagonal;
  if (x == 0 && y == 0) return std::strong_ordering::equal;
  if (x >= 0 && y >= 0) return std::strong_ordering::greater;
  if (x <= 0 && y <= 0) return std::strong_ordering::less;
  // Step counts are below 2^30 for any loadable map, so these fit.
  const std::int64_t xx = x * x;
  const std::int64_t yy2 = 2 * y * y;
  if (x > 0) return xx > yy2 ? std::strong_ordering::greater : std::strong_ordering::less;
  return yy2 > xx ? std::strong_ordering::greater : std::strong_ordering::less;
}

namespace {

struct Step {
  int dx, dy;
  bool diagonal;
};

// E, N, W, S, NE, NW, SW, SE with N = -y.
constexpr Step kSteps[8] = {{1, 0, false},  {0, -1, false}, {-1, 0, false}, {0, 1, false},
                            {1, -1, true},  {-1, -1, true}, {-1, 1, true},  {1, 1, true}};

struct QueueEntry {
  GridCost cost;
  std::uint64_t seq;
  std::size_t cell;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.seq > b.seq;
  }
};

}  // namespace

GridPath grid_shortest_path(const GridMap& map, Point a, Point b) {
  if (!map.contains(a) || !map.contains(b)) throw OutOfBounds("path endpoint outside the map");
  const Cell src = cell_of(a);
  const Cell dst = cell_of(b);
  if (map.blocked(src) || map.blocked(dst)) throw InvalidArgument("path endpoint lies in an obstacle");

  const std::size_t n = map.cell_count();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<GridCost> best(n);
  std::vector<char> reached(n, 0), done(n, 0);
  std::vector<std::size_t> parent(n, kNone);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
  std::uint64_t seq = 0;

  const std::size_t s = map.index(src);
  const std::size_t t = map.index(dst);
  reached[s] = 1;
  open.push({GridCost{}, seq++, s});
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (done[top.cell]) continue;
    done[top.cell] = 1;
    if (top.cell == t) break;
    const Cell c = map.cell_at(top.cell);
    for (const Step& st : kSteps) {
      const Cell nb{c.x + st.dx, c.y + st.dy};
      if (!map.contains(nb) || map.blocked(nb)) continue;
      if (st.diagonal && (map.blocked({c.x + st.dx, c.y}) || map.blocked({c.x, c.y + st.dy}))) continue;
      const std::size_t ni = map.index(nb);
      if (done[ni]) continue;
      const GridCost cand = top.cost + (st.diagonal ? GridCost{0, 1} : GridCost{1, 0});
      if (!reached[ni] || cand < best[ni]) {
        reached[ni] = 1;
        best[ni] = cand;
        parent[ni] = top.cell;
        open.push({cand, seq++, ni});
      }
    }
  }
  if (!done[t]) throw Unreachable("no grid path between the requested cells");

  GridPath path;
  for (std::size_t at = t; at != kNone; at = parent[at]) path.cells.push_back(map.cell_at(at));
  std::reverse(path.cells.begin(), path.cells.end());
  path.cost = best[t];
  path.length = path.cost.value();
  return path;
}

RegionMask dilate_path_to_region(const GridMap& map, std::span<const Cell> path, double radius) {
  if (path.empty()) throw InvalidArgument("cannot dilate an empty path");
  if (!(radius >= 0.0)) throw InvalidArgument("dilation radius must be nonnegative");
  std::vector<double> v(map.cell_count(), 0.0);
  const int r = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (const Cell& c : path) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const Cell q{c.x + dx, c.y + dy};
        if (!map.contains(q) || map.blocked(q)) continue;
        if (static_cast<double>(dx * dx + dy * dy) <= r2) v[map.index(q)] = 1.0;
      }
    }
  }
  return RegionMask(map.width(), map.height(), std::move(v));
}

double default_dilation_radius(const GridMap& map) {
  return static_cast<double>(std::max(map.width(), map.height())) / 32.0;
}

PairEstimate euclidean_estimate(const GridMap& map, Point a, Point b) {
  return {distance(a, b), RegionMask::free_space(map)};
}

Estimator Estimator::euclidean() { return Estimator{}; }

Estimator Estimator::grid_oracle(std::optional<double> dilation_radius) {
  Estimator e;
  e.kind_ = EstimatorKind::GridOracle;
  if (dilation_radius && *dilation_radius > 0.0) e.radius_ = dilation_radius;
  return e;
}

Estimator Estimator::external(ExternalPredictions predictions) {
  Estimator e;
  e.kind_ = EstimatorKind::External;
  e.external_ = std::make_shared<const ExternalPredictions>(std::move(predictions));
  return e;
}

std::string Estimator::name() const {
  switch (kind_) {
    case EstimatorKind::Euclidean: return "euclidean";
    case EstimatorKind::GridOracle: return "oracle";
    case EstimatorKind::External: return "external:" + external_->directory.string();
  }
  return "unknown";
}

namespace {

std::filesystem::path mask_file(const std::filesystem::path& dir, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return dir / ("pair_" + std::to_string(i) + "_" + std::to_string(j) + ".pgm");
}

}  // namespace

PairEstimate Estimator::estimate_pair(const GridMap& map, Point a, Point b, std::optional<PairId> ids) const {
  switch (kind_) {
    case EstimatorKind::Euclidean:
      return euclidean_estimate(map, a, b);
    case EstimatorKind::GridOracle: {
      const GridPath path = grid_shortest_path(map, a, b);
      const double r = radius_.value_or(default_dilation_radius(map));
      return {path.length, dilate_path_to_region(map, path.cells, r)};
    }
    case EstimatorKind::External: {
      if (!ids) throw InvalidArgument("external estimates need the goal pair indices");
      const std::size_t i = std::min(ids->i, ids->j), j = std::max(ids->i, ids->j);
      const auto it = external_->distances.find({i, j});
      if (it == external_->distances.end()) throw MissingPrediction(i, j, "no row in distances.csv");
      const auto file = mask_file(external_->directory, i, j);
      if (!std::filesystem::exists(file)) throw MissingPrediction(i, j, file.filename().string() + " not found");
      const GrayImage img = read_pgm(file);
      if (img.width != map.width() || img.height != map.height()) {
        throw DimensionMismatch(file.string() + " is " + std::to_string(img.width) + "x" +
                                std::to_string(img.height) + ", map is " + std::to_string(map.width()) + "x" +
                                std::to_string(map.height()));
      }
      return {it->second, RegionMask::from_image(img)};
    }
  }
  throw InvalidArgument("unknown estimator kind");
}

RegionMask read_pair_mask(const std::filesystem::path& directory, std::size_t i, std::size_t j) {
  const auto file = mask_file(directory, i, j);
  if (!std::filesystem::exists(file)) throw MissingPrediction(i, j, file.filename().string() + " not found");
  return RegionMask::from_image(read_pgm(file));
}

Estimator load_external_predictions(const std::filesystem::path& directory, const std::string& map_id) {
  return Estimator::external(read_predictions(directory, map_id));
}

ExternalPredictions read_predictions(const std::filesystem::path& directory, const std::string& map_id) {
  const auto dir = map_id.empty() ? directory : directory / map_id;
  if (!std::filesystem::is_directory(dir)) throw IoError("prediction directory not found: " + dir.string());
  const auto csv_path = dir / "distances.csv";
  if (!std::filesystem::exists(csv_path)) throw MissingPrediction(0, 0, "distances.csv not found in " + dir.string());
  ExternalPredictions preds;
  preds.directory = dir;
  const std::string text = read_file(csv_path);
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto fields = split(lines[n], ',');
    long long i = 0, j = 0;
    double d = 0.0;
    if (fields.size() != 3 || !parse_int(fields[0], i) || !parse_int(fields[1], j) || !parse_double(fields[2], d)) {
      throw FormatError(csv_path.string(), n + 1, "expected \"i,j,distance\"");
    }
    if (i < 0 || j < 0 || i == j || d < 0.0) throw FormatError(csv_path.string(), n + 1, "invalid pair row");
    const auto lo = static_cast<std::size_t>(std::min(i, j));
    const auto hi = static_cast<std::size_t>(std::max(i, j));
    if (!preds.distances.emplace(std::pair{lo, hi}, d).second) {
      throw FormatError(csv_path.string(), n + 1, "duplicate pair");
    }
  }
  return preds;
}

PairEstimates build_weight_matrix(const GridMap& map, const GoalSet& goals, const Estimator& estimator,
                                  unsigned workers) {
  goals.check_on(map);
  const std::size_t m = goals.size();
  const std::size_t n = pair_count(m);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  std::vector<std::optional<PairEstimate>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> calls{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      const auto [i, j] = pairs[k];
      try {
        calls.fetch_add(1, std::memory_order_relaxed);
        results[k] = estimator.estimate_pair(map, goals[i], goals[j], PairId{i, j});
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  PairEstimates out;
  out.weights = WeightMatrix(m);
  out.masks.reserve(n);
  out.estimate_calls = calls.load();
  for (std::size_t k = 0; k < n; ++k) {
    const auto [i, j] = pairs[k];
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const Unreachable&) {
        throw Unreachable(i, j);
      }
    }
    PairEstimate& e = *results[k];
    if (!std::isfinite(e.distance) || !(e.distance > 0.0)) {
      throw InvalidMatrix("estimated distance for pair (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is not positive and finite");
    }
    if (!e.mask.matches(map)) throw DimensionMismatch("mask shape differs from the map");
    out.weights.set_symmetric(i, j, e.distance);
    out.masks.push_back(std::move(e.mask));
  }
  return out;
}

void export_predictions(const std::filesystem::path& directory, const PairEstimates& estimates) {
  std::filesystem::create_directories(directory);
  const std::size_t m = estimates.weights.size();
  std::string csv;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      write_pgm(mask_file(directory, i, j), estimates.mask(i, j).to_image());
      csv += std::to_string(i) + "," + std::to_string(j) + "," + format_double(estimates.weights(i, j)) + "\n";
    }
  }
  write_file(directory / "distances.csv", csv);
}

}  // namespace mgplan
