#include "mgplan/dataset.hpp"

#include <json.hpp>

#include "mgplan/errors.hpp"
#include "mgplan/estimator.hpp"
#include "mgplan/map_io.hpp"
#include "mgplan/rng.hpp"
#include "mgplan/text_util.hpp"

namespace mgplan {

namespace {

std::string sample_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%05d", i);
  return buf;
}

}  // namespace

DatasetManifest generate_dataset(int n_maps, std::uint64_t seed, const std::filesystem::path& out_dir,
                                 const DatasetSpec& spec) {
  if (n_maps < 1) throw InvalidArgument("n_maps must be at least 1");
  std::filesystem::create_directories(out_dir);

  DatasetManifest manifest;
  for (int i = 0; i < n_maps; ++i) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(i)});
    const GridMap map = generate_map(s, spec.width, spec.height, spec.obstacles);
    std::optional<GoalSet> goals;
    std::optional<GridPath> path;
    for (std::uint64_t attempt = 0; !path; ++attempt) {
      if (attempt >= 100) throw GenerationFailed("no connected goal pair for " + sample_id(i));
      goals.emplace(place_goals(map, 2, derive_seed(s, {attempt}), spec.min_separation));
      try {
        path = grid_shortest_path(map, (*goals)[0], (*goals)[1]);
      } catch (const Unreachable&) {
        goals.reset();
      }
    }
    const double radius = spec.dilation_radius.value_or(default_dilation_radius(map));
    const RegionMask label = dilate_path_to_region(map, path->cells, radius);

    const auto dir = out_dir / sample_id(i);
    std::filesystem::create_directories(dir);
    save_map(dir / "map.txt", map);
    save_goals(dir / "goals.csv", *goals);
    write_pgm(dir / "pair_0_1.pgm", label.to_image());
    write_file(dir / "distances.csv", "0,1," + format_double(path->length) + "\n");
    manifest.samples.push_back({sample_id(i), {}, path->length});
  }

  std::vector<std::size_t> perm(static_cast<std::size_t>(n_maps));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(derive_seed(seed, {0x53504c4954}));  // "SPLIT"
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const std::size_t n = perm.size();
  manifest.train = n * 6 / 10;
  manifest.val = n * 2 / 10;
  manifest.test = n - manifest.train - manifest.val;
  for (std::size_t r = 0; r < n; ++r) {
    manifest.samples[perm[r]].split = r < manifest.train ? "train" : r < manifest.train + manifest.val ? "val" : "test";
  }

  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["splits"] = {{"train", manifest.train}, {"val", manifest.val}, {"test", manifest.test}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& smp : manifest.samples) {
    arr.push_back({{"id", smp.id}, {"split", smp.split}, {"distance", smp.distance}});
  }
  j["samples"] = arr;
  write_file(out_dir / "manifest.json", j.dump(2) + "\n");
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& out_dir) {
  const auto path = out_dir / "manifest.json";
  DatasetManifest m;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& s : j.at("samples")) {
      m.samples.push_back({s.at("id").get<std::string>(), s.at("split").get<std::string>(),
                           s.at("distance").get<double>()});
    }
    m.train = j.at("splits").at("train").get<std::size_t>();
    m.val = j.at("splits").at("val").get<std::size_t>();
    m.test = j.at("splits").at("test").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string(), 0, e.what());
  }
  return m;
}

std::string validate_dataset_sample(const std::filesystem::path& dir) {
  const GridMap map = load_map(dir / "map.txt");
  const GoalSet goals = load_goals(dir / "goals.csv");
  if (goals.size() != 2) return "sample must hold exactly two goals";
  const Estimator stored = load_external_predictions(dir);
  const PairEstimate label = stored.estimate_pair(map, goals[0], goals[1], PairId{0, 1});
  if (!label.mask.is_binary()) return "label mask is not binary";
  GridPath path;
  try {
    path = grid_shortest_path(map, goals[0], goals[1]);
  } catch (const Unreachable&) {
    return "goals are not connected";
  }
  for (const Cell& c : path.cells) {
    if (label.mask.at(c) != 1.0) return "label mask misses path cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  }
  if (label.distance != path.length) return "stored distance differs from the oracle length";
  return {};
}

}  // namespace mgplan
