#include "mgplan/map_io.hpp"

#include <fstream>
#include <sstream>

#include "mgplan/errors.hpp"
#include "mgplan/text_util.hpp"

namespace mgplan {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string format_map_text(const GridMap& map) {
  std::string out = std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
  out.reserve(out.size() + map.cell_count() + static_cast<std::size_t>(map.height()));
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out += map.blocked({x, y}) ? '#' : '.';
    out += '\n';
  }
  return out;
}

GridMap parse_map_text(const std::string& text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError(source, 1, "empty map file");
  const auto header = split(trim(lines[0]), ' ');
  long long w = 0, h = 0;
  if (header.size() != 2 || !parse_int(header[0], w) || !parse_int(header[1], h)) {
    throw FormatError(source, 1, "expected \"width height\"");
  }
  if (w < 2 || h < 2 || w > 1 << 15 || h > 1 << 15) {
    throw FormatError(source, 1, "map dimensions out of range");
  }
  if (lines.size() != static_cast<std::size_t>(h) + 1) {
    throw FormatError(source, lines.size() + 1,
                      "expected " + std::to_string(h) + " rows, found " + std::to_string(lines.size() - 1));
  }
  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(w * h));
  for (long long y = 0; y < h; ++y) {
    const auto row = lines[static_cast<std::size_t>(y) + 1];
    const std::size_t line_no = static_cast<std::size_t>(y) + 2;
    if (row.size() != static_cast<std::size_t>(w)) {
      throw FormatError(source, line_no, "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(w));
    }
    for (char c : row) {
      if (c == '.') cells.push_back(0);
      else if (c == '#') cells.push_back(1);
      else throw FormatError(source, line_no, std::string("unexpected character '") + c + "'");
    }
  }
  try {
    return GridMap(static_cast<int>(w), static_cast<int>(h), std::move(cells));
  } catch (const InvalidArgument& e) {
    throw FormatError(source, 0, e.what());
  }
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

GrayImage parse_pgm(const std::string& bytes, const std::string& source) {
  std::size_t pos = 0;
  std::size_t line = 1;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_number = [&](const char* what) {
    skip_space();
    std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') ++pos;
    long long v = 0;
    if (start == pos || !parse_int(std::string_view(bytes).substr(start, pos - start), v)) {
      throw FormatError(source, line, std::string("expected ") + what);
    }
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(source, 1, "not a binary PGM (missing P5 magic)");
  }
  pos = 2;
  const long long w = read_number("width");
  const long long h = read_number("height");
  const long long maxval = read_number("maxval");
  if (w < 1 || h < 1 || w > 1 << 15 || h > 1 << 15) throw FormatError(source, line, "dimensions out of range");
  if (maxval != 255) throw FormatError(source, line, "only maxval 255 is supported");
  if (pos >= bytes.size()) throw FormatError(source, line, "missing pixel data");
  ++pos;  // single whitespace byte after maxval
  const auto n = static_cast<std::size_t>(w * h);
  if (bytes.size() - pos != n) {
    throw FormatError(source, 0,
                      "expected " + std::to_string(n) + " pixel bytes, found " + std::to_string(bytes.size() - pos),
                      pos);
  }
  GrayImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.assign(reinterpret_cast<const std::uint8_t*>(bytes.data() + pos),
                    reinterpret_cast<const std::uint8_t*>(bytes.data() + pos + n));
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  write_file(path, encode_pgm(image));
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path), path.string()); }

void save_map(const std::filesystem::path& path, const GridMap& map, MapFormat format) {
  if (format == MapFormat::Text) {
    write_file(path, format_map_text(map));
    return;
  }
  GrayImage img{map.width(), map.height(), {}};
  img.pixels.reserve(map.cell_count());
  for (std::uint8_t c : map.cells()) img.pixels.push_back(c ? 0 : 255);
  write_pgm(path, img);
}

GridMap load_map(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    const GrayImage img = parse_pgm(bytes, path.string());
    std::vector<std::uint8_t> cells;
    cells.reserve(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const std::uint8_t v = img.pixels[i];
      if (v != 0 && v != 255) {
        throw FormatError(path.string(), 0, "occupancy PGM pixels must be 0 or 255", i);
      }
      cells.push_back(v == 0 ? 1 : 0);
    }
    try {
      return GridMap(img.width, img.height, std::move(cells));
    } catch (const InvalidArgument& e) {
      throw FormatError(path.string(), 0, e.what());
    }
  }
  return parse_map_text(bytes, path.string());
}

std::string format_goals(const GoalSet& goals) {
  std::string out;
  for (const Point& p : goals.points()) out += format_double(p.x) + "," + format_double(p.y) + "\n";
  return out;
}

GoalSet parse_goals(const std::string& text, const std::string& source) {
  std::vector<Point> pts;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    Point p;
    if (fields.size() != 2 || !parse_double(fields[0], p.x) || !parse_double(fields[1], p.y)) {
      throw FormatError(source, i + 1, "expected \"x,y\"");
    }
    pts.push_back(p);
  }
  try {
    return GoalSet(std::move(pts));
  } catch (const InvalidArgument& e) {
    throw FormatError(source, 0, e.what());
  }
}

void save_goals(const std::filesystem::path& path, const GoalSet& goals) { write_file(path, format_goals(goals)); }

GoalSet load_goals(const std::filesystem::path& path) { return parse_goals(read_file(path), path.string()); }

}  // namespace mgplan
