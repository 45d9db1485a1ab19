#include "perimeter/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "perimeter/errors.h"

namespace perimeter {
namespace {

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string_view StripComment(std::string_view line) {
  return line.substr(0, line.find('#'));
}

std::vector<std::string_view> SplitFields(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t,", pos);
    if (start == std::string_view::npos) break;
    const auto end = s.find_first_of(" \t,", start);
    fields.push_back(s.substr(start, end == std::string_view::npos ? end : end - start));
    pos = end == std::string_view::npos ? s.size() : end;
  }
  return fields;
}

template <typename T>
T ParseNumber(std::string_view field, std::string_view context) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InputError("invalid number '" + std::string(field) + "' in " +
                     std::string(context));
  }
  return value;
}

template <typename T>
std::vector<T> ParseNumbers(std::string_view value, std::size_t count,
                            std::string_view key) {
  const auto fields = SplitFields(value);
  if (fields.size() != count) {
    throw InputError("'" + std::string(key) + "' expects " + std::to_string(count) +
                     " numbers, got '" + std::string(value) + "'");
  }
  std::vector<T> out;
  for (auto f : fields) out.push_back(ParseNumber<T>(f, key));
  return out;
}

void DrawLine(RgbImage& image, Point a, Point b, const Rgb& color) {
  auto clamp_point = [&](Point p) {
    return Point{std::clamp<std::int64_t>(p.x, 0, image.width - 1),
                 std::clamp<std::int64_t>(p.y, 0, image.height - 1)};
  };
  a = clamp_point(a);
  b = clamp_point(b);
  const std::int64_t dx = std::abs(b.x - a.x);
  const std::int64_t dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  std::int64_t err = dx + dy;
  while (true) {
    image.Set(static_cast<int>(a.x), static_cast<int>(a.y), color);
    if (a == b) break;
    const std::int64_t e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      a.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      a.y += sy;
    }
  }
}

void DrawMarker(RgbImage& image, const Vertex& v, int radius, const Rgb& color) {
  const int cx = std::min(v.x, image.width - 1);
  const int cy = std::min(v.y, image.height - 1);
  for (int y = cy - radius; y <= cy + radius; ++y) {
    for (int x = cx - radius; x <= cx + radius; ++x) image.Set(x, y, color);
  }
}

}  // namespace

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("cannot write '" + path.string() + "'");
}

void WriteFileText(const std::filesystem::path& path, std::string_view text) {
  WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                 text.size()));
}

VertexSet ParseVertexFile(std::string_view text) {
  std::vector<Vertex> vertices;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    const auto body = Trim(StripComment(line));
    if (body.empty()) continue;
    const auto fields = SplitFields(body);
    if (fields.size() == 3 && fields[0] == "id" && fields[1] == "x" && fields[2] == "y") {
      continue;
    }
    const std::string context = "vertex file line " + std::to_string(line_number);
    if (fields.size() != 3) {
      throw InputError(context + ": expected 'id, x, y', got '" + std::string(body) + "'");
    }
    vertices.push_back({ParseNumber<int>(fields[0], context),
                        ParseNumber<int>(fields[1], context),
                        ParseNumber<int>(fields[2], context)});
  }
  return VertexSet(std::move(vertices));
}

std::string FormatVertexFile(const VertexSet& vertices) {
  std::string out = "id,x,y\n";
  for (const Vertex& v : vertices.all()) {
    out += std::to_string(v.id) + "," + std::to_string(v.x) + "," + std::to_string(v.y) + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ParseKeyValues(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    const auto body = Trim(StripComment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_number) +
                       ": expected 'key = value', got '" + std::string(body) + "'");
    }
    pairs.emplace_back(std::string(Trim(body.substr(0, eq))),
                       std::string(Trim(body.substr(eq + 1))));
  }
  return pairs;
}

ScenarioSpec ParseScenarioSpec(std::string_view text) {
  ScenarioSpec spec;
  bool explicit_vertices = false;
  for (const auto& [key, value] : ParseKeyValues(text)) {
    if (key == "name") {
      spec.name = value;
    } else if (key == "width") {
      spec.width = ParseNumber<int>(value, key);
    } else if (key == "height") {
      spec.height = ParseNumber<int>(value, key);
    } else if (key == "background") {
      spec.background = ParseNumber<int>(value, key);
    } else if (key == "blob") {
      const auto f = SplitFields(value);
      if (f.size() != 4) throw InputError("'blob' expects 'center_x center_y radius peak'");
      spec.blobs.push_back({ParseNumber<int>(f[0], key), ParseNumber<int>(f[1], key),
                            ParseNumber<double>(f[2], key), ParseNumber<int>(f[3], key)});
    } else if (key == "grid") {
      const auto g = ParseNumbers<int>(value, 3, key);
      spec.layout.kind = VertexLayout::Kind::kGrid;
      spec.layout.rows = g[0];
      spec.layout.cols = g[1];
      spec.layout.margin = g[2];
    } else if (key == "vertex") {
      const auto p = ParseNumbers<std::int64_t>(value, 2, key);
      explicit_vertices = true;
      spec.layout.points.push_back({p[0], p[1]});
    } else if (key == "noise") {
      spec.noise = ParseNumber<double>(value, key);
    } else if (key == "seed") {
      spec.seed = ParseNumber<std::uint64_t>(value, key);
    } else {
      throw InputError("unknown scenario key '" + key + "'");
    }
  }
  if (explicit_vertices) spec.layout.kind = VertexLayout::Kind::kExplicit;
  spec.Validate();
  return spec;
}

std::string FormatScenarioSpec(const ScenarioSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "name = " << spec.name << "\nwidth = " << spec.width
      << "\nheight = " << spec.height << "\nbackground = " << spec.background << '\n';
  for (const Blob& b : spec.blobs) {
    out << "blob = " << b.center_x << ' ' << b.center_y << ' ' << b.radius << ' '
        << b.peak << '\n';
  }
  if (spec.layout.kind == VertexLayout::Kind::kGrid) {
    out << "grid = " << spec.layout.rows << ' ' << spec.layout.cols << ' '
        << spec.layout.margin << '\n';
  } else {
    for (const Point& p : spec.layout.points) out << "vertex = " << p.x << ' ' << p.y << '\n';
  }
  out << "noise = " << spec.noise << "\nseed = " << spec.seed << '\n';
  return out.str();
}

PaletteEntry ParsePaletteEntry(std::string_view text) {
  const auto v = ParseNumbers<int>(text, 4, "palette");
  for (int c : v) {
    if (c < 0 || c > 255) {
      throw InputError("palette values must lie in [0, 255]: '" + std::string(text) + "'");
    }
  }
  return {{static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
           static_cast<std::uint8_t>(v[2])},
          static_cast<std::uint8_t>(v[3])};
}

RgbImage RenderOverlay(const HeatMap& map, const VertexSet& vertices,
                       const GameState& selected, const Hull& hull) {
  RgbImage image{map.width(), map.height(),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(map.width()) *
                                           map.height() * 3)};
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      // Keep the backdrop below full intensity so burned-in marks stand out.
      const auto level = static_cast<std::uint8_t>(map(x, y) * 3 / 4);
      image.Set(x, y, {level, level, level});
    }
  }
  constexpr Rgb kEdge = {255, 0, 0};
  constexpr Rgb kSelected = {255, 255, 0};
  constexpr Rgb kCandidate = {0, 0, 255};
  for (const Vertex& v : vertices.all()) {
    if (!selected.Contains(v.id)) DrawMarker(image, v, 0, kCandidate);
  }
  const auto& ring = hull.vertices;
  // A two-point degenerate hull is drawn as one segment, a proper hull closed.
  const std::size_t segments = ring.size() > 2 ? ring.size() : (ring.size() == 2 ? 1 : 0);
  for (std::size_t i = 0; i < segments; ++i) {
    DrawLine(image, ring[i], ring[(i + 1) % ring.size()], kEdge);
  }
  for (int id : selected.ids()) DrawMarker(image, vertices[id], 1, kSelected);
  return image;
}

}  // namespace perimeter
