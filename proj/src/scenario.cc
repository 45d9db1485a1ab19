#include "perimeter/scenario.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perimeter/agent.h"
#include "perimeter/errors.h"

namespace perimeter {
namespace {

std::vector<int> GridCoordinates(int count, int extent, int margin) {
  std::vector<int> coords;
  if (count == 1) {
    coords.push_back(extent / 2);
    return coords;
  }
  const int span = extent - 2 * margin;
  for (int i = 0; i < count; ++i) coords.push_back(margin + i * span / (count - 1));
  return coords;
}

}  // namespace

void ScenarioSpec::Validate() const {
  std::vector<std::string> problems;
  auto complain = [&](std::string field, std::string why) {
    problems.push_back(std::move(field) + " " + std::move(why));
  };
  if (width < 1) complain("width", "must be >= 1");
  if (height < 1) complain("height", "must be >= 1");
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const Blob& b = blobs[i];
    const std::string field = "blobs[" + std::to_string(i) + "]";
    if (b.center_x < 0 || b.center_x >= width || b.center_y < 0 || b.center_y >= height) {
      complain(field + ".center", "lies outside the frame");
    }
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) complain(field + ".radius", "must be positive");
    if (b.peak < 1 || b.peak > 255) complain(field + ".peak", "must lie in [1, 255]");
  }
  if (background < 0 || background > 255) complain("background", "must lie in [0, 255]");
  if (layout.kind == VertexLayout::Kind::kGrid) {
    if (layout.rows < 1) complain("layout.rows", "must be >= 1");
    if (layout.cols < 1) complain("layout.cols", "must be >= 1");
    if (layout.margin < 0 || 2 * layout.margin > width || 2 * layout.margin > height) {
      complain("layout.margin", "must lie in [0, min(width, height) / 2]");
    }
  } else {
    for (std::size_t i = 0; i < layout.points.size(); ++i) {
      const Point& p = layout.points[i];
      if (p.x < 0 || p.y < 0 || p.x > width || p.y > height) {
        complain("layout.points[" + std::to_string(i) + "]", "lies outside the frame");
      }
    }
  }
  if (!(noise >= 0.0 && noise < 1.0)) complain("noise", "must lie in [0, 1)");
  if (problems.empty()) return;
  std::ostringstream message;
  message << "invalid scenario '" << name << "':";
  for (const auto& p : problems) message << ' ' << p << ';';
  throw InputError(message.str());
}

int BlobWeight(const Blob& blob, int x, int y) {
  const double dist = std::hypot(static_cast<double>(x - blob.center_x),
                                 static_cast<double>(y - blob.center_y));
  const double level = blob.peak * std::max(0.0, 1.0 - dist / blob.radius);
  return static_cast<int>(std::lround(level));
}

Scenario Synth(const ScenarioSpec& spec) {
  spec.Validate();
  std::vector<std::uint8_t> weights(static_cast<std::size_t>(spec.width) * spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      int w = spec.background;
      for (const Blob& blob : spec.blobs) w = std::max(w, BlobWeight(blob, x, y));
      weights[static_cast<std::size_t>(y) * spec.width + x] = static_cast<std::uint8_t>(w);
    }
  }
  if (spec.noise > 0.0) {
    Rng rng(spec.seed);
    for (auto& w : weights) {
      if (w == 0 && UnitInterval(rng) < spec.noise) w = 1;
    }
  }
  std::vector<Vertex> vertices;
  if (spec.layout.kind == VertexLayout::Kind::kGrid) {
    const auto xs = GridCoordinates(spec.layout.cols, spec.width, spec.layout.margin);
    const auto ys = GridCoordinates(spec.layout.rows, spec.height, spec.layout.margin);
    for (int y : ys) {
      for (int x : xs) vertices.push_back({static_cast<int>(vertices.size()), x, y});
    }
  } else {
    for (const Point& p : spec.layout.points) {
      vertices.push_back({static_cast<int>(vertices.size()), static_cast<int>(p.x),
                          static_cast<int>(p.y)});
    }
  }
  return {spec.name, HeatMap(spec.width, spec.height, std::move(weights)),
          VertexSet(std::move(vertices))};
}

std::vector<ScenarioSpec> BundledScenarios() {
  std::vector<ScenarioSpec> specs;

  ScenarioSpec core;
  core.name = "core";
  core.width = 32;
  core.height = 32;
  core.blobs = {{16, 16, 10.0, 255}};
  core.layout = {VertexLayout::Kind::kGrid, 3, 3, 6, {}};
  specs.push_back(core);

  // A congested core plus a small detached fork toward the lower right.
  ScenarioSpec fork;
  fork.name = "fork";
  fork.width = 48;
  fork.height = 48;
  fork.blobs = {{23, 23, 7.0, 255}, {39, 39, 3.0, 96}};
  fork.layout = {VertexLayout::Kind::kGrid, 4, 4, 4, {}};
  specs.push_back(fork);

  ScenarioSpec uniform;
  uniform.name = "uniform";
  uniform.width = 16;
  uniform.height = 16;
  uniform.background = 1;
  uniform.layout = {VertexLayout::Kind::kGrid, 3, 3, 0, {}};
  specs.push_back(uniform);

  return specs;
}

std::optional<ScenarioSpec> FindBundledScenario(std::string_view name) {
  for (auto& spec : BundledScenarios()) {
    if (spec.name == name) return spec;
  }
  return std::nullopt;
}

}  // namespace perimeter
