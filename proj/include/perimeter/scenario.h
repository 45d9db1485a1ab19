#ifndef PERIMETER_SCENARIO_H_
#define PERIMETER_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perimeter/env.h"
#include "perimeter/geometry.h"
#include "perimeter/raster.h"

namespace perimeter {

// Cone of congestion: peak at the center pixel, falling linearly to zero at
// `radius` pixels.
struct Blob {
  int center_x = 0;
  int center_y = 0;
  double radius = 1.0;
  int peak = 255;

  friend bool operator==(const Blob&, const Blob&) = default;
};

struct VertexLayout {
  enum class Kind { kGrid, kExplicit };
  Kind kind = Kind::kGrid;
  // Grid: rows x cols lattice spread evenly over the frame minus `margin`.
  int rows = 1;
  int cols = 1;
  int margin = 0;
  // Explicit: vertex i sits at points[i].
  std::vector<Point> points;

  friend bool operator==(const VertexLayout&, const VertexLayout&) = default;
};

struct ScenarioSpec {
  std::string name;
  int width = 1;
  int height = 1;
  std::vector<Blob> blobs;
  // Floor applied to every pixel before blobs (0 leaves free flow untouched).
  int background = 0;
  VertexLayout layout;
  // Fraction of zero-weight pixels raised to weight 1, chosen by `seed`.
  double noise = 0.0;
  std::uint64_t seed = 0;

  // Throws InputError naming every offending field.
  void Validate() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct Scenario {
  std::string name;
  HeatMap heatmap;
  VertexSet vertices;
};

// Cone weight round(peak * max(0, 1 - dist / radius)) at pixel (x, y).
int BlobWeight(const Blob& blob, int x, int y);

Scenario Synth(const ScenarioSpec& spec);

// "core", "fork" and "uniform".
std::vector<ScenarioSpec> BundledScenarios();
std::optional<ScenarioSpec> FindBundledScenario(std::string_view name);

}  // namespace perimeter

#endif  // PERIMETER_SCENARIO_H_
