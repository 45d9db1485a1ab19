#ifndef PERIMETER_IO_H_
#define PERIMETER_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perimeter/env.h"
#include "perimeter/raster.h"
#include "perimeter/scenario.h"

namespace perimeter {

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);
void WriteFileText(const std::filesystem::path& path, std::string_view text);

// Vertex file: one "id,x,y" record per line. Blank lines, '#' comments and
// an "id,x,y" header line are ignored; commas and whitespace both separate.
VertexSet ParseVertexFile(std::string_view text);
std::string FormatVertexFile(const VertexSet& vertices);

// Flat "key = value" lines with '#' comments. Keys may repeat; order kept.
std::vector<std::pair<std::string, std::string>> ParseKeyValues(std::string_view text);

// Scenario spec in key-value form:
//   name = fork
//   width = 48
//   height = 48
//   background = 0
//   blob = 23 23 7 255        # center_x center_y radius peak, repeatable
//   grid = 4 4 4              # rows cols margin
//   vertex = 10 12            # explicit vertex, repeatable (replaces grid)
//   noise = 0.05
//   seed = 3
ScenarioSpec ParseScenarioSpec(std::string_view text);
std::string FormatScenarioSpec(const ScenarioSpec& spec);

// Palette line "r g b weight".
PaletteEntry ParsePaletteEntry(std::string_view text);

// Heat map rendered in gray with the hull ring in red, selected vertices in
// yellow and the remaining candidates in blue, all at full intensity.
RgbImage RenderOverlay(const HeatMap& map, const VertexSet& vertices,
                       const GameState& selected, const Hull& hull);

}  // namespace perimeter

#endif  // PERIMETER_IO_H_
