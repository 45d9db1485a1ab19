#ifndef PERIMETER_RASTER_H_
#define PERIMETER_RASTER_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace perimeter {

// Congestion field. One integer level in [0, 255] per pixel, row-major.
// Level 0 means free flow and is what the lambda penalty counts.
class HeatMap {
 public:
  HeatMap(int width, int height, std::vector<std::uint8_t> weights);
  // Constant-valued map.
  HeatMap(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> weights() const { return weights_; }

  // Throws BoundsError outside the frame.
  std::uint8_t WeightAt(int x, int y) const;
  std::uint8_t operator()(int x, int y) const { return weights_[y * width_ + x]; }

  friend bool operator==(const HeatMap&, const HeatMap&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> weights_;
};

using Rgb = std::array<std::uint8_t, 3>;

struct PaletteEntry {
  Rgb color;
  std::uint8_t weight;
};

// green -> 0, orange -> 96, red -> 176, dark red -> 255.
std::vector<PaletteEntry> DefaultPalette();

// Throws InputError unless the palette is nonempty, has pairwise distinct
// colors and contains a weight-0 entry.
void ValidatePalette(std::span<const PaletteEntry> palette);

// Index of the entry nearest to `color` in squared RGB distance, lowest
// index on ties.
std::size_t NearestPaletteEntry(const Rgb& color,
                                std::span<const PaletteEntry> palette);

// Decodes binary PGM (P5, maxval 255) or 8-bit grayscale PNG.
HeatMap LoadGrayscale(std::span<const std::uint8_t> bytes);

// Decodes binary PPM (P6, maxval 255) or 8-bit RGB PNG and classifies
// every pixel against the palette.
HeatMap LoadRgb(std::span<const std::uint8_t> bytes,
                std::span<const PaletteEntry> palette);

// Grayscale images load as-is; RGB images are classified against `palette`.
HeatMap LoadHeatMap(std::span<const std::uint8_t> bytes,
                    std::span<const PaletteEntry> palette);

// Interleaved 8-bit RGB image, used for overlays.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel, row-major

  void Set(int x, int y, const Rgb& c);
};

std::vector<std::uint8_t> EncodePgm(const HeatMap& map);
std::vector<std::uint8_t> EncodePpm(const RgbImage& image);
std::vector<std::uint8_t> EncodePngGray(const HeatMap& map);
std::vector<std::uint8_t> EncodePngRgb(const RgbImage& image);

}  // namespace perimeter

#endif  // PERIMETER_RASTER_H_
