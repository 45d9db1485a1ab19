#include "perimeter/raster.h"

#include <algorithm>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "perimeter/errors.h"

namespace perimeter {
namespace {

std::vector<std::uint8_t> Pgm(int w, int h, std::vector<std::uint8_t> pixels) {
  const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  return bytes;
}

std::vector<std::uint8_t> Ppm(int w, int h, std::vector<std::uint8_t> pixels) {
  const std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  return bytes;
}

template <typename Fn>
std::string ErrorOf(Fn&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(RasterTest, LoadsGrayscaleExamples) {
  const HeatMap black = LoadGrayscale(Pgm(2, 2, {0, 0, 0, 0}));
  EXPECT_EQ(black.weights().size(), 4u);
  for (auto w : black.weights()) EXPECT_EQ(w, 0);

  const HeatMap one = LoadGrayscale(Pgm(1, 1, {255}));
  EXPECT_EQ(one.width(), 1);
  EXPECT_EQ(one(0, 0), 255);

  const HeatMap row = LoadGrayscale(Pgm(3, 1, {0, 128, 255}));
  EXPECT_EQ(row.width(), 3);
  EXPECT_EQ(row.height(), 1);
  EXPECT_EQ(std::vector<std::uint8_t>(row.weights().begin(), row.weights().end()),
            (std::vector<std::uint8_t>{0, 128, 255}));
  EXPECT_EQ(row.WeightAt(0, 0), 0);
  EXPECT_EQ(row.WeightAt(2, 0), 255);
}

TEST(RasterTest, WeightAtOutsideFrameCarriesCoordinates) {
  const HeatMap row(3, 1, {0, 128, 255});
  try {
    row.WeightAt(3, 0);
    FAIL() << "expected BoundsError";
  } catch (const BoundsError& e) {
    EXPECT_EQ(e.x(), 3);
    EXPECT_EQ(e.y(), 0);
    EXPECT_EQ(e.width(), 3);
    EXPECT_EQ(e.height(), 1);
  }
  EXPECT_THROW(row.WeightAt(-1, 0), BoundsError);
  EXPECT_THROW(row.WeightAt(0, 1), BoundsError);
}

TEST(RasterTest, RejectsInvalidDimensions) {
  EXPECT_THROW(HeatMap(0, 3, std::vector<std::uint8_t>{}), InputError);
  EXPECT_THROW(HeatMap(2, 2, std::vector<std::uint8_t>{1, 2, 3}), InputError);
}

TEST(RasterTest, DefaultPaletteClassification) {
  const auto palette = DefaultPalette();
  auto weight_of = [&](Rgb c) { return palette[NearestPaletteEntry(c, palette)].weight; };
  EXPECT_EQ(weight_of({99, 214, 104}), 0);
  EXPECT_EQ(weight_of({129, 31, 31}), 255);
  EXPECT_EQ(weight_of({130, 32, 30}), 255);
}

TEST(RasterTest, NearPaletteColorMatchesHandDistances) {
  // Squared distances from (130,32,30) to each default entry, by hand:
  // green 31^2+182^2+74^2, orange 125^2+119^2+47^2, red 112^2+28^2+20^2,
  // dark red 1^2+1^2+1^2.
  const int expected[] = {31 * 31 + 182 * 182 + 74 * 74, 125 * 125 + 119 * 119 + 47 * 47,
                          112 * 112 + 28 * 28 + 20 * 20, 3};
  const auto palette = DefaultPalette();
  ASSERT_EQ(palette.size(), 4u);
  const Rgb probe = {130, 32, 30};
  for (std::size_t i = 0; i < palette.size(); ++i) {
    int d = 0;
    for (int k = 0; k < 3; ++k) {
      const int diff = probe[k] - palette[i].color[k];
      d += diff * diff;
    }
    EXPECT_EQ(d, expected[i]);
  }
  EXPECT_EQ(NearestPaletteEntry(probe, palette), 3u);
}

TEST(RasterTest, LoadRgbClassifiesEveryPixel) {
  const HeatMap map =
      LoadRgb(Ppm(3, 1, {99, 214, 104, 129, 31, 31, 250, 150, 80}), DefaultPalette());
  EXPECT_EQ(map(0, 0), 0);
  EXPECT_EQ(map(1, 0), 255);
  EXPECT_EQ(map(2, 0), 96);
}

TEST(RasterTest, EquidistantColorTakesLowestIndex) {
  const std::vector<PaletteEntry> palette = {{{0, 0, 0}, 0}, {{2, 0, 0}, 9}};
  EXPECT_EQ(NearestPaletteEntry({1, 0, 0}, palette), 0u);
  const std::vector<PaletteEntry> swapped = {palette[1], palette[0]};
  EXPECT_EQ(NearestPaletteEntry({1, 0, 0}, swapped), 0u);
}

TEST(RasterTest, SingleEntryPaletteMapsEverythingToItsWeight) {
  std::mt19937_64 rng(11);
  std::vector<std::uint8_t> pixels(5 * 4 * 3);
  for (auto& p : pixels) p = static_cast<std::uint8_t>(rng());
  const std::vector<PaletteEntry> palette = {{{10, 20, 30}, 0}};
  const HeatMap map = LoadRgb(Ppm(5, 4, pixels), palette);
  for (auto w : map.weights()) EXPECT_EQ(w, 0);
}

TEST(RasterTest, PalettePermutationChangesOnlyTiedPixels) {
  std::mt19937_64 rng(5);
  std::vector<PaletteEntry> palette = {{{0, 0, 0}, 0},     {{200, 0, 0}, 50},
                                       {{0, 200, 0}, 100}, {{0, 0, 200}, 150},
                                       {{100, 100, 100}, 200}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PaletteEntry> permuted = palette;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    for (int i = 0; i < 2000; ++i) {
      // Coarse channels make exact ties common.
      const Rgb c = {static_cast<std::uint8_t>(rng() % 5 * 50),
                     static_cast<std::uint8_t>(rng() % 5 * 50),
                     static_cast<std::uint8_t>(rng() % 5 * 50)};
      const auto a = palette[NearestPaletteEntry(c, palette)].weight;
      const auto b = permuted[NearestPaletteEntry(c, permuted)].weight;
      if (a == b) continue;
      int best = 1 << 30, ties = 0;
      for (const auto& e : palette) {
        int d = 0;
        for (int k = 0; k < 3; ++k) d += (c[k] - e.color[k]) * (c[k] - e.color[k]);
        if (d < best) {
          best = d;
          ties = 1;
        } else if (d == best) {
          ++ties;
        }
      }
      EXPECT_GT(ties, 1) << "non-tied pixel changed class";
    }
  }
}

TEST(RasterTest, PaletteValidation) {
  EXPECT_THROW(ValidatePalette({}), InputError);
  const std::vector<PaletteEntry> no_zero = {{{1, 2, 3}, 5}};
  EXPECT_THROW(ValidatePalette(no_zero), InputError);
  const std::vector<PaletteEntry> dup = {{{1, 2, 3}, 0}, {{1, 2, 3}, 5}};
  EXPECT_THROW(ValidatePalette(dup), InputError);
  EXPECT_NO_THROW(ValidatePalette(DefaultPalette()));
  EXPECT_THROW(LoadRgb(Ppm(1, 1, {0, 0, 0}), {}), InputError);
}

TEST(RasterTest, PgmAndPngRoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 40), h = 1 + static_cast<int>(rng() % 40);
    std::vector<std::uint8_t> weights(static_cast<std::size_t>(w) * h);
    for (auto& v : weights) v = static_cast<std::uint8_t>(rng());
    const HeatMap map(w, h, weights);
    EXPECT_EQ(LoadGrayscale(EncodePgm(map)), map);
    EXPECT_EQ(LoadGrayscale(EncodePngGray(map)), map);
    EXPECT_EQ(LoadHeatMap(EncodePngGray(map), DefaultPalette()), map);
  }
}

TEST(RasterTest, RgbPngClassifies) {
  RgbImage image{2, 1, std::vector<std::uint8_t>(6)};
  image.Set(0, 0, {99, 214, 104});
  image.Set(1, 0, {242, 60, 50});
  const HeatMap map = LoadRgb(EncodePngRgb(image), DefaultPalette());
  EXPECT_EQ(map(0, 0), 0);
  EXPECT_EQ(map(1, 0), 176);
  EXPECT_EQ(LoadHeatMap(EncodePpm(image), DefaultPalette()), map);
}

TEST(RasterTest, ChannelCountErrors) {
  RgbImage image{1, 1, {1, 2, 3}};
  EXPECT_NE(ErrorOf([&] { LoadGrayscale(EncodePpm(image)); }).find("channel"),
            std::string::npos);
  EXPECT_NE(ErrorOf([&] { LoadGrayscale(EncodePngRgb(image)); }).find("channel"),
            std::string::npos);
  const HeatMap gray(1, 1, 7);
  EXPECT_NE(ErrorOf([&] { LoadRgb(EncodePgm(gray), DefaultPalette()); }).find("3-channel"),
            std::string::npos);
}

TEST(RasterTest, MalformedImagesNameTheProblem) {
  EXPECT_NE(ErrorOf([] { LoadGrayscale(std::vector<std::uint8_t>{'x', 'y'}); }).find("byte offset"),
            std::string::npos);
  auto truncated = Pgm(2, 2, {1, 2, 3});
  EXPECT_NE(ErrorOf([&] { LoadGrayscale(truncated); }).find("truncated"), std::string::npos);
  const std::string bad_width = "P5\n2x 2\n255\n";
  EXPECT_NE(ErrorOf([&] {
              LoadGrayscale(std::vector<std::uint8_t>(bad_width.begin(), bad_width.end()));
            }).find("byte offset"),
            std::string::npos);
  const std::string wide = "P5\n1 1\n65535\n\0\0";
  EXPECT_FALSE(
      ErrorOf([&] { LoadGrayscale(std::vector<std::uint8_t>(wide.begin(), wide.end())); })
          .empty());
  auto png = EncodePngGray(HeatMap(4, 4, 9));
  png.resize(png.size() / 2);
  EXPECT_FALSE(ErrorOf([&] { LoadGrayscale(png); }).empty());
}

TEST(RasterTest, PgmHeaderCommentsAreSkipped) {
  const std::string text = "P5\n# made by hand\n2 1\n255\n";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  bytes.push_back(4);
  bytes.push_back(200);
  const HeatMap map = LoadGrayscale(bytes);
  EXPECT_EQ(map(0, 0), 4);
  EXPECT_EQ(map(1, 0), 200);
}

}  // namespace
}  // namespace perimeter
