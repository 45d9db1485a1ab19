#include "perimeter/raster.h"

#include <png.h>

#include <cctype>
#include <csetjmp>
#include <cstring>
#include <limits>
#include <string>

#include "perimeter/errors.h"

namespace perimeter {
namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                       '\r', '\n', 0x1a, '\n'};

bool IsPng(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kPngSignature.size() &&
         std::memcmp(bytes.data(), kPngSignature.data(),
                     kPngSignature.size()) == 0;
}

// Minimal netpbm header reader for P5/P6 with maxval 255.
class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  struct Header {
    char kind;  // '5' or '6'
    int width;
    int height;
    std::size_t data_offset;
  };

  Header ReadHeader() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' ||
        (bytes_[1] != '5' && bytes_[1] != '6')) {
      throw InputError("unrecognized image format at byte offset 0");
    }
    Header h{};
    h.kind = static_cast<char>(bytes_[1]);
    pos_ = 2;
    h.width = ReadNumber("width");
    h.height = ReadNumber("height");
    const int maxval = ReadNumber("maxval");
    if (maxval != 255) {
      throw InputError("unsupported maxval " + std::to_string(maxval) +
                       " (only 8-bit images are accepted)");
    }
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw InputError("missing whitespace after header at byte offset " +
                       std::to_string(pos_));
    }
    h.data_offset = pos_ + 1;
    return h;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int ReadNumber(const char* what) {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) break;
      ++pos_;
    }
    if (pos_ == start || value <= 0 || value > std::numeric_limits<int>::max()) {
      throw InputError(std::string("invalid ") + what + " at byte offset " +
                       std::to_string(start));
    }
    return static_cast<int>(value);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct DecodedImage {
  int width;
  int height;
  int channels;
  std::vector<std::uint8_t> pixels;
};

DecodedImage DecodePnm(std::span<const std::uint8_t> bytes) {
  PnmReader reader(bytes);
  const auto header = reader.ReadHeader();
  const int channels = header.kind == '5' ? 1 : 3;
  const std::size_t need = static_cast<std::size_t>(header.width) *
                           header.height * channels;
  if (bytes.size() - header.data_offset < need) {
    throw InputError("truncated pixel data: expected " + std::to_string(need) +
                     " bytes at byte offset " +
                     std::to_string(header.data_offset) + ", found " +
                     std::to_string(bytes.size() - header.data_offset));
  }
  const auto* begin = bytes.data() + header.data_offset;
  return {header.width, header.height, channels,
          std::vector<std::uint8_t>(begin, begin + need)};
}

struct PngMemoryReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void PngReadCallback(png_structp png, png_bytep out, png_size_t length) {
  auto* reader = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (reader->bytes.size() - reader->pos < length) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, reader->bytes.data() + reader->pos, length);
  reader->pos += length;
}

void PngErrorCallback(png_structp png, png_const_charp message) {
  auto* buffer = static_cast<std::string*>(png_get_error_ptr(png));
  if (buffer != nullptr) *buffer = message;
  png_longjmp(png, 1);
}

void PngWarningCallback(png_structp, png_const_charp) {}

DecodedImage DecodePng(std::span<const std::uint8_t> bytes) {
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           PngErrorCallback, PngWarningCallback);
  if (png == nullptr) throw InputError("cannot allocate PNG decoder");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw InputError("cannot allocate PNG decoder");
  }
  PngMemoryReader reader{bytes, 0};
  DecodedImage image{0, 0, 0, {}};
  std::vector<png_bytep> rows;
  std::string failure;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("PNG decode error at byte offset " +
                     std::to_string(reader.pos) + ": " + error);
  }
  png_set_read_fn(png, &reader, PngReadCallback);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8) {
    failure = "unsupported PNG bit depth " + std::to_string(bit_depth) +
              " (only 8-bit images are accepted)";
  } else if (color_type == PNG_COLOR_TYPE_GRAY) {
    image.channels = 1;
  } else if (color_type == PNG_COLOR_TYPE_RGB) {
    image.channels = 3;
  } else {
    failure = "unsupported PNG color type " + std::to_string(color_type) +
              " with " + std::to_string(png_get_channels(png, info)) +
              " channels";
  }
  if (failure.empty()) {
    image.width = static_cast<int>(png_get_image_width(png, info));
    image.height = static_cast<int>(png_get_image_height(png, info));
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    const std::size_t stride =
        static_cast<std::size_t>(image.width) * image.channels;
    image.pixels.resize(stride * image.height);
    rows.resize(image.height);
    for (int y = 0; y < image.height; ++y) rows[y] = image.pixels.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!failure.empty()) throw InputError(failure);
  return image;
}

DecodedImage Decode(std::span<const std::uint8_t> bytes) {
  return IsPng(bytes) ? DecodePng(bytes) : DecodePnm(bytes);
}

struct PngMemoryWriter {
  std::vector<std::uint8_t> bytes;
};

void PngWriteCallback(png_structp png, png_bytep data, png_size_t length) {
  auto* writer = static_cast<PngMemoryWriter*>(png_get_io_ptr(png));
  writer->bytes.insert(writer->bytes.end(), data, data + length);
}

void PngFlushCallback(png_structp) {}

std::vector<std::uint8_t> EncodePng(int width, int height, int channels,
                                    std::span<const std::uint8_t> pixels) {
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            PngErrorCallback, PngWarningCallback);
  if (png == nullptr) throw InvariantError("cannot allocate PNG encoder");
  png_infop info = png_create_info_struct(png);
  PngMemoryWriter writer;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw InvariantError("PNG encode error: " + error);
  }
  png_set_write_fn(png, &writer, PngWriteCallback, PngFlushCallback);
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(writer.bytes);
}

std::vector<std::uint8_t> PnmBytes(char kind, int width, int height,
                                   std::span<const std::uint8_t> pixels) {
  const std::string header = std::string("P") + kind + "\n" +
                             std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

}  // namespace

HeatMap::HeatMap(int width, int height, std::vector<std::uint8_t> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
  if (width < 1 || height < 1) {
    throw InputError("heat map dimensions must be positive, got " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
  if (weights_.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("heat map has " + std::to_string(weights_.size()) +
                     " weights for a " + std::to_string(width) + "x" +
                     std::to_string(height) + " frame");
  }
}

HeatMap::HeatMap(int width, int height, std::uint8_t fill)
    : HeatMap(width, height,
              std::vector<std::uint8_t>(
                  static_cast<std::size_t>(std::max(width, 0)) *
                      std::max(height, 0),
                  fill)) {}

std::uint8_t HeatMap::WeightAt(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw BoundsError(x, y, width_, height_);
  }
  return (*this)(x, y);
}

std::vector<PaletteEntry> DefaultPalette() {
  return {{{99, 214, 104}, 0},
          {{255, 151, 77}, 96},
          {{242, 60, 50}, 176},
          {{129, 31, 31}, 255}};
}

void ValidatePalette(std::span<const PaletteEntry> palette) {
  if (palette.empty()) throw InputError("palette is empty");
  bool has_free_flow = false;
  for (std::size_t i = 0; i < palette.size(); ++i) {
    has_free_flow |= palette[i].weight == 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (palette[i].color == palette[j].color) {
        throw InputError("palette entries " + std::to_string(j) + " and " +
                         std::to_string(i) + " share a color");
      }
    }
  }
  if (!has_free_flow) throw InputError("palette has no weight-0 entry");
}

std::size_t NearestPaletteEntry(const Rgb& color,
                                std::span<const PaletteEntry> palette) {
  std::size_t best = 0;
  int best_distance = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < palette.size(); ++i) {
    int distance = 0;
    for (int c = 0; c < 3; ++c) {
      const int d = int{color[c]} - int{palette[i].color[c]};
      distance += d * d;
    }
    if (distance < best_distance) {
      best_distance = distance;
      best = i;
    }
  }
  return best;
}

HeatMap LoadGrayscale(std::span<const std::uint8_t> bytes) {
  DecodedImage image = Decode(bytes);
  if (image.channels != 1) {
    throw InputError("expected a single-channel image, got " +
                     std::to_string(image.channels) + " channels");
  }
  return HeatMap(image.width, image.height, std::move(image.pixels));
}

namespace {

HeatMap Classify(const DecodedImage& image, std::span<const PaletteEntry> palette) {
  if (palette.empty()) throw InputError("palette is empty");
  if (image.channels != 3) {
    throw InputError("expected a 3-channel RGB image, got " +
                     std::to_string(image.channels) + " channels");
  }
  std::vector<std::uint8_t> weights(static_cast<std::size_t>(image.width) *
                                    image.height);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Rgb color = {image.pixels[3 * i], image.pixels[3 * i + 1],
                       image.pixels[3 * i + 2]};
    weights[i] = palette[NearestPaletteEntry(color, palette)].weight;
  }
  return HeatMap(image.width, image.height, std::move(weights));
}

}  // namespace

HeatMap LoadRgb(std::span<const std::uint8_t> bytes,
                std::span<const PaletteEntry> palette) {
  if (palette.empty()) throw InputError("palette is empty");
  return Classify(Decode(bytes), palette);
}

HeatMap LoadHeatMap(std::span<const std::uint8_t> bytes,
                    std::span<const PaletteEntry> palette) {
  DecodedImage image = Decode(bytes);
  if (image.channels == 1) {
    return HeatMap(image.width, image.height, std::move(image.pixels));
  }
  return Classify(image, palette);
}

void RgbImage::Set(int x, int y, const Rgb& c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::memcpy(&pixels[3 * (static_cast<std::size_t>(y) * width + x)], c.data(), 3);
}

std::vector<std::uint8_t> EncodePgm(const HeatMap& map) {
  return PnmBytes('5', map.width(), map.height(), map.weights());
}

std::vector<std::uint8_t> EncodePpm(const RgbImage& image) {
  return PnmBytes('6', image.width, image.height, image.pixels);
}

std::vector<std::uint8_t> EncodePngGray(const HeatMap& map) {
  return EncodePng(map.width(), map.height(), 1, map.weights());
}

std::vector<std::uint8_t> EncodePngRgb(const RgbImage& image) {
  return EncodePng(image.width, image.height, 3, image.pixels);
}

}  // namespace perimeter
