#include "illusory/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "illusory/error.hpp"

namespace illusory::io {
namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::string& what) {
  skip_separators(in);
  int value = -1;
  if (!(in >> value) || value < 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "bad PGM header field: " + what);
  }
  return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnreadableFile, path.string());

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    throw Error(ErrorCode::kUnsupportedFormat, path.string() + " is not a P2/P5 graymap");
  }
  const bool binary = magic[1] == '5';

  GrayImage img;
  img.width = read_header_int(in, "width");
  img.height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (img.width == 0 || img.height == 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "zero-sized image");
  }
  if (maxval == 0 || maxval > 255) {
    throw Error(ErrorCode::kUnsupportedFormat, "only 8-bit graymaps are supported");
  }

  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (binary) {
    in.get();  // the single whitespace byte after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw Error(ErrorCode::kUnsupportedFormat, "truncated pixel data");
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const int v = read_header_int(in, "pixel");
      if (v > maxval) throw Error(ErrorCode::kUnsupportedFormat, "pixel exceeds maxval");
      img.pixels[k] = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) {
      p = static_cast<std::uint8_t>(std::lround(255.0 * p / maxval));
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

ConfigurationMask load_mask(const std::filesystem::path& path, bool invert, int bin_threshold) {
  const GrayImage img = read_pgm(path);
  if (img.width < 3 || img.height < 3) {
    throw Error(ErrorCode::kUnsupportedFormat, "image must be at least 3x3");
  }
  ConfigurationMask mask(GridGeometry(img.width, img.height));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const bool dark = img.at(x, y) < bin_threshold;
      mask.set(x, y, dark != invert);
    }
  }
  validate_configuration(mask);
  return mask;
}

GrayImage mask_to_image(const ConfigurationMask& mask) {
  GrayImage img{mask.width(), mask.height(), {}};
  img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) img.pixels.push_back(mask(x, y) ? 0 : 255);
  }
  return img;
}

std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * c + 0.5));
}

GrayImage field_to_image(const Field& f) {
  if (!f.all_finite()) throw Error(ErrorCode::kInvalidArgument, "field has non-finite values");
  GrayImage img{f.width(), f.height(), {}};
  img.pixels.reserve(f.size());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) img.pixels.push_back(quantize(f(x, y)));
  }
  return img;
}

void save_field_image(const Field& f, const std::filesystem::path& path) {
  write_pgm(path, field_to_image(f));
}

void save_shape_image(const ShapeMask& shape, const std::filesystem::path& path) {
  GrayImage img{shape.width(), shape.height(), {}};
  img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) img.pixels.push_back(shape(x, y) ? 255 : 0);
  }
  write_pgm(path, img);
}

}  // namespace illusory::io
