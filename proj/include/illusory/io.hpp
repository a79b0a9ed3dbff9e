#pragma once

// 8-bit portable graymap (PGM) reading and writing.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "illusory/canyon.hpp"
#include "illusory/grid.hpp"
#include "illusory/shape.hpp"

namespace illusory::io {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Reads P2 (ASCII) or P5 (binary) with maxval <= 255. Samples are rescaled
/// to 0..255 when maxval < 255.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes binary P5 with maxval 255.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Dark pixels (luminance < bin_threshold) are inducers; `invert` swaps the
/// rule. Rejects empty configurations and ones that reach the image border.
ConfigurationMask load_mask(const std::filesystem::path& path, bool invert = false,
                            int bin_threshold = 128);

/// Inverse of load_mask's default rule: Q drawn black on white.
GrayImage mask_to_image(const ConfigurationMask& mask);

/// v -> round-half-up(255 * clamp(v, 0, 1)).
std::uint8_t quantize(double v);

GrayImage field_to_image(const Field& f);
void save_field_image(const Field& f, const std::filesystem::path& path);

/// Shape cells white (255), background black (0).
void save_shape_image(const ShapeMask& shape, const std::filesystem::path& path);

}  // namespace illusory::io
