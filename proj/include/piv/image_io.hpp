#pragma once

#include "piv/field.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace piv {

struct LoadOptions {
  /// Accept P6 color input by averaging channels. Off by default.
  bool convert_color = false;
};

/// Reads binary PGM (P5, 8- or 16-bit). An 8-bit value k maps to k/255 and a
/// 16-bit value to k/65535; any other maxval M maps k to k/M.
GrayImage load_image(const std::filesystem::path &path, LoadOptions opts = {});

/// Writes P5 with maxval 255 (bit_depth 8) or 65535 (bit_depth 16),
/// quantizing by round(v * maxval) after clamping to [0, 1].
void save_pgm(const GrayImage &img, const std::filesystem::path &path, int bit_depth = 8);

using Rgb = std::array<std::uint8_t, 3>;

/// Binary P6 writer. `rgb` is row-major, width * height entries.
void save_ppm(const std::vector<Rgb> &rgb, int width, int height,
              const std::filesystem::path &path);

} // namespace piv
