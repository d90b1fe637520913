#pragma once

#include "piv/field.hpp"
#include "piv/image_io.hpp"

#include <filesystem>
#include <vector>

namespace piv {

struct ColorStop {
  double value = 0.0;
  Rgb color{};
};

/// Piecewise-linear RGB ramp. Values outside the stops clamp to the end
/// colors; channels round half away from zero.
class ColorScale {
public:
  explicit ColorScale(std::vector<ColorStop> stops);

  Rgb color_at(double value) const;
  const std::vector<ColorStop> &stops() const { return stops_; }

  /// Five anchors for vorticity: 0.00 dark blue, 0.10 light blue, 0.20
  /// green, 0.30 yellow, 0.40 red.
  static ColorScale vorticity_default();
  /// Same five colors spread evenly over [lo, hi]. A degenerate range is
  /// widened to [lo - 0.5, lo + 0.5].
  static ColorScale spread(double lo, double hi);

private:
  std::vector<ColorStop> stops_;
};

namespace colors {
inline constexpr Rgb dark_blue{0, 0, 139};
inline constexpr Rgb light_blue{173, 216, 230};
inline constexpr Rgb green{0, 128, 0};
inline constexpr Rgb yellow{255, 255, 0};
inline constexpr Rgb red{255, 0, 0};
} // namespace colors

/// Writes one cell x cell block of pixels per node as binary PPM, rows in
/// node order (top row = iy 0).
void render_colormap(const ScalarField &s, const ColorScale &scale,
                     const std::filesystem::path &out, int cell = 1);

} // namespace piv
