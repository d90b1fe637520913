#include "piv/colormap.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>

namespace piv {

ColorScale::ColorScale(std::vector<ColorStop> stops) : stops_(std::move(stops)) {
  if (stops_.size() < 2) throw ParameterError("color scale needs at least two stops");
  for (std::size_t i = 1; i < stops_.size(); ++i)
    if (!(stops_[i].value > stops_[i - 1].value))
      throw ParameterError("color stop values must be strictly increasing");
}

Rgb ColorScale::color_at(double value) const {
  if (!(value > stops_.front().value)) return stops_.front().color;
  if (value >= stops_.back().value) return stops_.back().color;
  auto hi = std::upper_bound(stops_.begin(), stops_.end(), value,
                             [](double v, const ColorStop &s) { return v < s.value; });
  auto lo = hi - 1;
  const double t = (value - lo->value) / (hi->value - lo->value);
  Rgb out{};
  for (int c = 0; c < 3; ++c) {
    const double x = (1.0 - t) * lo->color[c] + t * hi->color[c];
    out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L));
  }
  return out;
}

ColorScale ColorScale::vorticity_default() {
  return ColorScale({{0.00, colors::dark_blue},
                     {0.10, colors::light_blue},
                     {0.20, colors::green},
                     {0.30, colors::yellow},
                     {0.40, colors::red}});
}

ColorScale ColorScale::spread(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi = lo + 1.0;
  }
  const double d = (hi - lo) / 4.0;
  return ColorScale({{lo, colors::dark_blue},
                     {lo + d, colors::light_blue},
                     {lo + 2 * d, colors::green},
                     {lo + 3 * d, colors::yellow},
                     {hi, colors::red}});
}

void render_colormap(const ScalarField &s, const ColorScale &scale,
                     const std::filesystem::path &out, int cell) {
  s.check();
  if (cell < 1) throw ParameterError("colormap cell size must be >= 1");
  const int w = s.grid.nx * cell, h = s.grid.ny * cell;
  std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      px[static_cast<std::size_t>(y) * w + x] = scale.color_at(s.at(x / cell, y / cell));
  save_ppm(px, w, h, out);
}

} // namespace piv
