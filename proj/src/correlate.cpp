#include "piv/correlate.hpp"

#include "fft_plan.hpp"
#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace piv {

Window::Window(int side_, std::vector<double> px_) : side(side_), px(std::move(px_)) {
  if (side < 1 || px.size() != static_cast<std::size_t>(side) * side)
    throw DimensionError("window data is not " + std::to_string(side) + "x" +
                         std::to_string(side));
}

Window extract_window(const GrayImage &img, int x0, int y0, int side) {
  std::vector<double> px(static_cast<std::size_t>(side) * side);
  const bool inside =
      x0 >= 0 && y0 >= 0 && x0 + side <= img.width() && y0 + side <= img.height();
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      px[static_cast<std::size_t>(y) * side + x] =
          inside ? img(x0 + x, y0 + y) : img.clamped(x0 + x, y0 + y);
  return Window(side, std::move(px));
}

CorrelationPlane::CorrelationPlane(int h)
    : half_width(h), values(static_cast<std::size_t>(2 * h + 1) * (2 * h + 1), 0.0) {
  if (h < 0) throw ParameterError("correlation plane half width must be >= 0");
}

CorrelationPlane CorrelationPlane::cropped(int h) const {
  if (h > half_width) throw ParameterError("cannot crop a plane to a larger half width");
  CorrelationPlane out(h);
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx) out.at(dx, dy) = at(dx, dy);
  return out;
}

namespace {

std::vector<double> centered(const Window &w) {
  const double mean = std::accumulate(w.px.begin(), w.px.end(), 0.0) / w.px.size();
  std::vector<double> out(w.px.size());
  std::transform(w.px.begin(), w.px.end(), out.begin(), [mean](double v) { return v - mean; });
  return out;
}

void require_same(const Window &a, const Window &b) {
  if (a.side != b.side)
    throw DimensionError("window sizes differ: " + std::to_string(a.side) + " vs " +
                         std::to_string(b.side));
}

} // namespace

CorrelationPlane dcc(const Window &a, const Window &b, int half_width) {
  require_same(a, b);
  const int n = a.side;
  if (half_width < 0 || half_width > n / 2)
    throw ParameterError("dcc half width " + std::to_string(half_width) +
                         " outside [0, window/2]");
  const auto ca = centered(a);
  const auto cb = centered(b);

  CorrelationPlane plane(half_width);
  for (int dy = -half_width; dy <= half_width; ++dy) {
    const int y0 = std::max(0, -dy), y1 = std::min(n, n - dy);
    for (int dx = -half_width; dx <= half_width; ++dx) {
      const int x0 = std::max(0, -dx), x1 = std::min(n, n - dx);
      double acc = 0.0;
      for (int y = y0; y < y1; ++y) {
        const double *ra = &ca[static_cast<std::size_t>(y) * n];
        const double *rb = &cb[static_cast<std::size_t>(y + dy) * n + dx];
        for (int x = x0; x < x1; ++x) acc += ra[x] * rb[x];
      }
      plane.at(dx, dy) = acc / (static_cast<double>(x1 - x0) * (y1 - y0));
    }
  }
  return plane;
}

CorrelationPlane fft_correlate(const Window &a, const Window &b, FftPadding padding) {
  require_same(a, b);
  const int n = a.side;
  const int p = padding == FftPadding::zero_pad ? 2 * n : n;
  auto &ws = detail::FftWorkspace::local(p);

  const auto ca = centered(a);
  const auto cb = centered(b);
  std::fill_n(ws.real_a(), static_cast<std::size_t>(p) * p, 0.0);
  std::fill_n(ws.real_b(), static_cast<std::size_t>(p) * p, 0.0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      ws.real_a()[static_cast<std::size_t>(y) * p + x] = ca[static_cast<std::size_t>(y) * n + x];
      ws.real_b()[static_cast<std::size_t>(y) * p + x] = cb[static_cast<std::size_t>(y) * n + x];
    }
  ws.forward_a();
  ws.forward_b();
  auto *fa = ws.spec_a();
  const auto *fb = ws.spec_b();
  for (std::size_t k = 0; k < ws.spectrum_size(); ++k) fa[k] = std::conj(fa[k]) * fb[k];
  ws.inverse_a();
  const double *r = ws.real_a();
  const double scale = 1.0 / (static_cast<double>(p) * p);

  const int h = padding == FftPadding::zero_pad ? n - 1 : (n - 1) / 2;
  CorrelationPlane plane(h);
  for (int dy = -h; dy <= h; ++dy) {
    const int ry = (dy + p) % p;
    for (int dx = -h; dx <= h; ++dx) {
      const int rx = (dx + p) % p;
      const double overlap = padding == FftPadding::zero_pad
                                 ? static_cast<double>(n - std::abs(dx)) * (n - std::abs(dy))
                                 : static_cast<double>(n) * n;
      plane.at(dx, dy) = r[static_cast<std::size_t>(ry) * p + rx] * scale / overlap;
    }
  }
  return plane;
}

Peak find_peak(const CorrelationPlane &plane) {
  if (plane.values.empty()) throw ParameterError("find_peak: empty plane");
  const int h = plane.half_width;
  const auto [lo, hi] = std::minmax_element(plane.values.begin(), plane.values.end());
  if (*lo == *hi) return Peak{0, 0, *hi, std::nullopt, true};

  Peak best{0, 0, -std::numeric_limits<double>::infinity(), std::nullopt, false};
  int best_r2 = 0;
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx) {
      const double v = plane.at(dx, dy);
      const int r2 = dx * dx + dy * dy;
      if (v > best.value || (v == best.value && r2 < best_r2)) {
        best.dx = dx;
        best.dy = dy;
        best.value = v;
        best_r2 = r2;
      }
    }

  double second = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx) {
      if (std::abs(dx - best.dx) <= 1 && std::abs(dy - best.dy) <= 1) continue;
      second = std::max(second, plane.at(dx, dy));
      any = true;
    }
  if (any && best.value > 0.0)
    best.peak_ratio =
        second > 0.0 ? best.value / second : std::numeric_limits<double>::infinity();
  return best;
}

Displacement subpixel_gauss3(const CorrelationPlane &plane, const Peak &peak) {
  Displacement d{static_cast<double>(peak.dx), static_cast<double>(peak.dy), peak.value,
                 peak.peak_ratio, true};
  const int h = plane.half_width;
  if (peak.degenerate || std::abs(peak.dx) >= h || std::abs(peak.dy) >= h) return d;
  const double c0 = plane.at(peak.dx, peak.dy);
  if (!(c0 > 0.0)) return d;

  double lift = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (int j = -1; j <= 1; ++j)
    for (int i = -1; i <= 1; ++i) mn = std::min(mn, plane.at(peak.dx + i, peak.dy + j));
  if (mn <= 0.0) lift = 1e-6 - mn;

  auto fit = [&](double cm, double cp, double &delta) {
    const double lm = std::log(cm + lift), l0 = std::log(c0 + lift), lp = std::log(cp + lift);
    const double den = 2.0 * lm - 4.0 * l0 + 2.0 * lp;
    if (den == 0.0) return false;
    delta = (lm - lp) / den;
    return std::isfinite(delta) && std::abs(delta) < 1.0;
  };
  double sx = 0.0, sy = 0.0;
  if (!fit(plane.at(peak.dx - 1, peak.dy), plane.at(peak.dx + 1, peak.dy), sx)) return d;
  if (!fit(plane.at(peak.dx, peak.dy - 1), plane.at(peak.dx, peak.dy + 1), sy)) return d;
  d.dx += sx;
  d.dy += sy;
  d.degenerate = false;
  return d;
}

std::string_view to_string(Method m) { return m == Method::dcc ? "dcc" : "fft"; }

Method parse_method(std::string_view s) {
  if (s == "dcc") return Method::dcc;
  if (s == "fft") return Method::fft;
  throw ParameterError("unknown correlation method '" + std::string(s) + "' (dcc|fft)");
}

std::string_view to_string(Deform d) { return d == Deform::none ? "none" : "linear"; }

Deform parse_deform(std::string_view s) {
  if (s == "none") return Deform::none;
  if (s == "linear") return Deform::linear;
  throw ParameterError("unknown deformation '" + std::string(s) + "' (none|linear)");
}

void PassSpec::validate() const {
  if (window < 4) throw ParameterError("pass window must be >= 4");
  if (step < 1 || step > window) throw ParameterError("pass step must be in [1, window]");
  if (search_radius < 0) throw ParameterError("search radius must be >= 0");
  if (radius() < 1 || radius() > window / 2)
    throw ParameterError("search radius " + std::to_string(radius()) + " outside [1, window/2]");
}

Displacement correlate_windows(const Window &a, const Window &b, const PassSpec &spec) {
  const CorrelationPlane plane = spec.method == Method::dcc
                                     ? dcc(a, b, spec.radius())
                                     : fft_correlate(a, b).cropped(spec.radius());
  return subpixel_gauss3(plane, find_peak(plane));
}

} // namespace piv
