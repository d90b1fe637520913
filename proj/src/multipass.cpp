#include "piv/correlate.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace piv {

namespace {

struct Offset {
  int dx = 0;
  int dy = 0;
};

void require_same_size(const GrayImage &a, const GrayImage &b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionError("frame sizes differ: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
}

// Correlates every node; the b window of node k starts offsets[k] away from
// the a window and the offset is added back into the result.
VectorField correlate_grid(const GrayImage &a, const GrayImage &b, const GridSpec &grid,
                           const PassSpec &spec, const std::vector<Offset> &offsets,
                           ExecPolicy policy) {
  VectorField out(grid);
  const int count = static_cast<int>(grid.node_count());
#pragma omp parallel for schedule(dynamic, 16) if (is_parallel(policy))
  for (int k = 0; k < count; ++k) {
    const int ix = k % grid.nx, iy = k / grid.nx;
    const Offset off = offsets.empty() ? Offset{} : offsets[k];
    const Window wa = extract_window(a, grid.origin_x(ix), grid.origin_y(iy), grid.window);
    const Window wb =
        extract_window(b, grid.origin_x(ix) + off.dx, grid.origin_y(iy) + off.dy, grid.window);
    const Displacement d = correlate_windows(wa, wb, spec);
    out.u[k] = d.dx + off.dx;
    out.v[k] = d.dy + off.dy;
  }
  return out;
}

double bilinear(const GrayImage &img, double fx, double fy) {
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const double tx = fx - x0, ty = fy - y0;
  const double top = (1 - tx) * img.clamped(x0, y0) + tx * img.clamped(x0 + 1, y0);
  const double bottom = (1 - tx) * img.clamped(x0, y0 + 1) + tx * img.clamped(x0 + 1, y0 + 1);
  return (1 - ty) * top + ty * bottom;
}

} // namespace

VectorField single_pass(const GrayImage &a, const GrayImage &b, const PassSpec &spec,
                        ExecPolicy policy) {
  require_same_size(a, b);
  spec.validate();
  const GridSpec grid = make_grid(a.width(), a.height(), spec.window, spec.step);
  return correlate_grid(a, b, grid, spec, {}, policy);
}

GrayImage deform_image(const GrayImage &img, const VectorField &field, ExecPolicy policy) {
  field.check();
  if (!field.complete()) throw ParameterError("deform_image: predictor field has holes");
  GrayImage out(img.width(), img.height());
#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Velocity d = sample_field(field, x + 0.5, y + 0.5);
      out(x, y) = bilinear(img, x + d.u, y + d.v);
    }
  return out;
}

VectorField multipass(const GrayImage &a, const GrayImage &b, const std::vector<PassSpec> &passes,
                      const PostprocessConfig &post, ExecPolicy policy) {
  if (passes.empty()) throw ParameterError("multipass: empty pass list");
  for (std::size_t i = 0; i < passes.size(); ++i) {
    passes[i].validate();
    if (i > 0 && passes[i].window > passes[i - 1].window)
      throw ParameterError("multipass: window sizes must be non-increasing");
  }
  require_same_size(a, b);

  VectorField field = single_pass(a, b, passes.front(), policy);
  for (std::size_t i = 1; i < passes.size(); ++i) {
    const PassSpec &spec = passes[i];
    const VectorField predictor = validate_pipeline(field, post, policy).field;
    const GridSpec grid = make_grid(a.width(), a.height(), spec.window, spec.step);

    if (spec.deform == Deform::linear) {
      const GrayImage warped = deform_image(b, predictor, policy);
      field = correlate_grid(a, warped, grid, spec, {}, policy);
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
          const Velocity p = sample_field(predictor, grid.center_x(ix), grid.center_y(iy));
          const std::size_t k = grid.node_index(ix, iy);
          field.u[k] += p.u;
          field.v[k] += p.v;
        }
    } else {
      std::vector<Offset> offsets(grid.node_count());
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
          const Velocity p = sample_field(predictor, grid.center_x(ix), grid.center_y(iy));
          offsets[grid.node_index(ix, iy)] = {static_cast<int>(std::lround(p.u)),
                                              static_cast<int>(std::lround(p.v))};
        }
      field = correlate_grid(a, b, grid, spec, offsets, policy);
    }
  }
  return field;
}

std::vector<PassSpec> default_passes() {
  return {
      {64, 32, Method::fft, Deform::linear, 0},
      {32, 16, Method::fft, Deform::linear, 0},
      {16, 8, Method::fft, Deform::linear, 0},
      {16, 8, Method::fft, Deform::linear, 0},
  };
}

} // namespace piv
