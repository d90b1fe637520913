#include "piv/derive.hpp"

#include "piv/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace piv {

namespace {

void require_complete(const VectorField &f) {
  f.check();
  if (!f.complete()) throw ParameterError("field still has outlier nodes; fill holes first");
}

// d/d(index) of c along one axis at position i of n samples with stride.
double diff(const std::vector<double> &c, std::size_t base, std::size_t stride, int i, int n) {
  auto at = [&](int k) { return c[base + static_cast<std::size_t>(k) * stride]; };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / 2.0;
  if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / 2.0;
  return (at(i + 1) - at(i - 1)) / 2.0;
}

struct Gradient {
  double du_dx, du_dy, dv_dx, dv_dy;
};

template <class Combine>
ScalarField from_gradient(const VectorField &field, double spacing, Quantity q, Combine combine) {
  require_complete(field);
  const auto &g = field.grid;
  if (g.nx < 3 || g.ny < 3)
    throw DimensionError("derivative fields need a grid of at least 3x3 nodes, got " +
                         std::to_string(g.nx) + "x" + std::to_string(g.ny));
  if (!(spacing > 0.0)) throw ParameterError("node spacing must be > 0");

  ScalarField s{g, q, std::vector<double>(g.node_count())};
  const std::size_t row = static_cast<std::size_t>(g.nx);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t rb = static_cast<std::size_t>(iy) * row;
      const std::size_t cb = static_cast<std::size_t>(ix);
      Gradient gr{diff(field.u, rb, 1, ix, g.nx) / spacing, diff(field.u, cb, row, iy, g.ny) / spacing,
                  diff(field.v, rb, 1, ix, g.nx) / spacing, diff(field.v, cb, row, iy, g.ny) / spacing};
      s.values[g.node_index(ix, iy)] = combine(gr);
    }
  return s;
}

} // namespace

ScalarField velocity_magnitude(const VectorField &field) {
  require_complete(field);
  ScalarField s{field.grid, Quantity::magnitude, std::vector<double>(field.size())};
  for (std::size_t i = 0; i < field.size(); ++i) s.values[i] = std::hypot(field.u[i], field.v[i]);
  return s;
}

ScalarField vorticity(const VectorField &field, double spacing) {
  return from_gradient(field, spacing, Quantity::vorticity,
                       [](const Gradient &g) { return g.dv_dx - g.du_dy; });
}

ScalarField divergence(const VectorField &field, double spacing) {
  return from_gradient(field, spacing, Quantity::divergence,
                       [](const Gradient &g) { return g.du_dx + g.dv_dy; });
}

ScalarField shear_strain(const VectorField &field, double spacing) {
  return from_gradient(field, spacing, Quantity::shear,
                       [](const Gradient &g) { return g.du_dy + g.dv_dx; });
}

ScalarField derive_scalar(const VectorField &field, Quantity q, double spacing) {
  switch (q) {
  case Quantity::vorticity: return vorticity(field, spacing);
  case Quantity::divergence: return divergence(field, spacing);
  case Quantity::shear: return shear_strain(field, spacing);
  case Quantity::magnitude: return velocity_magnitude(field);
  }
  throw ParameterError("unknown quantity");
}

double stokes_slip_velocity(const TracerSpec &t) {
  if (!(t.diameter > 0.0)) throw ParameterError("tracer diameter must be > 0");
  if (!(t.viscosity > 0.0)) throw ParameterError("viscosity must be > 0");
  if (!(t.particle_density > 0.0) || !(t.fluid_density > 0.0))
    throw ParameterError("densities must be > 0");
  return t.diameter * t.diameter * ((t.particle_density - t.fluid_density) / (18.0 * t.viscosity)) *
         t.acceleration;
}

namespace {

double bilinear_node(const ScalarField &s, double x, double y) {
  const auto &g = s.grid;
  auto locate = [](double p, double c0, int step, int n, int &i, double &t) {
    if (n == 1) {
      i = 0;
      t = 0.0;
      return;
    }
    const double f = (p - c0) / step;
    i = std::min(static_cast<int>(std::floor(f)), n - 2);
    i = std::max(i, 0);
    t = f - i;
  };
  int ix, iy;
  double tx, ty;
  locate(x, g.center_x(0), g.step, g.nx, ix, tx);
  locate(y, g.center_y(0), g.step, g.ny, iy, ty);
  const int ix1 = std::min(ix + 1, g.nx - 1), iy1 = std::min(iy + 1, g.ny - 1);
  const double top = (1 - tx) * s.at(ix, iy) + tx * s.at(ix1, iy);
  const double bottom = (1 - tx) * s.at(ix, iy1) + tx * s.at(ix1, iy1);
  return (1 - ty) * top + ty * bottom;
}

bool inside_extent(const GridSpec &g, Point p) {
  constexpr double eps = 1e-9;
  return p.x >= g.center_x(0) - eps && p.x <= g.center_x(g.nx - 1) + eps &&
         p.y >= g.center_y(0) - eps && p.y <= g.center_y(g.ny - 1) + eps;
}

} // namespace

std::vector<ProfileSample> line_profile(const ScalarField &s, const LineProbe &probe) {
  s.check();
  if (probe.samples < 2) throw ParameterError("line probe needs at least 2 samples");
  if (!inside_extent(s.grid, probe.p0) || !inside_extent(s.grid, probe.p1))
    throw DimensionError("line probe endpoint outside the node-center extent");

  const double len = std::hypot(probe.p1.x - probe.p0.x, probe.p1.y - probe.p0.y);
  std::vector<ProfileSample> out(static_cast<std::size_t>(probe.samples));
  for (int k = 0; k < probe.samples; ++k) {
    const double t = static_cast<double>(k) / (probe.samples - 1);
    const double x = probe.p0.x + t * (probe.p1.x - probe.p0.x);
    const double y = probe.p0.y + t * (probe.p1.y - probe.p0.y);
    out[static_cast<std::size_t>(k)] = {t * len, bilinear_node(s, x, y)};
  }
  return out;
}

FlowDirection area_mean_direction(const VectorField &field, const NodeRect &r) {
  field.check();
  const auto &g = field.grid;
  if (r.x0 < 0 || r.y0 < 0 || r.x1 > g.nx || r.y1 > g.ny || r.x0 >= r.x1 || r.y0 >= r.y1)
    throw DimensionError("area region is empty or outside the grid");

  double su = 0.0, sv = 0.0;
  for (int iy = r.y0; iy < r.y1; ++iy)
    for (int ix = r.x0; ix < r.x1; ++ix) {
      su += field.u[g.node_index(ix, iy)];
      sv += field.v[g.node_index(ix, iy)];
    }
  const double n = static_cast<double>(r.x1 - r.x0) * (r.y1 - r.y0);
  FlowDirection d;
  d.mean_u = su / n;
  d.mean_v = sv / n;
  d.mean_magnitude = std::hypot(d.mean_u, d.mean_v);
  if (d.mean_magnitude > 0.0) {
    double a = std::atan2(d.mean_v, d.mean_u) * 180.0 / std::numbers::pi;
    if (a < 0.0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    d.angle_deg = a;
  }
  return d;
}

} // namespace piv
