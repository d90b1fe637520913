#include "piv/field.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace piv {

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)),
                                    fill)) {}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0)
    throw DimensionError("image dimensions must be non-negative");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw DimensionError("image data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
  for (double v : data_)
    if (!std::isfinite(v))
      throw NumericError("image contains non-finite intensity");
}

double GrayImage::clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return data_[index(x, y)];
}

GridSpec make_grid(int width, int height, int window, int step) {
  if (window < 4)
    throw ParameterError("window must be at least 4 px, got " + std::to_string(window));
  if (step < 1)
    throw ParameterError("step must be at least 1 px, got " + std::to_string(step));
  if (step > window)
    throw ParameterError("step " + std::to_string(step) + " exceeds window " +
                         std::to_string(window));
  if (window > std::min(width, height))
    throw DimensionError("window " + std::to_string(window) + " exceeds image " +
                         std::to_string(width) + "x" + std::to_string(height));

  GridSpec g;
  g.image_width = width;
  g.image_height = height;
  g.window = window;
  g.step = step;
  g.nx = (width - window) / step + 1;
  g.ny = (height - window) / step + 1;
  return g;
}

std::string_view to_string(NodeStatus s) {
  switch (s) {
  case NodeStatus::measured: return "measured";
  case NodeStatus::outlier: return "outlier";
  case NodeStatus::interpolated: return "interpolated";
  }
  return "?";
}

NodeStatus parse_node_status(std::string_view s) {
  if (s == "measured") return NodeStatus::measured;
  if (s == "outlier") return NodeStatus::outlier;
  if (s == "interpolated") return NodeStatus::interpolated;
  throw ParameterError("unknown node status '" + std::string(s) + "'");
}

VectorField::VectorField(const GridSpec &g)
    : grid(g), u(g.node_count(), 0.0), v(g.node_count(), 0.0),
      status(g.node_count(), NodeStatus::measured) {}

std::size_t VectorField::count(NodeStatus s) const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

void VectorField::check() const {
  const auto n = grid.node_count();
  if (u.size() != n || v.size() != n || status.size() != n)
    throw ParameterError("vector field arrays do not match its grid");
}

namespace {

// Fractional node coordinate along one axis, clamped to the node range.
void locate(double pos, double first_center, int step, int count, int &i0, double &t) {
  if (count == 1) {
    i0 = 0;
    t = 0.0;
    return;
  }
  double f = (pos - first_center) / step;
  f = std::clamp(f, 0.0, static_cast<double>(count - 1));
  i0 = std::min(static_cast<int>(std::floor(f)), count - 2);
  t = f - i0;
}

} // namespace

Velocity sample_field(const VectorField &field, double x, double y) {
  const auto &g = field.grid;
  int ix, iy;
  double tx, ty;
  locate(x, g.center_x(0), g.step, g.nx, ix, tx);
  locate(y, g.center_y(0), g.step, g.ny, iy, ty);
  const int ix1 = std::min(ix + 1, g.nx - 1);
  const int iy1 = std::min(iy + 1, g.ny - 1);

  auto lerp2 = [&](const std::vector<double> &c) {
    const double a = c[g.node_index(ix, iy)];
    const double b = c[g.node_index(ix1, iy)];
    const double d = c[g.node_index(ix, iy1)];
    const double e = c[g.node_index(ix1, iy1)];
    return (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * d + tx * e);
  };
  return {lerp2(field.u), lerp2(field.v)};
}

std::string_view to_string(Quantity q) {
  switch (q) {
  case Quantity::vorticity: return "vorticity";
  case Quantity::magnitude: return "magnitude";
  case Quantity::divergence: return "divergence";
  case Quantity::shear: return "shear";
  }
  return "?";
}

Quantity parse_quantity(std::string_view s) {
  if (s == "vorticity") return Quantity::vorticity;
  if (s == "magnitude") return Quantity::magnitude;
  if (s == "divergence") return Quantity::divergence;
  if (s == "shear") return Quantity::shear;
  throw ParameterError("unknown scalar quantity '" + std::string(s) + "'");
}

void ScalarField::check() const {
  if (values.size() != grid.node_count())
    throw ParameterError("scalar field length does not match its grid");
  for (double v : values)
    if (!std::isfinite(v))
      throw NumericError("scalar field contains non-finite value");
}

} // namespace piv
