#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace piv {

/// Row-major scalar image. Pixel (x, y) covers [x, x+1) x [y, y+1) in
/// continuous coordinates; x grows rightward, y grows downward.
class GrayImage {
public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double &operator()(int x, int y) { return data_[index(x, y)]; }

  /// Edge-replicating read.
  double clamped(int x, int y) const;

  std::span<const double> pixels() const { return data_; }
  std::span<double> pixels() { return data_; }

  bool operator==(const GrayImage &) const = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point &) const = default;
};

/// Tiling of a frame into square interrogation windows. Partial windows at
/// the right and bottom borders are dropped.
struct GridSpec {
  int image_width = 0;
  int image_height = 0;
  int window = 0;
  int step = 0;
  int nx = 0;
  int ny = 0;

  std::size_t node_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  std::size_t node_index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(ix);
  }
  int origin_x(int ix) const { return ix * step; }
  int origin_y(int iy) const { return iy * step; }
  double center_x(int ix) const { return origin_x(ix) + window / 2.0; }
  double center_y(int iy) const { return origin_y(iy) + window / 2.0; }
  Point center(int ix, int iy) const { return {center_x(ix), center_y(iy)}; }

  bool operator==(const GridSpec &) const = default;
};

GridSpec make_grid(int width, int height, int window, int step);

enum class NodeStatus : unsigned char { measured, outlier, interpolated };

std::string_view to_string(NodeStatus s);
NodeStatus parse_node_status(std::string_view s);

struct Velocity {
  double u = 0.0;
  double v = 0.0;
};

/// Per-node displacement in pixels per frame interval.
struct VectorField {
  GridSpec grid;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<NodeStatus> status;

  VectorField() = default;
  explicit VectorField(const GridSpec &g);

  std::size_t size() const { return u.size(); }
  std::size_t count(NodeStatus s) const;
  bool complete() const { return count(NodeStatus::outlier) == 0; }

  /// Throws ParameterError when array lengths disagree with the grid.
  void check() const;
};

/// Bilinear interpolation between node centers; positions beyond the outer
/// node centers take the nearest node's value.
Velocity sample_field(const VectorField &field, double x, double y);

enum class Quantity { vorticity, magnitude, divergence, shear };

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view s);

struct ScalarField {
  GridSpec grid;
  Quantity quantity = Quantity::magnitude;
  std::vector<double> values;

  double at(int ix, int iy) const { return values[grid.node_index(ix, iy)]; }
  void check() const;
};

} // namespace piv
