#pragma once

#include "piv/field.hpp"

#include <optional>
#include <vector>

namespace piv {

ScalarField velocity_magnitude(const VectorField &field);

// Derivative fields use second-order central differences between node
// centers and second-order one-sided differences on the grid border.
// `spacing` is the physical node distance (grid step times any user scale).
// Each needs at least a 3x3 grid.

/// dv/dx - du/dy
ScalarField vorticity(const VectorField &field, double spacing);
/// du/dx + dv/dy
ScalarField divergence(const VectorField &field, double spacing);
/// du/dy + dv/dx
ScalarField shear_strain(const VectorField &field, double spacing);

/// Dispatches on the quantity tag.
ScalarField derive_scalar(const VectorField &field, Quantity q, double spacing);

/// Tracer and fluid properties in SI units.
struct TracerSpec {
  double diameter = 0.0;        // m
  double particle_density = 0.0; // kg/m^3
  double fluid_density = 0.0;   // kg/m^3
  double viscosity = 0.0;       // Pa s
  double acceleration = 0.0;    // m/s^2
};

/// Stokes settling velocity d^2 (rho_p - rho) a / (18 mu), in m/s.
double stokes_slip_velocity(const TracerSpec &t);

struct LineProbe {
  Point p0;
  Point p1;
  int samples = 2;
};

struct ProfileSample {
  double distance = 0.0;
  double value = 0.0;
};

/// Bilinear samples of `s` at `samples` equidistant points from p0 to p1
/// (both inclusive). Endpoints must lie within the node-center extent.
std::vector<ProfileSample> line_profile(const ScalarField &s, const LineProbe &probe);

/// Half-open node index rectangle [x0, x1) x [y0, y1).
struct NodeRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct FlowDirection {
  /// Degrees in [0, 360), 0 along +x and increasing toward +y. Empty when
  /// the mean vector is zero.
  std::optional<double> angle_deg;
  double mean_magnitude = 0.0;
  double mean_u = 0.0;
  double mean_v = 0.0;
};

FlowDirection area_mean_direction(const VectorField &field, const NodeRect &region);

} // namespace piv
