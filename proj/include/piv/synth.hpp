#pragma once

#include "piv/field.hpp"

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace piv {

namespace flow {

struct Uniform {
  double u = 0.0;
  double v = 0.0;
};

/// Exact rotation by `omega` radians per frame about `center`.
struct RigidRotation {
  Point center;
  double omega = 0.0;
};

/// Rankine vortex with circulation `gamma` (px^2 per frame). Each particle
/// turns about the center by its angular velocity: gamma / (2 pi rc^2)
/// inside the core and gamma / (2 pi r^2) outside.
struct Rankine {
  Point center;
  double gamma = 0.0;
  double core_radius = 1.0;
};

/// u = rate * y, v = 0.
struct Shear {
  double rate = 0.0;
};

} // namespace flow

using FlowSpec = std::variant<flow::Uniform, flow::RigidRotation, flow::Rankine, flow::Shear>;

void validate(const FlowSpec &flow);

/// Displacement over one frame interval of a particle starting at p.
Velocity displacement(const FlowSpec &flow, Point p);

std::vector<Point> advect(const std::vector<Point> &positions, const FlowSpec &flow);

/// Analytic displacement at every node center of `grid`.
VectorField ground_truth(const FlowSpec &flow, const GridSpec &grid);

struct SynthParams {
  int width = 256;
  int height = 256;
  int particle_count = 2000;
  /// e^-2 diameter of the Gaussian blob, px.
  double particle_diameter = 3.0;
  double peak_intensity = 0.8;
  double noise_sigma = 0.0;
  /// Particles are seeded over the frame grown by this many px on each side.
  double margin = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Seeded source: std::mt19937_64. Uniform reals take the top 53 bits of a
/// draw; normals come from Box-Muller, so sequences do not depend on the
/// standard library's distribution implementations.
class SynthRng {
public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}
  double uniform();
  double normal();

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Sums I exp(-8 r^2 / d^2) blobs evaluated at pixel centers, adds Gaussian
/// noise drawn from `rng`, clamps to [0, 1].
GrayImage render_particles(const std::vector<Point> &positions, const SynthParams &p, SynthRng &rng);

struct SynthPair {
  GrayImage a;
  GrayImage b;
  std::vector<Point> positions_a;
  std::vector<Point> positions_b;
};

/// Frame A from random positions, frame B from the advected positions.
/// Particles that leave the frame are not replaced.
SynthPair gen_pair(const FlowSpec &flow, const SynthParams &p);

/// Multiplies intensities by a ramp rising linearly from 1 at x = 0 to
/// `ratio` at the right edge, then rescales so the brightest factor is 1.
GrayImage apply_illumination_gradient(const GrayImage &img, double ratio);

/// Returns `fraction` of the pixel indices, chosen with `seed`. The same set
/// applied to both frames models fixed-pattern sensor defects.
std::vector<std::size_t> hot_pixel_set(int width, int height, double fraction, std::uint64_t seed);

GrayImage with_hot_pixels(const GrayImage &img, const std::vector<std::size_t> &pixels,
                          double value = 1.0);

} // namespace piv
