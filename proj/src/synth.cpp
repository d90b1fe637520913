#include "piv/synth.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace piv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Velocity rotate_about(Point c, double angle, Point p) {
  const double rx = p.x - c.x, ry = p.y - c.y;
  const double cs = std::cos(angle), sn = std::sin(angle);
  return {cs * rx - sn * ry - rx, sn * rx + cs * ry - ry};
}

} // namespace

void validate(const FlowSpec &flow) {
  std::visit(Overloaded{
                 [](const flow::Uniform &f) {
                   if (!std::isfinite(f.u) || !std::isfinite(f.v))
                     throw ParameterError("uniform flow parameters must be finite");
                 },
                 [](const flow::RigidRotation &f) {
                   if (!std::isfinite(f.omega) || !std::isfinite(f.center.x) ||
                       !std::isfinite(f.center.y))
                     throw ParameterError("rotation parameters must be finite");
                 },
                 [](const flow::Rankine &f) {
                   if (!(f.core_radius > 0.0)) throw ParameterError("core radius must be > 0");
                   if (!std::isfinite(f.gamma)) throw ParameterError("circulation must be finite");
                 },
                 [](const flow::Shear &f) {
                   if (!std::isfinite(f.rate)) throw ParameterError("shear rate must be finite");
                 },
             },
             flow);
}

Velocity displacement(const FlowSpec &flow, Point p) {
  return std::visit(
      Overloaded{
          [](const flow::Uniform &f) { return Velocity{f.u, f.v}; },
          [p](const flow::RigidRotation &f) { return rotate_about(f.center, f.omega, p); },
          [p](const flow::Rankine &f) {
            const double r2 = (p.x - f.center.x) * (p.x - f.center.x) +
                              (p.y - f.center.y) * (p.y - f.center.y);
            const double rc2 = f.core_radius * f.core_radius;
            const double rate = f.gamma / (2.0 * std::numbers::pi * std::max(r2, rc2));
            return rotate_about(f.center, rate, p);
          },
          [p](const flow::Shear &f) { return Velocity{f.rate * p.y, 0.0}; },
      },
      flow);
}

std::vector<Point> advect(const std::vector<Point> &positions, const FlowSpec &flow) {
  validate(flow);
  std::vector<Point> out(positions.size());
  std::transform(positions.begin(), positions.end(), out.begin(), [&](Point p) {
    const Velocity d = displacement(flow, p);
    return Point{p.x + d.u, p.y + d.v};
  });
  return out;
}

VectorField ground_truth(const FlowSpec &flow, const GridSpec &grid) {
  validate(flow);
  VectorField f(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Velocity d = displacement(flow, grid.center(ix, iy));
      f.u[grid.node_index(ix, iy)] = d.u;
      f.v[grid.node_index(ix, iy)] = d.v;
    }
  return f;
}

void SynthParams::validate() const {
  if (width < 1 || height < 1) throw ParameterError("synthetic frame must be at least 1x1");
  if (particle_count < 0) throw ParameterError("particle count must be >= 0");
  if (!(particle_diameter >= 1.0)) throw ParameterError("particle diameter must be >= 1 px");
  if (!(peak_intensity >= 0.0 && peak_intensity <= 1.0))
    throw ParameterError("peak intensity must lie in [0, 1]");
  if (!(noise_sigma >= 0.0 && noise_sigma <= 1.0))
    throw ParameterError("noise sigma must lie in [0, 1]");
  if (!(margin >= 0.0)) throw ParameterError("margin must be >= 0");
}

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SynthRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

GrayImage render_particles(const std::vector<Point> &positions, const SynthParams &p, SynthRng &rng) {
  p.validate();
  GrayImage img(p.width, p.height);
  const double d2 = p.particle_diameter * p.particle_diameter;
  const int reach = static_cast<int>(std::ceil(2.0 * p.particle_diameter));
  for (const Point &q : positions) {
    const int cx = static_cast<int>(std::floor(q.x)), cy = static_cast<int>(std::floor(q.y));
    for (int y = std::max(0, cy - reach); y <= std::min(p.height - 1, cy + reach); ++y)
      for (int x = std::max(0, cx - reach); x <= std::min(p.width - 1, cx + reach); ++x) {
        const double dx = x + 0.5 - q.x, dy = y + 0.5 - q.y;
        img(x, y) += p.peak_intensity * std::exp(-8.0 * (dx * dx + dy * dy) / d2);
      }
  }
  for (double &v : img.pixels()) {
    if (p.noise_sigma > 0.0) v += p.noise_sigma * rng.normal();
    v = std::clamp(v, 0.0, 1.0);
  }
  return img;
}

SynthPair gen_pair(const FlowSpec &flow, const SynthParams &p) {
  p.validate();
  validate(flow);
  SynthRng rng(p.seed);
  SynthPair pair;
  pair.positions_a.reserve(static_cast<std::size_t>(p.particle_count));
  const double w = p.width + 2.0 * p.margin, h = p.height + 2.0 * p.margin;
  for (int i = 0; i < p.particle_count; ++i) {
    const double x = rng.uniform() * w - p.margin;
    const double y = rng.uniform() * h - p.margin;
    pair.positions_a.push_back({x, y});
  }
  pair.positions_b = advect(pair.positions_a, flow);
  pair.a = render_particles(pair.positions_a, p, rng);
  pair.b = render_particles(pair.positions_b, p, rng);
  return pair;
}

GrayImage apply_illumination_gradient(const GrayImage &img, double ratio) {
  if (!(ratio > 0.0)) throw ParameterError("illumination ratio must be > 0");
  GrayImage out = img;
  const double top = std::max(1.0, ratio);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double t = img.width() > 1 ? (x + 0.5) / img.width() : 0.0;
      out(x, y) = img(x, y) * (1.0 + (ratio - 1.0) * t) / top;
    }
  return out;
}

std::vector<std::size_t> hot_pixel_set(int width, int height, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("hot pixel fraction must lie in [0, 1]");
  const std::size_t total = static_cast<std::size_t>(width) * height;
  const auto count = static_cast<std::size_t>(std::llround(fraction * total));
  // Partial Fisher-Yates with the toolkit's own uniform source.
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SynthRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform() * (total - i));
    std::swap(idx[i], idx[std::min(j, total - 1)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

GrayImage with_hot_pixels(const GrayImage &img, const std::vector<std::size_t> &pixels, double value) {
  GrayImage out = img;
  auto px = out.pixels();
  for (std::size_t i : pixels) {
    if (i >= px.size()) throw DimensionError("hot pixel index outside the image");
    px[i] = value;
  }
  return out;
}

} // namespace piv
