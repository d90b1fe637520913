// pivkit command-line front end: analyze, synth, derive, render.

#include "piv/colormap.hpp"
#include "piv/config.hpp"
#include "piv/derive.hpp"
#include "piv/field_io.hpp"
#include "piv/image_io.hpp"
#include "piv/pipeline.hpp"
#include "piv/synth.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr const char *kThreadsEnv = "PIVKIT_THREADS";

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char *env = std::getenv(kThreadsEnv)) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

std::vector<piv::Quantity> parse_fields(const std::string &list) {
  std::vector<piv::Quantity> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(piv::parse_quantity(item));
  return out;
}

struct AnalyzeArgs {
  std::string config;
  std::string out;
  std::string method;
  int threads = 0;
  bool serial = false;
};

int run_analyze(const AnalyzeArgs &args) {
  apply_threads(args.threads);
  piv::PipelineConfig cfg;
  try {
    cfg = piv::load_config(args.config);
    if (!args.out.empty()) cfg.output_dir = args.out;
    if (!args.method.empty()) {
      const piv::Method m = piv::parse_method(args.method);
      for (auto &p : cfg.passes) p.method = m;
      cfg.validate();
    }
  } catch (const std::exception &e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return piv::exit_code_for(e);
  }

  try {
    const auto report = piv::run_pipeline(
        cfg, args.serial ? piv::ExecPolicy::serial : piv::ExecPolicy::parallel);
    std::cout << "nodes " << report.nodes << " (" << report.nx << "x" << report.ny << "), measured "
              << report.measured << ", flagged " << report.flagged << ", interpolated "
              << report.interpolated << "\n";
    for (const auto &w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << report.outputs.size() << " files to " << cfg.output_dir.string() << "\n";
  } catch (const piv::StageError &e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}

struct SynthArgs {
  std::string flow = "uniform";
  double u = 0, v = 0;
  double omega = 0.02;
  std::optional<double> cx, cy;
  double gamma = 2000;
  double core = 40;
  double rate = 0.01;
  piv::SynthParams params;
  std::optional<double> density;
  double gradient = 1.0;
  double hot_fraction = 0.0;
  int window = 32;
  int step = 16;
  int bits = 8;
  std::string out = "synth_out";
};

int run_synth(SynthArgs args) {
  auto &p = args.params;
  if (args.density)
    p.particle_count = static_cast<int>(std::lround(*args.density * (p.width + 2 * p.margin) *
                                                    (p.height + 2 * p.margin)));
  const piv::Point center{args.cx.value_or(p.width / 2.0), args.cy.value_or(p.height / 2.0)};

  piv::FlowSpec flow;
  if (args.flow == "uniform") flow = piv::flow::Uniform{args.u, args.v};
  else if (args.flow == "rotation") flow = piv::flow::RigidRotation{center, args.omega};
  else if (args.flow == "rankine") flow = piv::flow::Rankine{center, args.gamma, args.core};
  else if (args.flow == "shear") flow = piv::flow::Shear{args.rate};
  else throw piv::ParameterError("unknown flow '" + args.flow + "'");

  auto pair = piv::gen_pair(flow, p);
  if (args.gradient != 1.0) {
    pair.a = piv::apply_illumination_gradient(pair.a, args.gradient);
    pair.b = piv::apply_illumination_gradient(pair.b, args.gradient);
  }
  if (args.hot_fraction > 0.0) {
    const auto hot = piv::hot_pixel_set(p.width, p.height, args.hot_fraction, p.seed ^ 0x9e3779b97f4a7c15ULL);
    pair.a = piv::with_hot_pixels(pair.a, hot);
    pair.b = piv::with_hot_pixels(pair.b, hot);
  }

  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);
  piv::save_pgm(pair.a, dir / "frame_a.pgm", args.bits);
  piv::save_pgm(pair.b, dir / "frame_b.pgm", args.bits);
  const auto grid = piv::make_grid(p.width, p.height, args.window, args.step);
  piv::export_vectors(piv::ground_truth(flow, grid), dir / "truth.csv");
  std::cout << "wrote frame_a.pgm, frame_b.pgm, truth.csv to " << dir.string() << "\n";
  return 0;
}

struct DeriveArgs {
  std::string vectors;
  std::string out = ".";
  std::string fields = "vorticity,magnitude,divergence,shear";
  double scale = 1.0;
};

int run_derive(const DeriveArgs &args) {
  const auto field = piv::import_vectors(args.vectors);
  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);
  for (piv::Quantity q : parse_fields(args.fields)) {
    const auto s = piv::derive_scalar(field, q, field.grid.step * args.scale);
    const auto path = dir / (std::string(piv::to_string(q)) + ".csv");
    piv::export_scalars(s, path);
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

struct RenderArgs {
  std::string scalar;
  std::string out;
  std::optional<double> lo, hi;
  int cell = 1;
};

int run_render(const RenderArgs &args) {
  const auto s = piv::import_scalars(args.scalar);
  const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
  piv::ColorScale scale = s.quantity == piv::Quantity::vorticity && !args.lo && !args.hi
                              ? piv::ColorScale::vorticity_default()
                              : piv::ColorScale::spread(args.lo.value_or(*mn), args.hi.value_or(*mx));
  piv::render_colormap(s, scale, args.out, args.cell);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"pivkit: particle image velocimetry toolkit"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto *analyze = app.add_subcommand("analyze", "Run the full pipeline on a frame pair");
  analyze->add_option("--config", an.config, "Pipeline config file")->required();
  analyze->add_option("--out", an.out, "Output directory (overrides [output] dir)");
  analyze->add_option("--threads", an.threads,
                      std::string("Worker threads (default: $") + kThreadsEnv + " or all cores)");
  analyze->add_option("--method", an.method, "Override every pass: dcc|fft");
  analyze->add_flag("--serial", an.serial, "Use the serial reference kernels");

  SynthArgs sy;
  auto *synth = app.add_subcommand("synth", "Generate a synthetic frame pair with ground truth");
  synth->add_option("--flow", sy.flow, "uniform|rotation|rankine|shear");
  synth->add_option("--u", sy.u, "Uniform displacement x, px/frame");
  synth->add_option("--v", sy.v, "Uniform displacement y, px/frame");
  synth->add_option("--omega", sy.omega, "Rotation rate, rad/frame");
  synth->add_option("--cx", sy.cx, "Rotation/vortex center x (default: frame center)");
  synth->add_option("--cy", sy.cy, "Rotation/vortex center y (default: frame center)");
  synth->add_option("--gamma", sy.gamma, "Rankine circulation, px^2/frame");
  synth->add_option("--core", sy.core, "Rankine core radius, px");
  synth->add_option("--rate", sy.rate, "Shear rate, 1/frame");
  synth->add_option("--width", sy.params.width, "Frame width");
  synth->add_option("--height", sy.params.height, "Frame height");
  synth->add_option("--particles", sy.params.particle_count, "Particle count");
  synth->add_option("--density", sy.density, "Particles per px^2 (overrides --particles)");
  synth->add_option("--diameter", sy.params.particle_diameter, "Particle e^-2 diameter, px");
  synth->add_option("--intensity", sy.params.peak_intensity, "Particle peak intensity [0,1]");
  synth->add_option("--noise", sy.params.noise_sigma, "Additive Gaussian noise sigma [0,1]");
  synth->add_option("--margin", sy.params.margin, "Seeding margin around the frame, px");
  synth->add_option("--seed", sy.params.seed, "Random seed");
  synth->add_option("--gradient", sy.gradient, "Left-to-right illumination ratio");
  synth->add_option("--hot-pixels", sy.hot_fraction, "Fraction of fixed hot pixels");
  synth->add_option("--window", sy.window, "Ground-truth grid window");
  synth->add_option("--step", sy.step, "Ground-truth grid step");
  synth->add_option("--bits", sy.bits, "PGM bit depth, 8 or 16");
  synth->add_option("--out", sy.out, "Output directory");

  DeriveArgs de;
  auto *derive = app.add_subcommand("derive", "Recompute scalar fields from a vector CSV");
  derive->add_option("--vectors", de.vectors, "Vector CSV")->required();
  derive->add_option("--out", de.out, "Output directory");
  derive->add_option("--fields", de.fields, "Comma list of vorticity,magnitude,divergence,shear");
  derive->add_option("--scale", de.scale, "Physical length per pixel");

  RenderArgs re;
  auto *render = app.add_subcommand("render", "Colormap a scalar CSV into a PPM image");
  render->add_option("--scalar", re.scalar, "Scalar CSV")->required();
  render->add_option("--out", re.out, "Output PPM")->required();
  render->add_option("--min", re.lo, "Value mapped to the first color");
  render->add_option("--max", re.hi, "Value mapped to the last color");
  render->add_option("--cell", re.cell, "Pixels per node edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*analyze) return run_analyze(an);
    if (*synth) return run_synth(sy);
    if (*derive) return run_derive(de);
    if (*render) return run_render(re);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return piv::exit_code_for(e);
  }
  return 0;
}
