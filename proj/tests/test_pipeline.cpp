#include "doctest.h"

#include "piv/colormap.hpp"
#include "piv/field_io.hpp"
#include "piv/image_io.hpp"
#include "piv/pipeline.hpp"
#include "piv/synth.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace piv;
namespace fs = std::filesystem;

namespace {

fs::path workdir(const std::string &name) {
  const fs::path d = fs::temp_directory_path() / "pivkit_test_pipeline" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig uniform_setup(const fs::path &dir, double u, double v, int size = 128) {
  SynthParams p;
  p.width = p.height = size;
  p.margin = 10;
  p.particle_count = static_cast<int>(0.03 * (size + 20) * (size + 20));
  p.seed = 11;
  const SynthPair pair = gen_pair(flow::Uniform{u, v}, p);
  save_pgm(pair.a, dir / "a.pgm", 16);
  save_pgm(pair.b, dir / "b.pgm", 16);
  PipelineConfig cfg;
  cfg.frame_a = dir / "a.pgm";
  cfg.frame_b = dir / "b.pgm";
  cfg.passes = {{64, 32, Method::fft, Deform::linear, 0}, {32, 16, Method::fft, Deform::linear, 0}};
  cfg.output_dir = dir / "out";
  return cfg;
}

} // namespace

TEST_CASE("uniform shift end to end") {
  const fs::path dir = workdir("uniform");
  const PipelineConfig cfg = uniform_setup(dir, 2.3, -1.6);
  const RunReport rep = run_pipeline(cfg);
  CHECK(rep.flagged == 0);
  CHECK(rep.measured + rep.interpolated == rep.nodes);
  CHECK(rep.nodes == static_cast<std::size_t>(rep.nx * rep.ny));
  CHECK(rep.nx == 7);

  const VectorField f = import_vectors(cfg.output_dir / "vectors.csv");
  double mu = 0, mv = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mu += f.u[i];
    mv += f.v[i];
  }
  CHECK(std::abs(mu / f.size() - 2.3) < 0.1);
  CHECK(std::abs(mv / f.size() + 1.6) < 0.1);

  for (const char *name : {"vectors.csv", "vorticity.csv", "vorticity.ppm", "magnitude.csv",
                           "magnitude.ppm", "report.json"})
    CHECK(fs::exists(cfg.output_dir / name));
  for (const auto &e : fs::directory_iterator(cfg.output_dir))
    CHECK(e.path().extension() != ".partial");

  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "report.json"));
  CHECK(j["grid"]["nodes"] == rep.nodes);
  CHECK(j["counts"]["flagged"] == 0);
  CHECK(j["timings"].size() == 8);
}

TEST_CASE("default pass list on a uniform pair flags nothing") {
  const fs::path dir = workdir("defaults");
  PipelineConfig cfg = uniform_setup(dir, 3.7, -2.1, 256);
  cfg.passes = default_passes();
  const RunReport rep = run_pipeline(cfg);
  CHECK(rep.warnings.empty());
  CHECK(rep.measured + rep.interpolated == rep.nodes);
  const VectorField f = import_vectors(cfg.output_dir / "vectors.csv");
  // Frame b holds no partners for particles that leave through the right and
  // top edges, so only the outermost node rows there may be replaced.
  const GridSpec &g = f.grid;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix == g.nx - 1 || iy == 0) continue;
      CAPTURE(ix);
      CAPTURE(iy);
      CHECK(f.status[g.node_index(ix, iy)] == NodeStatus::measured);
    }
  CHECK(rep.flagged <= static_cast<std::size_t>(g.nx + g.ny - 1));
  double mu = 0, mv = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mu += f.u[i];
    mv += f.v[i];
  }
  CHECK(std::abs(mu / f.size() - 3.7) < 0.1);
  CHECK(std::abs(mv / f.size() + 2.1) < 0.1);
}

TEST_CASE("reruns produce byte-identical outputs") {
  const fs::path dir = workdir("rerun");
  PipelineConfig cfg = uniform_setup(dir, 1.2, 0.7, 96);
  cfg.derive = {Quantity::vorticity, Quantity::divergence};
  run_pipeline(cfg);
  const std::string v1 = slurp(cfg.output_dir / "vectors.csv");
  const std::string w1 = slurp(cfg.output_dir / "vorticity.ppm");
  run_pipeline(cfg, ExecPolicy::serial);
  CHECK(slurp(cfg.output_dir / "vectors.csv") == v1);
  CHECK(slurp(cfg.output_dir / "vorticity.ppm") == w1);
}

TEST_CASE("oversized window fails in the grid stage") {
  const fs::path dir = workdir("grid");
  PipelineConfig cfg = uniform_setup(dir, 0, 0, 64);
  cfg.passes = {{128, 64, Method::fft, Deform::linear, 0}};
  try {
    run_pipeline(cfg);
    FAIL("expected a StageError");
  } catch (const StageError &e) {
    CHECK(e.stage() == "grid");
    CHECK(e.exit_code() == 1);
  }
  CHECK_FALSE(fs::exists(cfg.output_dir / "vectors.csv"));
}

TEST_CASE("missing frames fail in the load stage with an I/O code") {
  const fs::path dir = workdir("load");
  PipelineConfig cfg;
  cfg.frame_a = dir / "none_a.pgm";
  cfg.frame_b = dir / "none_b.pgm";
  cfg.output_dir = dir / "out";
  try {
    run_pipeline(cfg);
    FAIL("expected a StageError");
  } catch (const StageError &e) {
    CHECK(e.stage() == "load");
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("exit codes by error class") {
  CHECK(exit_code_for(ParameterError("x")) == 1);
  CHECK(exit_code_for(DimensionError("x")) == 1);
  CHECK(exit_code_for(IoError("x")) == 2);
  CHECK(exit_code_for(NumericError("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 3);
}

TEST_CASE("vorticity color anchors") {
  const ColorScale s = ColorScale::vorticity_default();
  CHECK(s.color_at(0.4) == colors::red);
  CHECK(s.color_at(0.0) == colors::dark_blue);
  CHECK(s.color_at(0.1) == colors::light_blue);
  CHECK(s.color_at(-1.0) == colors::dark_blue);
  CHECK(s.color_at(2.0) == colors::red);
  // Halfway between light blue and green.
  CHECK(s.color_at(0.15) == Rgb{87, 172, 115});
  CHECK_THROWS_AS(ColorScale({{0.0, colors::red}, {0.0, colors::green}}), ParameterError);
}

TEST_CASE("spread scale covers the data range") {
  const ColorScale s = ColorScale::spread(-2.0, 2.0);
  CHECK(s.color_at(-2.0) == colors::dark_blue);
  CHECK(s.color_at(0.0) == colors::green);
  CHECK(s.color_at(2.0) == colors::red);
  CHECK(ColorScale::spread(1.0, 1.0).color_at(1.0) == colors::green);
}

TEST_CASE("colormap image layout") {
  const fs::path dir = workdir("colormap");
  ScalarField s{make_grid(48, 32, 16, 16), Quantity::vorticity, {0.0, 0.1, 0.2, 0.3, 0.4, 0.0}};
  render_colormap(s, ColorScale::vorticity_default(), dir / "w.ppm", 2);
  const std::string data = slurp(dir / "w.ppm");
  const std::string header = "P6\n6 4\n255\n";
  REQUIRE(data.rfind(header, 0) == 0);
  REQUIRE(data.size() == header.size() + 6 * 4 * 3);
  auto px = [&](int x, int y) {
    const std::size_t o = header.size() + 3 * (static_cast<std::size_t>(y) * 6 + x);
    return Rgb{static_cast<std::uint8_t>(data[o]), static_cast<std::uint8_t>(data[o + 1]),
               static_cast<std::uint8_t>(data[o + 2])};
  };
  CHECK(px(0, 0) == colors::dark_blue);
  CHECK(px(1, 1) == colors::dark_blue);
  CHECK(px(2, 0) == colors::light_blue);
  CHECK(px(4, 1) == colors::green);
  CHECK(px(2, 2) == colors::red);
  CHECK(px(5, 3) == colors::dark_blue);
}
