#include "piv/pipeline.hpp"

#include "piv/colormap.hpp"
#include "piv/correlate.hpp"
#include "piv/derive.hpp"
#include "piv/field_io.hpp"
#include "piv/image_io.hpp"
#include "piv/postprocess.hpp"
#include "piv/preprocess.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <utility>

namespace piv {

int exit_code_for(const std::exception &e) {
  if (auto *s = dynamic_cast<const StageError *>(&e)) return s->exit_code();
  if (dynamic_cast<const ParameterError *>(&e)) return 1;
  if (dynamic_cast<const IoError *>(&e)) return 2;
  if (dynamic_cast<const std::filesystem::filesystem_error *>(&e)) return 2;
  return 3;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["grid"] = {{"nx", nx}, {"ny", ny}, {"nodes", nodes}};
  j["counts"] = {{"measured", measured}, {"flagged", flagged}, {"interpolated", interpolated}};
  auto &t = j["timings"] = nlohmann::json::array();
  for (const auto &s : timings) t.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

namespace {

class StageRunner {
public:
  explicit StageRunner(RunReport &report) : report_(report) {}

  template <class F>
  auto operator()(const std::string &stage, F &&f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto r = f();
        record(stage, t0);
        return r;
      }
    } catch (const StageError &) {
      throw;
    } catch (const std::exception &e) {
      throw StageError(stage, exit_code_for(e), e.what());
    }
  }

private:
  void record(const std::string &stage, std::chrono::steady_clock::time_point t0) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report_.timings.push_back({stage, dt.count()});
  }

  RunReport &report_;
};

} // namespace

RunReport run_pipeline(const PipelineConfig &cfg, ExecPolicy policy) {
  RunReport report;
  StageRunner stage(report);

  stage("config", [&] { cfg.validate(); });

  auto [a, b] = stage("load", [&] {
    const LoadOptions opts{cfg.convert_color};
    GrayImage fa = load_image(cfg.frame_a, opts);
    GrayImage fb = load_image(cfg.frame_b, opts);
    if (fa.width() != fb.width() || fa.height() != fb.height())
      throw DimensionError("frames differ in size");
    return std::pair{std::move(fa), std::move(fb)};
  });

  stage("grid", [&] {
    for (const PassSpec &p : cfg.passes) make_grid(a.width(), a.height(), p.window, p.step);
  });

  stage("preprocess", [&] {
    a = preprocess(a, cfg.preprocess, policy);
    b = preprocess(b, cfg.preprocess, policy);
  });

  VectorField raw =
      stage("correlate", [&] { return multipass(a, b, cfg.passes, cfg.postprocess, policy); });

  PostprocessReport post =
      stage("postprocess", [&] { return validate_pipeline(raw, cfg.postprocess, policy); });
  const VectorField &field = post.field;
  report.warnings = post.warnings;

  const auto &g = field.grid;
  report.nx = g.nx;
  report.ny = g.ny;
  report.nodes = g.node_count();
  report.measured = field.count(NodeStatus::measured);
  report.interpolated = field.count(NodeStatus::interpolated);
  report.flagged = post.flagged();

  std::vector<ScalarField> scalars = stage("derive", [&] {
    std::vector<ScalarField> out;
    for (Quantity q : cfg.derive) out.push_back(derive_scalar(field, q, g.step * cfg.scale));
    return out;
  });

  stage("write", [&] {
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
    auto target = [&](const std::string &name) {
      const auto final_path = cfg.output_dir / name;
      auto partial = final_path;
      partial += ".partial";
      staged.emplace_back(partial, final_path);
      return partial;
    };

    export_vectors(field, target("vectors.csv"));
    const int cell = cfg.colormap_cell > 0 ? cfg.colormap_cell : g.step;
    for (const ScalarField &s : scalars) {
      const std::string name(to_string(s.quantity));
      export_scalars(s, target(name + ".csv"));
      const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
      const ColorScale scale = s.quantity == Quantity::vorticity && !cfg.vorticity_autoscale
                                   ? ColorScale::vorticity_default()
                                   : ColorScale::spread(*lo, *hi);
      render_colormap(s, scale, target(name + ".ppm"), cell);
    }
    for (const auto &[partial, final_path] : staged) {
      std::filesystem::rename(partial, final_path);
      report.outputs.push_back(final_path.filename().string());
    }
    report.outputs.push_back("report.json");
  });

  const auto report_path = cfg.output_dir / "report.json";
  auto partial = report_path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary);
    out << report.to_json();
    if (!out) throw StageError("write", 2, "cannot write " + partial.string());
  }
  std::filesystem::rename(partial, report_path);
  return report;
}

} // namespace piv
