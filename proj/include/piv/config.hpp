#pragma once

#include "piv/correlate.hpp"
#include "piv/field.hpp"
#include "piv/postprocess.hpp"
#include "piv/preprocess.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace piv {

struct PipelineConfig {
  std::filesystem::path frame_a;
  std::filesystem::path frame_b;
  bool convert_color = false;

  PreprocessConfig preprocess;
  std::vector<PassSpec> passes = default_passes();
  PostprocessConfig postprocess;

  std::vector<Quantity> derive = {Quantity::vorticity, Quantity::magnitude};
  /// Physical length per pixel; derivative spacing is step * scale.
  double scale = 1.0;

  std::filesystem::path output_dir = "piv_out";
  /// Pixels per node edge in colormap images. 0 uses the final grid step.
  int colormap_cell = 0;
  /// Vorticity images use the fixed 0.00-0.40 anchors unless this is set,
  /// in which case the ramp spans the field's own range.
  bool vorticity_autoscale = false;

  /// Throws ParameterError on any invalid value.
  void validate() const;
};

/// Parses the INI-style pipeline config. Relative frame paths are resolved
/// against `base_dir`. Unknown sections or keys are errors.
PipelineConfig parse_config(const std::string &text, const std::filesystem::path &base_dir = {});
PipelineConfig load_config(const std::filesystem::path &path);

/// Serializes a config in the same format (every key written explicitly).
std::string format_config(const PipelineConfig &cfg);

} // namespace piv
