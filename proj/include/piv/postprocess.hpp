#pragma once

#include "piv/field.hpp"
#include "piv/parallel.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace piv {

/// Optional hard bounds on admissible displacement, in px per frame.
struct VelocityLimits {
  double u_min = 0.0, u_max = 0.0;
  double v_min = 0.0, v_max = 0.0;
};

struct PostprocessConfig {
  double n_global = 3.0;
  int local_radius = 1;
  double n_local = 2.0;
  int median_radius = 1;
  bool smoothing_enabled = true;
  /// Added to n * sigma on both validators so that a nearly uniform field
  /// (sigma at the sub-pixel noise level) is not thinned out. px per frame.
  double tolerance = 0.1;
  std::optional<VelocityLimits> limits;

  void validate() const;
};

struct ValidationResult {
  VectorField field;
  std::size_t flagged = 0;
  /// Set when the validator had too little valid data and left the field as is.
  bool warning = false;
};

/// Flags measured nodes whose u or v lies outside mean +- (n * sigma + tolerance),
/// with mean and population sigma taken per component over measured nodes.
ValidationResult global_threshold_validate(const VectorField &field, double n,
                                           double tolerance = 0.0);

/// Single-sweep local filter. For each measured node, mean and population
/// sigma per component come from the (2r+1)^2 neighborhood without the node
/// itself and without nodes already flagged in the input. The node is flagged
/// when a component deviates by more than n * sigma + tolerance.
ValidationResult local_stddev_validate(const VectorField &field, int radius, double n,
                                       double tolerance = 0.0,
                                       ExecPolicy policy = ExecPolicy::parallel);

ValidationResult limit_validate(const VectorField &field, const VelocityLimits &limits);

/// Fills outlier nodes by discrete Laplace interpolation on the 4-neighbor
/// stencil (Gauss-Seidel until the max residual is below 1e-9, at most
/// 10000 sweeps). Filled nodes become `interpolated`. At the grid border a
/// hole averages only the neighbors that exist.
VectorField interpolate_holes(const VectorField &field);

/// Componentwise median over the (2r+1)^2 neighborhood truncated at the
/// borders; even counts average the two middle values. Status is kept.
VectorField median_smooth(const VectorField &field, int radius,
                          ExecPolicy policy = ExecPolicy::parallel);

struct PostprocessReport {
  VectorField field;
  std::size_t flagged_limits = 0;
  std::size_t flagged_global = 0;
  std::size_t flagged_local = 0;
  std::size_t interpolated = 0;
  std::vector<std::string> warnings;

  std::size_t flagged() const { return flagged_limits + flagged_global + flagged_local; }
};

/// limits (if set) -> global threshold -> local stddev -> hole fill ->
/// median smoothing (if enabled).
PostprocessReport validate_pipeline(const VectorField &field, const PostprocessConfig &cfg,
                                    ExecPolicy policy = ExecPolicy::parallel);

} // namespace piv
