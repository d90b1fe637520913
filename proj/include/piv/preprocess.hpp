#pragma once

#include "piv/field.hpp"
#include "piv/parallel.hpp"

#include <limits>
#include <vector>

namespace piv {

struct PreprocessConfig {
  bool clahe_enabled = false;
  int clahe_tile = 32;
  double clahe_clip = 4.0;
  int clahe_bins = 256;

  bool hpf_enabled = false;
  double hpf_sigma = 3.0;

  bool cap_enabled = false;
  double cap_n = 2.0;

  void validate() const;
};

/// Contrast-limited adaptive histogram equalization.
///
/// The image is partitioned into floor(W/tile) x floor(H/tile) near-equal
/// tiles. Each tile's histogram (`bins` bins over [0, 1]) is clipped at
/// clip * count / bins and the clipped excess is spread uniformly over all
/// bins in a single pass. A tile's mapping sends bin b to its normalized
/// cumulative count. Output pixels blend the mappings of the four nearest
/// tile centers bilinearly; pixels beyond the outermost centers clamp to
/// them. Pass clip = +inf to disable clipping.
GrayImage clahe(const GrayImage &img, int tile, double clip, int bins,
                ExecPolicy policy = ExecPolicy::parallel);

/// Global histogram equalization with the same binning and mapping rule as
/// clahe(). Serves as the single-tile reference.
GrayImage equalize_histogram(const GrayImage &img, int bins);

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian low-pass with edge replication.
GrayImage gaussian_lowpass(const GrayImage &img, double sigma,
                           ExecPolicy policy = ExecPolicy::parallel);

/// img - gaussian_lowpass(img, sigma), not renormalized.
GrayImage highpass_residual(const GrayImage &img, double sigma,
                            ExecPolicy policy = ExecPolicy::parallel);

/// High-pass residual min-max rescaled to [0, 1]. A flat residual maps to 0.
GrayImage highpass(const GrayImage &img, double sigma,
                   ExecPolicy policy = ExecPolicy::parallel);

/// Replaces every pixel above mean + n * stddev (population) by that cap.
GrayImage intensity_cap(const GrayImage &img, double n);

/// Applies the enabled steps in the order CLAHE, high-pass, capping.
GrayImage preprocess(const GrayImage &img, const PreprocessConfig &cfg,
                     ExecPolicy policy = ExecPolicy::parallel);

} // namespace piv
