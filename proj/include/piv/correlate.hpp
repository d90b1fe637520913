#pragma once

#include "piv/field.hpp"
#include "piv/parallel.hpp"
#include "piv/postprocess.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace piv {

/// Square block of intensities cut from a frame.
struct Window {
  int side = 0;
  std::vector<double> px;

  Window() = default;
  Window(int side, std::vector<double> px);

  double operator()(int x, int y) const { return px[static_cast<std::size_t>(y) * side + x]; }
};

/// Cuts a side x side block whose top-left pixel is (x0, y0). Reads outside
/// the frame replicate the edge.
Window extract_window(const GrayImage &img, int x0, int y0, int side);

/// Correlation values over integer shifts (dx, dy) in [-h, h]^2, stored
/// row-major with dy selecting the row. Shift (0, 0) sits at index (h, h).
struct CorrelationPlane {
  int half_width = 0;
  std::vector<double> values;

  CorrelationPlane() = default;
  explicit CorrelationPlane(int half_width);

  int side() const { return 2 * half_width + 1; }
  double at(int dx, int dy) const {
    return values[static_cast<std::size_t>(dy + half_width) * side() + (dx + half_width)];
  }
  double &at(int dx, int dy) {
    return values[static_cast<std::size_t>(dy + half_width) * side() + (dx + half_width)];
  }
  /// Restriction to shifts within [-h, h]^2.
  CorrelationPlane cropped(int h) const;
};

/// Direct cross-correlation. For each shift,
///   C(dx, dy) = sum A'(x, y) B'(x + dx, y + dy) / overlap(dx, dy)
/// where A', B' are the windows minus their means and the sum runs over the
/// overlap(dx, dy) = (N - |dx|)(N - |dy|) positions where both exist.
CorrelationPlane dcc(const Window &a, const Window &b, int half_width);

enum class FftPadding {
  /// Pad to 2N: linear correlation over shifts in (-N, N), identical to dcc().
  zero_pad,
  /// No padding: circular correlation over shifts in [-(N-1)/2, (N-1)/2],
  /// divided by N^2.
  circular,
};

/// Frequency-domain correlation: inverse transform of conj(F) * G after mean
/// subtraction, normalized like dcc().
CorrelationPlane fft_correlate(const Window &a, const Window &b,
                               FftPadding padding = FftPadding::zero_pad);

struct Peak {
  int dx = 0;
  int dy = 0;
  double value = 0.0;
  /// Primary peak over the highest value outside its 3x3 neighborhood.
  /// Empty when there is no such value or the primary peak is not positive.
  std::optional<double> peak_ratio;
  bool degenerate = false;
};

/// Integer argmax. Ties prefer the smallest |shift|, then row-major order.
/// A constant plane is degenerate and reports shift (0, 0).
Peak find_peak(const CorrelationPlane &plane);

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
  double peak_value = 0.0;
  std::optional<double> peak_ratio;
  /// The three-point fit was not possible and the integer peak was kept.
  bool degenerate = false;
};

/// Two independent three-point Gaussian fits (x and y) around `peak`:
///   delta = (ln c- - ln c+) / (2 ln c- - 4 ln c0 + 2 ln c+).
/// When the 3x3 neighborhood holds a value <= 0 the samples are lifted by
/// (1e-6 - min) first. A border peak, c0 <= 0, a zero denominator or
/// |delta| >= 1 falls back to the integer peak with `degenerate` set.
Displacement subpixel_gauss3(const CorrelationPlane &plane, const Peak &peak);

enum class Method { dcc, fft };
enum class Deform { none, linear };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);
std::string_view to_string(Deform d);
Deform parse_deform(std::string_view s);

struct PassSpec {
  int window = 32;
  int step = 16;
  Method method = Method::fft;
  Deform deform = Deform::linear;
  /// Largest shift searched for the correlation peak. 0 means window / 3.
  int search_radius = 0;

  int radius() const { return search_radius > 0 ? search_radius : window / 3; }
  /// Throws ParameterError unless 1 <= radius() <= window / 2.
  void validate() const;
};

/// Correlates one window pair with the pass's backend and returns the
/// refined displacement of b relative to a.
Displacement correlate_windows(const Window &a, const Window &b, const PassSpec &spec);

/// One pass over the grid implied by `spec`. Every node is `measured`.
VectorField single_pass(const GrayImage &a, const GrayImage &b, const PassSpec &spec,
                        ExecPolicy policy = ExecPolicy::parallel);

/// Resamples `img` so that each pixel center p reads img at p + d(p), where
/// d is `field` bilinearly interpolated to p. Bilinear pixel interpolation,
/// edge replication outside the frame. Aligns frame b with frame a when
/// `field` predicts the a -> b displacement.
GrayImage deform_image(const GrayImage &img, const VectorField &field,
                       ExecPolicy policy = ExecPolicy::parallel);

/// Iterative refinement. Pass 1 runs plainly. Each later pass validates and
/// hole-fills the previous field with `post`, then either warps frame b with
/// it (linear) or offsets each b window by the rounded predictor (none),
/// correlates, and adds the predictor back. Returns the last pass unvalidated.
VectorField multipass(const GrayImage &a, const GrayImage &b, const std::vector<PassSpec> &passes,
                      const PostprocessConfig &post, ExecPolicy policy = ExecPolicy::parallel);

/// Four FFT passes 64/32/16/16 at 50 % overlap with linear deformation.
std::vector<PassSpec> default_passes();

} // namespace piv
