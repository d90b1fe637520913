#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace piv::detail {

/// Scratch buffers and plans for an n x n real transform. One instance per
/// thread and size; plans are shared and created under a lock.
class FftWorkspace {
public:
  explicit FftWorkspace(int n);
  ~FftWorkspace();
  FftWorkspace(const FftWorkspace &) = delete;
  FftWorkspace &operator=(const FftWorkspace &) = delete;

  static FftWorkspace &local(int n);

  int n() const { return n_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

  double *real_a() { return real_a_; }
  double *real_b() { return real_b_; }
  std::complex<double> *spec_a() { return reinterpret_cast<std::complex<double> *>(spec_a_); }
  std::complex<double> *spec_b() { return reinterpret_cast<std::complex<double> *>(spec_b_); }

  void forward(double *in, fftw_complex *out) const;
  void forward_a() { forward(real_a_, spec_a_); }
  void forward_b() { forward(real_b_, spec_b_); }
  /// Unnormalized inverse of spec_a into real_a (spec_a is destroyed).
  void inverse_a();

private:
  int n_;
  double *real_a_ = nullptr;
  double *real_b_ = nullptr;
  fftw_complex *spec_a_ = nullptr;
  fftw_complex *spec_b_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

} // namespace piv::detail
