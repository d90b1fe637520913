#include "fft_plan.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace piv::detail {

namespace {

std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

FftWorkspace::FftWorkspace(int n) : n_(n) {
  const std::size_t real = static_cast<std::size_t>(n) * n;
  real_a_ = fftw_alloc_real(real);
  real_b_ = fftw_alloc_real(real);
  spec_a_ = fftw_alloc_complex(spectrum_size());
  spec_b_ = fftw_alloc_complex(spectrum_size());
  if (!real_a_ || !real_b_ || !spec_a_ || !spec_b_) throw std::bad_alloc();

  // FFTW's planner is not thread-safe; execution on fresh arrays is.
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_2d(n, n, real_a_, spec_a_, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_2d(n, n, spec_a_, real_a_, FFTW_ESTIMATE);
}

FftWorkspace::~FftWorkspace() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }
  fftw_free(real_a_);
  fftw_free(real_b_);
  fftw_free(spec_a_);
  fftw_free(spec_b_);
}

FftWorkspace &FftWorkspace::local(int n) {
  thread_local std::map<int, std::unique_ptr<FftWorkspace>> cache;
  auto &slot = cache[n];
  if (!slot) slot = std::make_unique<FftWorkspace>(n);
  return *slot;
}

void FftWorkspace::forward(double *in, fftw_complex *out) const {
  fftw_execute_dft_r2c(fwd_, in, out);
}

void FftWorkspace::inverse_a() { fftw_execute_dft_c2r(inv_, spec_a_, real_a_); }

} // namespace piv::detail
