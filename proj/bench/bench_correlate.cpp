// Correlation throughput: direct vs FFT per window, serial vs OpenMP per pass.

#include "piv/correlate.hpp"
#include "piv/synth.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

namespace {

piv::SynthPair frames(int size) {
  piv::SynthParams p;
  p.width = p.height = size;
  p.margin = 10;
  p.particle_count = static_cast<int>(0.03 * (size + 20) * (size + 20));
  p.seed = 5;
  return piv::gen_pair(piv::flow::Uniform{3.7, -2.1}, p);
}

void BM_window(benchmark::State &state, piv::Method method) {
  const int n = static_cast<int>(state.range(0));
  const auto s = frames(2 * n);
  const piv::Window a = piv::extract_window(s.a, n / 2, n / 2, n);
  const piv::Window b = piv::extract_window(s.b, n / 2, n / 2, n);
  const piv::PassSpec spec{n, n, method, piv::Deform::none, 0};
  for (auto _ : state) benchmark::DoNotOptimize(piv::correlate_windows(a, b, spec));
}

void BM_dcc(benchmark::State &state) { BM_window(state, piv::Method::dcc); }
void BM_fft(benchmark::State &state) { BM_window(state, piv::Method::fft); }

void BM_single_pass(benchmark::State &state) {
  static const auto s = frames(512);
  const auto policy = state.range(0) ? piv::ExecPolicy::parallel : piv::ExecPolicy::serial;
  const piv::PassSpec spec{32, 16, piv::Method::fft, piv::Deform::none, 0};
  for (auto _ : state) benchmark::DoNotOptimize(piv::single_pass(s.a, s.b, spec, policy));
  state.counters["threads"] = state.range(0) ? omp_get_max_threads() : 1;
}

void BM_multipass(benchmark::State &state) {
  static const auto s = frames(512);
  const piv::PostprocessConfig post;
  for (auto _ : state)
    benchmark::DoNotOptimize(piv::multipass(s.a, s.b, piv::default_passes(), post));
}

} // namespace

BENCHMARK(BM_dcc)->Arg(16)->Arg(24)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_fft)->Arg(16)->Arg(24)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_single_pass)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_multipass)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
