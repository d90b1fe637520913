#include "piv/preprocess.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace piv {

void PreprocessConfig::validate() const {
  if (clahe_tile < 8) throw ParameterError("clahe_tile must be >= 8");
  if (!(clahe_clip > 1.0)) throw ParameterError("clahe_clip must be > 1");
  if (clahe_bins < 16) throw ParameterError("clahe_bins must be >= 16");
  if (!(hpf_sigma > 0.0)) throw ParameterError("hpf_sigma must be > 0");
  if (!(cap_n > 0.0)) throw ParameterError("cap_n must be > 0");
}

namespace {

int bin_of(double v, int bins) {
  const int b = static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * bins));
  return std::min(b, bins - 1);
}

// Cumulative mapping of one histogram after clipping.
std::vector<double> tile_mapping(std::vector<double> hist, double count, double clip) {
  const auto bins = static_cast<double>(hist.size());
  if (std::isfinite(clip)) {
    const double limit = clip * count / bins;
    double excess = 0.0;
    for (double &h : hist) {
      if (h > limit) {
        excess += h - limit;
        h = limit;
      }
    }
    const double share = excess / bins;
    for (double &h : hist) h += share;
  }
  std::vector<double> map(hist.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < hist.size(); ++b) {
    acc += hist[b];
    map[b] = std::min(acc / count, 1.0);
  }
  return map;
}

// Tile boundaries along one axis: n near-equal segments of `extent`.
std::vector<int> tile_edges(int extent, int n) {
  std::vector<int> edges(n + 1);
  for (int k = 0; k <= n; ++k)
    edges[k] = static_cast<int>((static_cast<long long>(k) * extent) / n);
  return edges;
}

// Position `p` (pixel-center coordinate) relative to the tile centers.
void tile_blend(double p, const std::vector<double> &centers, int &t0, int &t1, double &w) {
  const int n = static_cast<int>(centers.size());
  if (p <= centers.front()) {
    t0 = t1 = 0;
    w = 0.0;
    return;
  }
  if (p >= centers.back()) {
    t0 = t1 = n - 1;
    w = 0.0;
    return;
  }
  t0 = static_cast<int>(std::upper_bound(centers.begin(), centers.end(), p) - centers.begin()) - 1;
  t1 = t0 + 1;
  w = (p - centers[t0]) / (centers[t1] - centers[t0]);
}

} // namespace

GrayImage clahe(const GrayImage &img, int tile, double clip, int bins, ExecPolicy policy) {
  if (img.empty()) throw ParameterError("clahe: empty image");
  if (tile < 1 || tile > std::min(img.width(), img.height()))
    throw ParameterError("clahe: tile " + std::to_string(tile) + " larger than image " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  if (bins < 2) throw ParameterError("clahe: need at least 2 bins");
  if (!(clip > 0.0)) throw ParameterError("clahe: clip must be positive");

  const int tx = img.width() / tile;
  const int ty = img.height() / tile;
  const auto ex = tile_edges(img.width(), tx);
  const auto ey = tile_edges(img.height(), ty);

  std::vector<std::vector<double>> maps(static_cast<std::size_t>(tx) * ty);
#pragma omp parallel for collapse(2) schedule(static) if (is_parallel(policy))
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      std::vector<double> hist(bins, 0.0);
      for (int y = ey[j]; y < ey[j + 1]; ++y)
        for (int x = ex[i]; x < ex[i + 1]; ++x) hist[bin_of(img(x, y), bins)] += 1.0;
      const double count = static_cast<double>(ex[i + 1] - ex[i]) * (ey[j + 1] - ey[j]);
      maps[static_cast<std::size_t>(j) * tx + i] = tile_mapping(std::move(hist), count, clip);
    }
  }

  std::vector<double> cx(tx), cy(ty);
  for (int i = 0; i < tx; ++i) cx[i] = 0.5 * (ex[i] + ex[i + 1]);
  for (int j = 0; j < ty; ++j) cy[j] = 0.5 * (ey[j] + ey[j + 1]);

  GrayImage out(img.width(), img.height());
#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int y = 0; y < img.height(); ++y) {
    int j0, j1;
    double wy;
    tile_blend(y + 0.5, cy, j0, j1, wy);
    for (int x = 0; x < img.width(); ++x) {
      int i0, i1;
      double wx;
      tile_blend(x + 0.5, cx, i0, i1, wx);
      const int b = bin_of(img(x, y), bins);
      auto m = [&](int i, int j) { return maps[static_cast<std::size_t>(j) * tx + i][b]; };
      const double top = (1 - wx) * m(i0, j0) + wx * m(i1, j0);
      const double bottom = (1 - wx) * m(i0, j1) + wx * m(i1, j1);
      out(x, y) = std::clamp((1 - wy) * top + wy * bottom, 0.0, 1.0);
    }
  }
  return out;
}

GrayImage equalize_histogram(const GrayImage &img, int bins) {
  if (img.empty()) throw ParameterError("equalize_histogram: empty image");
  std::vector<double> hist(bins, 0.0);
  for (double v : img.pixels()) hist[bin_of(v, bins)] += 1.0;
  const auto map = tile_mapping(std::move(hist), static_cast<double>(img.size()),
                                std::numeric_limits<double>::infinity());
  GrayImage out(img.width(), img.height());
  auto dst = out.pixels();
  auto src = img.pixels();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = map[bin_of(src[k], bins)];
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double &t : k) t /= sum;
  return k;
}

GrayImage gaussian_lowpass(const GrayImage &img, double sigma, ExecPolicy policy) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int w = img.width(), h = img.height();

  GrayImage tmp(w, h), out(w, h);
#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += k[t + r] * img.clamped(x + t, y);
      tmp(x, y) = acc;
    }
#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += k[t + r] * tmp.clamped(x, y + t);
      out(x, y) = acc;
    }
  return out;
}

GrayImage highpass_residual(const GrayImage &img, double sigma, ExecPolicy policy) {
  const GrayImage low = gaussian_lowpass(img, sigma, policy);
  GrayImage out(img.width(), img.height());
  auto dst = out.pixels();
  auto a = img.pixels();
  auto b = low.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] - b[i];
  return out;
}

GrayImage highpass(const GrayImage &img, double sigma, ExecPolicy policy) {
  GrayImage res = highpass_residual(img, sigma, policy);
  auto px = res.pixels();
  if (px.empty()) return res;
  const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
  const double min = *lo, range = *hi - *lo;
  for (double &v : px) v = range > 0.0 ? (v - min) / range : 0.0;
  return res;
}

GrayImage intensity_cap(const GrayImage &img, double n) {
  if (!(n > 0.0)) throw ParameterError("intensity_cap: n must be > 0");
  auto src = img.pixels();
  if (src.empty()) return img;
  const double count = static_cast<double>(src.size());
  const double mean = std::accumulate(src.begin(), src.end(), 0.0) / count;
  double var = 0.0;
  for (double v : src) var += (v - mean) * (v - mean);
  const double cap = mean + n * std::sqrt(var / count);

  GrayImage out = img;
  for (double &v : out.pixels())
    if (v > cap) v = cap;
  return out;
}

GrayImage preprocess(const GrayImage &img, const PreprocessConfig &cfg, ExecPolicy policy) {
  cfg.validate();
  GrayImage out = img;
  if (cfg.clahe_enabled) out = clahe(out, cfg.clahe_tile, cfg.clahe_clip, cfg.clahe_bins, policy);
  if (cfg.hpf_enabled) out = highpass(out, cfg.hpf_sigma, policy);
  if (cfg.cap_enabled) out = intensity_cap(out, cfg.cap_n);
  return out;
}

} // namespace piv
