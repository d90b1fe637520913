#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the code paths these oracles check.

#include "piv/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Literal double sum of the correlation definition, mean-subtracted and
/// divided by the overlap count. Returns values indexed [dy + h][dx + h].
inline std::vector<std::vector<double>> correlation_sum(const std::vector<double> &a,
                                                        const std::vector<double> &b, int n,
                                                        int h) {
  double ma = 0, mb = 0;
  for (int k = 0; k < n * n; ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n * n;
  mb /= n * n;
  std::vector<std::vector<double>> out(2 * h + 1, std::vector<double>(2 * h + 1, 0.0));
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx) {
      double sum = 0;
      int count = 0;
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const int xb = x + dx, yb = y + dy;
          if (xb < 0 || yb < 0 || xb >= n || yb >= n) continue;
          sum += (a[y * n + x] - ma) * (b[yb * n + xb] - mb);
          ++count;
        }
      out[dy + h][dx + h] = sum / count;
    }
  return out;
}

/// Circular correlation r(dx, dy) = sum a'(x, y) b'((x+dx) mod n, (y+dy) mod n) / n^2.
inline double circular_correlation(const std::vector<double> &a, const std::vector<double> &b,
                                   int n, int dx, int dy) {
  double ma = 0, mb = 0;
  for (int k = 0; k < n * n; ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n * n;
  mb /= n * n;
  double sum = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      sum += (a[y * n + x] - ma) * (b[((y + dy) % n + n) % n * n + ((x + dx) % n + n) % n] - mb);
  return sum / (n * n);
}

/// Vertex of the parabola through (-1, ln cm), (0, ln c0), (1, ln cp),
/// found by solving the 3x3 normal equations of the least-squares fit.
inline double gaussian_fit_offset(double cm, double c0, double cp) {
  const double xs[3] = {-1, 0, 1};
  const double ys[3] = {std::log(cm), std::log(c0), std::log(cp)};
  // Normal equations for y = p2 x^2 + p1 x + p0.
  double m[3][4] = {};
  for (int i = 0; i < 3; ++i) {
    const double row[3] = {xs[i] * xs[i], xs[i], 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
      m[r][3] += row[r] * ys[i];
    }
  }
  for (int p = 0; p < 3; ++p) {
    for (int r = p + 1; r < 3; ++r) {
      const double f = m[r][p] / m[p][p];
      for (int c = p; c < 4; ++c) m[r][c] -= f * m[p][c];
    }
  }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double s = m[r][3];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * sol[c];
    sol[r] = s / m[r][r];
  }
  return -sol[1] / (2.0 * sol[0]);
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t piv = p;
    for (std::size_t r = p + 1; r < n; ++r)
      if (std::abs(a[r][p]) > std::abs(a[piv][p])) piv = r;
    std::swap(a[p], a[piv]);
    std::swap(b[p], b[piv]);
    for (std::size_t r = p + 1; r < n; ++r) {
      const double f = a[r][p] / a[p][p];
      for (std::size_t c = p; c < n; ++c) a[r][c] -= f * a[p][c];
      b[r] -= f * b[p];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

/// Median by full sort; even counts average the middle pair.
inline double sorted_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

/// Global histogram equalization by counting, per pixel, how many pixels
/// fall in the same or a lower bin.
inline std::vector<double> rank_equalize(const std::vector<double> &px, int bins) {
  auto bin = [bins](double v) { return std::min(bins - 1, static_cast<int>(std::floor(v * bins))); };
  std::vector<double> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    std::size_t count = 0;
    for (double q : px)
      if (bin(q) <= bin(px[i])) ++count;
    out[i] = static_cast<double>(count) / px.size();
  }
  return out;
}

inline std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                         double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (double &v : out) v = d(rng);
  return out;
}

inline double rms_error(const piv::VectorField &f, const piv::VectorField &truth) {
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double du = f.u[i] - truth.u[i], dv = f.v[i] - truth.v[i];
    s += du * du + dv * dv;
  }
  return std::sqrt(s / f.size());
}

} // namespace oracle
