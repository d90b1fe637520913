#include "piv/postprocess.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace piv {

void PostprocessConfig::validate() const {
  if (!(n_global > 0.0)) throw ParameterError("n_global must be > 0");
  if (!(n_local > 0.0)) throw ParameterError("n_local must be > 0");
  if (local_radius < 1) throw ParameterError("local_radius must be >= 1");
  if (median_radius < 1) throw ParameterError("median_radius must be >= 1");
  if (!(tolerance >= 0.0)) throw ParameterError("tolerance must be >= 0");
  if (limits && (limits->u_min > limits->u_max || limits->v_min > limits->v_max))
    throw ParameterError("velocity limits: min exceeds max");
}

namespace {

struct Moments {
  double mean = 0.0;
  double sigma = 0.0;
};

// Population mean and sigma of values[i] over indices with keep(i).
template <class Keep>
Moments moments(const std::vector<double> &values, Keep keep) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (keep(i)) {
      sum += values[i];
      ++n;
    }
  if (n == 0) return {};
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (keep(i)) ss += (values[i] - mean) * (values[i] - mean);
  return {mean, std::sqrt(ss / n)};
}

} // namespace

ValidationResult global_threshold_validate(const VectorField &field, double n, double tolerance) {
  field.check();
  ValidationResult r{field};
  if (field.count(NodeStatus::measured) < 2) {
    r.warning = true;
    return r;
  }
  auto measured = [&](std::size_t i) { return field.status[i] == NodeStatus::measured; };
  const Moments mu = moments(field.u, measured);
  const Moments mv = moments(field.v, measured);
  const double hu = n * mu.sigma + tolerance;
  const double hv = n * mv.sigma + tolerance;

  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!measured(i)) continue;
    const bool out_u = field.u[i] < mu.mean - hu || field.u[i] > mu.mean + hu;
    const bool out_v = field.v[i] < mv.mean - hv || field.v[i] > mv.mean + hv;
    if (out_u || out_v) {
      r.field.status[i] = NodeStatus::outlier;
      ++r.flagged;
    }
  }
  return r;
}

ValidationResult local_stddev_validate(const VectorField &field, int radius, double n,
                                       double tolerance, ExecPolicy policy) {
  field.check();
  if (radius < 1) throw ParameterError("local_stddev_validate: radius must be >= 1");
  ValidationResult r{field};
  if (field.count(NodeStatus::measured) == 0) {
    r.warning = true;
    return r;
  }
  const auto &g = field.grid;
  std::vector<unsigned char> flag(field.size(), 0);

#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t c = g.node_index(ix, iy);
      if (field.status[c] != NodeStatus::measured) continue;

      double su = 0, sv = 0;
      int cnt = 0;
      const int x0 = std::max(0, ix - radius), x1 = std::min(g.nx - 1, ix + radius);
      const int y0 = std::max(0, iy - radius), y1 = std::min(g.ny - 1, iy + radius);
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const std::size_t k = g.node_index(x, y);
          if (k == c || field.status[k] == NodeStatus::outlier) continue;
          su += field.u[k];
          sv += field.v[k];
          ++cnt;
        }
      if (cnt == 0) continue;
      const double mu = su / cnt, mv = sv / cnt;
      double ssu = 0, ssv = 0;
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const std::size_t k = g.node_index(x, y);
          if (k == c || field.status[k] == NodeStatus::outlier) continue;
          ssu += (field.u[k] - mu) * (field.u[k] - mu);
          ssv += (field.v[k] - mv) * (field.v[k] - mv);
        }
      const double hu = n * std::sqrt(ssu / cnt) + tolerance;
      const double hv = n * std::sqrt(ssv / cnt) + tolerance;
      if (std::abs(field.u[c] - mu) > hu || std::abs(field.v[c] - mv) > hv) flag[c] = 1;
    }
  }
  for (std::size_t i = 0; i < flag.size(); ++i)
    if (flag[i]) {
      r.field.status[i] = NodeStatus::outlier;
      ++r.flagged;
    }
  return r;
}

ValidationResult limit_validate(const VectorField &field, const VelocityLimits &lim) {
  field.check();
  ValidationResult r{field};
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.status[i] != NodeStatus::measured) continue;
    if (field.u[i] < lim.u_min || field.u[i] > lim.u_max || field.v[i] < lim.v_min ||
        field.v[i] > lim.v_max) {
      r.field.status[i] = NodeStatus::outlier;
      ++r.flagged;
    }
  }
  return r;
}

VectorField interpolate_holes(const VectorField &field) {
  field.check();
  const auto &g = field.grid;
  std::vector<std::size_t> holes;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field.status[i] == NodeStatus::outlier) holes.push_back(i);
  if (holes.empty()) return field;
  if (holes.size() == field.size())
    throw NumericError("interpolate_holes: no valid node to interpolate from");

  VectorField out = field;
  auto anchor = [&](std::size_t i) { return field.status[i] != NodeStatus::outlier; };
  const double u0 = moments(field.u, anchor).mean;
  const double v0 = moments(field.v, anchor).mean;
  for (std::size_t h : holes) {
    out.u[h] = u0;
    out.v[h] = v0;
  }

  auto neighbor_mean = [&](std::size_t h, double &mu, double &mv) {
    const int ix = static_cast<int>(h % g.nx), iy = static_cast<int>(h / g.nx);
    double su = 0, sv = 0;
    int cnt = 0;
    auto add = [&](int x, int y) {
      if (x < 0 || y < 0 || x >= g.nx || y >= g.ny) return;
      const std::size_t k = g.node_index(x, y);
      su += out.u[k];
      sv += out.v[k];
      ++cnt;
    };
    add(ix - 1, iy);
    add(ix + 1, iy);
    add(ix, iy - 1);
    add(ix, iy + 1);
    mu = su / cnt;
    mv = sv / cnt;
  };

  constexpr int max_sweeps = 10000;
  constexpr double tol = 1e-9;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t h : holes) {
      double mu, mv;
      neighbor_mean(h, mu, mv);
      change = std::max({change, std::abs(mu - out.u[h]), std::abs(mv - out.v[h])});
      out.u[h] = mu;
      out.v[h] = mv;
    }
    if (change < tol) break;
  }
  for (std::size_t h : holes) out.status[h] = NodeStatus::interpolated;
  return out;
}

VectorField median_smooth(const VectorField &field, int radius, ExecPolicy policy) {
  field.check();
  if (radius < 1) throw ParameterError("median_smooth: radius must be >= 1");
  const auto &g = field.grid;
  VectorField out = field;

  auto median = [](std::vector<double> &xs) {
    const std::size_t n = xs.size();
    const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    const double hi = *mid;
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(xs.begin(), mid);
    return 0.5 * (lo + hi);
  };

#pragma omp parallel for schedule(static) if (is_parallel(policy))
  for (int iy = 0; iy < g.ny; ++iy) {
    std::vector<double> bu, bv;
    for (int ix = 0; ix < g.nx; ++ix) {
      bu.clear();
      bv.clear();
      for (int y = std::max(0, iy - radius); y <= std::min(g.ny - 1, iy + radius); ++y)
        for (int x = std::max(0, ix - radius); x <= std::min(g.nx - 1, ix + radius); ++x) {
          bu.push_back(field.u[g.node_index(x, y)]);
          bv.push_back(field.v[g.node_index(x, y)]);
        }
      const std::size_t c = g.node_index(ix, iy);
      out.u[c] = median(bu);
      out.v[c] = median(bv);
    }
  }
  return out;
}

PostprocessReport validate_pipeline(const VectorField &field, const PostprocessConfig &cfg,
                                    ExecPolicy policy) {
  cfg.validate();
  field.check();
  PostprocessReport rep;
  rep.field = field;
  if (field.count(NodeStatus::measured) < 2) {
    rep.warnings.push_back("fewer than two measured nodes; validation skipped");
    return rep;
  }

  VectorField cur = field;
  if (cfg.limits) {
    auto r = limit_validate(cur, *cfg.limits);
    rep.flagged_limits = r.flagged;
    cur = std::move(r.field);
  }
  {
    auto r = global_threshold_validate(cur, cfg.n_global, cfg.tolerance);
    rep.flagged_global = r.flagged;
    if (r.warning) rep.warnings.push_back("global threshold skipped: too few measured nodes");
    cur = std::move(r.field);
  }
  {
    auto r = local_stddev_validate(cur, cfg.local_radius, cfg.n_local, cfg.tolerance, policy);
    rep.flagged_local = r.flagged;
    if (r.warning) rep.warnings.push_back("local filter skipped: no measured nodes");
    cur = std::move(r.field);
  }
  if (cur.count(NodeStatus::outlier) == cur.size()) {
    rep.warnings.push_back("every node flagged; field returned unchanged");
    rep.field = field;
    return rep;
  }
  const std::size_t before = cur.count(NodeStatus::interpolated);
  cur = interpolate_holes(cur);
  rep.interpolated = cur.count(NodeStatus::interpolated) - before;
  if (cfg.smoothing_enabled) cur = median_smooth(cur, cfg.median_radius, policy);
  rep.field = std::move(cur);
  return rep;
}

} // namespace piv
