#include "vmclab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vmclab/cut.hpp"
#include "vmclab/numerics.hpp"

namespace vmclab {

double exponent_map(double s, int n, double p) {
  if (std::isinf(p)) return 0.5 * s + 0.5;
  return 0.5 * (1.0 - 1.0 / p) * s + (p - n) / (2.0 * p);
}

ExponentIteration iterate_exponent(const ExponentParams& params) {
  const int n = params.n;
  const double p = params.p;
  if (!(std::isinf(p) || p > n)) throw ConfigError("iterate_exponent: requires p > n");
  ExponentIteration out;
  out.alpha0 = std::isinf(p) ? 0.25 : 0.25 * (1.0 - double(n) / p);
  out.fixed_point = std::isinf(p) ? 1.0 : (p - n) / (p + 1.0);
  double a = out.alpha0;
  out.iterates.push_back(a);
  for (int k = 0; k < params.max_iters; ++k) {
    if (std::fabs(a - out.fixed_point) < params.tol) {
      out.converged = true;
      break;
    }
    a = exponent_map(a, n, p);
    out.iterates.push_back(a);
  }
  if (std::fabs(a - out.fixed_point) < params.tol) out.converged = true;
  return out;
}

PsiDecayFit psi_decay_fit(const BinaryMask& set, Vec3 center, std::span<const double> radii,
                          const PerimeterWeights& w) {
  const GridDomain& d = set.dom;
  if (radii.size() < 3) throw ConfigError("psi_decay_fit: need at least 3 radii");
  for (double r : radii) {
    if (r < 8.0 * d.h)
      throw ConfigError("psi_decay_fit: radius below the trustworthy minimum of 8 cells");
    if (ball_clipped(d, center, r + (w.radius() + 1) * d.h))
      throw ConfigError("psi_decay_fit: ball plus frozen ring exceeds the domain");
  }

  PsiDecayFit out;
  out.radii.assign(radii.begin(), radii.end());
  out.psi.resize(radii.size());
  const int count = int(radii.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const BinaryMask ball = rasterize_ball(d, center, radii[i]);
    out.psi[i] = psi(set, ball, w);
  }

  std::vector<double> lx, ly;
  for (int i = 0; i < count; ++i) {
    if (out.psi[i] > 0.0) {
      out.used.push_back(i);
      lx.push_back(std::log(out.radii[i]));
      ly.push_back(std::log(out.psi[i]));
    }
  }
  if (out.used.empty()) {
    out.exact_minimizer = true;
    return out;
  }
  if (lx.size() < 3) return out;  // too few usable radii: no slope
  const LineFit fit = theil_sen(lx, ly);
  out.fit_valid = fit.valid;
  out.slope = fit.slope;
  out.implied_alpha = 0.5 * (fit.slope - (d.n - 1));
  out.r_squared = fit.r_squared;
  return out;
}

namespace {

double pair_distance(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

HolderFit holder_fit(const VectorSamples& samples, double alpha_step) {
  const std::size_t m = samples.points.size();
  if (m < 15 || samples.values.size() != m)
    throw ConfigError("holder_fit: need matching point/value samples (>= 15)");

  // Sup-ratio envelope per log-separation bin.
  struct Pair {
    double dist, osc;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m * (m - 1) / 2);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = pair_distance(samples.points[i], samples.points[j],
                                        samples.point_dim);
      if (dist <= 0) continue;
      const double osc = pair_distance(samples.values[i], samples.values[j],
                                       samples.value_dim);
      pairs.push_back({dist, osc});
      dmin = std::min(dmin, dist);
      dmax = std::max(dmax, dist);
    }
  if (pairs.size() < 100) throw ConfigError("holder_fit: need at least 100 sample pairs");
  if (!(dmax / dmin >= 100.0))
    throw ConfigError("holder_fit: separations must span at least two decades");

  const int bins = 24;
  const double llo = std::log(dmin), lhi = std::log(dmax) + 1e-12;
  std::vector<double> env(bins, 0.0), bin_dist(bins, 0.0);
  for (const Pair& pr : pairs) {
    int b = int((std::log(pr.dist) - llo) / (lhi - llo) * bins);
    b = std::clamp(b, 0, bins - 1);
    if (pr.osc > env[b]) {
      env[b] = pr.osc;
      bin_dist[b] = pr.dist;
    }
  }

  HolderFit out;
  // The exponent is a small-scale notion: bounded oscillation ranges flatten
  // the envelope at large separations, so the fit reads the lower part of the
  // log-separation range (all bins when too few are populated there).
  const double window_hi = llo + 0.45 * (lhi - llo);
  std::vector<double> lr, lo;
  for (int b = 0; b < bins; ++b)
    if (env[b] > 0.0 && std::log(bin_dist[b]) <= window_hi) {
      lr.push_back(std::log(bin_dist[b]));
      lo.push_back(std::log(env[b]));
    }
  if (lr.size() < 5) {
    lr.clear();
    lo.clear();
    for (int b = 0; b < bins; ++b)
      if (env[b] > 0.0) {
        lr.push_back(std::log(bin_dist[b]));
        lo.push_back(std::log(env[b]));
      }
  }
  if (lo.size() < 2) {
    out.degenerate = true;  // flat samples: zero oscillation everywhere
    out.alpha_hat = 1.0;
    out.c_hat = 0.0;
    return out;
  }

  double best_alpha = 0.0, best_sse = std::numeric_limits<double>::infinity();
  for (double a = 0.0; a <= 1.0 + 1e-9; a += alpha_step) {
    double mean = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) mean += lo[i] - a * lr[i];
    mean /= double(lr.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      const double e = lo[i] - a * lr[i] - mean;
      sse += e * e;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best_alpha = a;
    }
  }
  out.alpha_hat = best_alpha;
  double c = 0.0;
  for (const Pair& pr : pairs) c = std::max(c, pr.osc / std::pow(pr.dist, best_alpha));
  out.c_hat = c;
  return out;
}

TransferReport normal_transfer_check(const FunctionSamples& samples, double alpha) {
  const std::size_t m = samples.points.size();
  if (m < 2 || samples.values.size() != m || samples.gradients.size() != m)
    throw ConfigError("normal_transfer_check: inconsistent samples");
  TransferReport out;
  out.alpha = alpha;

  const int bd = samples.dim;
  auto normal = [&](std::size_t i) {
    double g2 = 0.0;
    for (int a = 0; a < bd; ++a) g2 += samples.gradients[i][a] * samples.gradients[i][a];
    const double den = std::sqrt(1.0 + g2);
    Vec3 nu{0, 0, 0};
    for (int a = 0; a < bd; ++a) nu[a] = -samples.gradients[i][a] / den;
    nu[bd] = 1.0 / den;
    return nu;
  };

  double c_grad = 0.0, c_nu = 0.0, max_grad = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double g2 = 0.0;
    for (int a = 0; a < bd; ++a) g2 += samples.gradients[i][a] * samples.gradients[i][a];
    max_grad = std::max(max_grad, std::sqrt(g2));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double base = pair_distance(samples.points[i], samples.points[j], bd);
      if (base <= 0) continue;
      const double dg =
          pair_distance(samples.gradients[i], samples.gradients[j], bd);
      c_grad = std::max(c_grad, dg / std::pow(base, alpha));
      const double df = samples.values[i] - samples.values[j];
      const double graph_dist = std::sqrt(base * base + df * df);
      const Vec3 ni = normal(i), nj = normal(j);
      const double dn = pair_distance(ni, nj, bd + 1);
      c_nu = std::max(c_nu, dn / std::pow(graph_dist, alpha));
    }
  out.c_gradient = c_grad;
  out.c_normal = c_nu;
  out.max_gradient = max_grad;
  out.factor = 2.0 * std::pow(1.0 + max_grad * max_grad, 1.0 + alpha / 2.0);
  out.forward_ok = c_nu <= c_grad * (1.0 + 1e-12) + 1e-15;
  out.backward_ok = c_grad <= out.factor * c_nu * (1.0 + 1e-12) + 1e-15;
  return out;
}

CylinderCheck cylinder_estimate_check(const FunctionSamples& samples, double alpha0,
                                      std::span<const double> radii, double slack) {
  const std::size_t m = samples.points.size();
  if (m == 0) throw ConfigError("cylinder_estimate_check: empty samples");
  const int bd = samples.dim;

  // The test center is the origin; require a critical point there.
  double f0 = 0.0, g0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = pair_distance(samples.points[i], Vec3{0, 0, 0}, bd);
    if (r < g0) {
      g0 = r;
      f0 = std::fabs(samples.values[i]);
      double gg = 0.0;
      for (int a = 0; a < bd; ++a) gg += samples.gradients[i][a] * samples.gradients[i][a];
      if (r < 1e-9 && std::sqrt(gg) > 1e-9)
        throw ConfigError("cylinder_estimate_check: no critical point at the center");
    }
  }
  (void)f0;

  double c_fit = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double base = pair_distance(samples.points[i], samples.points[j], bd);
      if (base <= 0) continue;
      const double dg = pair_distance(samples.gradients[i], samples.gradients[j], bd);
      c_fit = std::max(c_fit, dg / std::pow(base, alpha0));
    }

  CylinderCheck out;
  out.c_fit = c_fit;
  out.pass = true;
  for (double r : radii) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double base = pair_distance(samples.points[i], Vec3{0, 0, 0}, bd);
      if (base >= r) continue;
      // Cells of E △ lower half-space over x̄ fill 0 < x_n < f or f < x_n < 0;
      // the extreme height inside the cylinder is |f(x̄)| itself.
      worst = std::max(worst, std::fabs(samples.values[i]));
    }
    out.radii.push_back(r);
    out.max_ratio.push_back(worst / std::pow(r, 1.0 + alpha0));
    if (out.max_ratio.back() > c_fit * (1.0 + slack) + slack) out.pass = false;
  }
  return out;
}

}  // namespace vmclab
