#include "vmclab/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vmclab/numerics.hpp"

namespace vmclab {

namespace {

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("cusp: alpha must lie in (0,1)");
}

}  // namespace

CuspRegion cusp2d_region(double alpha, double x1, double x2) {
  check_alpha(alpha);
  const double g = std::pow(std::fabs(x1), 1.0 + alpha);
  if (std::fabs(x2) < g) return x1 > 0 ? CuspRegion::D1Plus : CuspRegion::D1Minus;
  if (std::fabs(x2) > g) return x2 > 0 ? CuspRegion::D2Plus : CuspRegion::D2Minus;
  // On a branch curve; sgn distinguishes ∂E from its reflection.
  return x2 == sgn(x1) * g ? CuspRegion::BoundaryE : CuspRegion::BoundaryD;
}

BinaryMask cusp2d_set(double alpha, const GridDomain& d) {
  check_alpha(alpha);
  if (d.n != 2) throw ConfigError("cusp2d_set: 2D domain required");
  return rasterize(d, [alpha](Vec3 x) {
    return x[1] < sgn(x[0]) * std::pow(std::fabs(x[0]), 1.0 + alpha);
  });
}

std::array<double, 2> cusp2d_normal(double alpha, double x1, double x2) {
  const CuspRegion reg = cusp2d_region(alpha, x1, x2);
  double t;  // the |grad| parameter (1+α)|·|^(exponent) of the active branch
  if (reg == CuspRegion::D1Plus || reg == CuspRegion::D1Minus ||
      reg == CuspRegion::BoundaryE)
    t = (1.0 + alpha) * std::pow(std::fabs(x1), alpha);
  else
    t = (1.0 + alpha) * std::pow(std::fabs(x2), alpha / (1.0 + alpha));
  const double den = std::sqrt(1.0 + t * t);
  return {-t / den, 1.0 / den};
}

double cusp2d_curvature(double alpha, double x1, double x2, CuspRegion region) {
  check_alpha(alpha);
  const double ap1 = 1.0 + alpha;
  switch (region) {
    case CuspRegion::D1Plus:
    case CuspRegion::D1Minus:
    case CuspRegion::BoundaryE: {
      const double ax = std::fabs(x1);
      const double t2 = ap1 * ap1 * std::pow(ax, 2.0 * alpha);
      const double mag =
          alpha * ap1 * std::pow(ax, alpha - 1.0) / std::pow(1.0 + t2, 1.5);
      return x1 > 0 ? -mag : mag;  // DV(x) = -DV(-x)
    }
    default: {
      const double ay = std::fabs(x2);
      const double e = alpha / ap1;
      const double t2 = ap1 * ap1 * std::pow(ay, 2.0 * e);
      const double mag = alpha * ap1 * std::pow(ay, 2.0 * e - 1.0) / std::pow(1.0 + t2, 1.5);
      return x2 > 0 ? -mag : mag;
    }
  }
}

double cusp2d_curvature(double alpha, double x1, double x2) {
  return cusp2d_curvature(alpha, x1, x2, cusp2d_region(alpha, x1, x2));
}

double lp_threshold(int n, double p) {
  if (std::isinf(p)) return 1.0;
  return (p - n) / (p + 1.0);
}

LpClassification cusp2d_lp_classify(double alpha, double p) {
  check_alpha(alpha);
  if (!(p >= 1.0)) throw ConfigError("cusp2d_lp_classify: p must be >= 1");
  LpClassification out;
  out.threshold = lp_threshold(2, p);
  const double e1 = 1.0 + alpha - (1.0 - alpha) * p;
  const double e2 = (1.0 - (1.0 - alpha) * p) / (1.0 + alpha);
  out.finite = alpha > out.threshold;
  if (out.finite) {
    out.closed_form = 1.0 / (e1 + 1.0) + 1.0 / (e2 + 1.0);
    out.integral = integrate_dyadic(
        [e1, e2](double t) { return std::pow(t, e1) + std::pow(t, e2); });
  }
  return out;
}

double cuspNd_cap_radius(double alpha) {
  const double q = 1.0 / (1.0 + alpha);
  return std::sqrt(1.0 + q * q);
}

Vec3 cuspNd_cap_center(double alpha) {
  return {0.0, 0.0, 1.0 + 1.0 / (1.0 + alpha)};
}

double cuspNd_slice_radius(double alpha, double xn) {
  return std::pow(xn, 1.0 / (1.0 + alpha));
}

namespace {

bool cuspNd_inside(int n, double alpha, Vec3 x) {
  // Ẽ: |x̄|^(1+α) < x_n < 1, joined with the C¹-matching cap ball. In 2D the
  // "ball" is a disk in the (x1, x2) plane with x2 playing the height role.
  const double height = x[n - 1];
  double rad2 = 0.0;
  for (int a = 0; a < n - 1; ++a) rad2 += x[a] * x[a];
  if (height > 0.0 && height < 1.0 &&
      std::pow(rad2, 0.5 * (1.0 + alpha)) < height)
    return true;
  const double zc = 1.0 + 1.0 / (1.0 + alpha);
  const double rc = cuspNd_cap_radius(alpha);
  return rad2 + (height - zc) * (height - zc) < rc * rc;
}

}  // namespace

BinaryMask cuspNd_set(int n, double alpha, const GridDomain& d) {
  check_alpha(alpha);
  if (d.n != n) throw ConfigError("cuspNd_set: domain dimension mismatch");
  if (!cuspNd_fits(n, alpha, d, PerimeterWeights::cauchy_crofton(n).radius()))
    throw ConfigError("cuspNd_set: domain too small to contain E with margin");
  return rasterize(d, [n, alpha](Vec3 x) { return cuspNd_inside(n, alpha, x); });
}

bool cuspNd_fits(int n, double alpha, const GridDomain& d, int ring) {
  const double rc = cuspNd_cap_radius(alpha);
  const double zc = 1.0 + 1.0 / (1.0 + alpha);
  const double lateral = std::max(1.0, rc);
  const double margin = (ring + 1.5) * d.h;
  for (int a = 0; a < n - 1; ++a) {
    if (d.origin[a] + margin > -lateral) return false;
    if (d.origin[a] + d.extent(a) - margin < lateral) return false;
  }
  if (d.origin[n - 1] + margin > 0.0) return false;
  if (d.origin[n - 1] + d.extent(n - 1) - margin < zc + rc) return false;
  return true;
}

CuspBall cuspNd_ball_data(int n, double alpha, double xn) {
  check_alpha(alpha);
  (void)n;
  if (!(xn > 0.0 && xn <= 1.0))
    throw ConfigError("cuspNd_ball_data: x_n must lie in (0,1]");
  const double ap1 = 1.0 + alpha;
  const double shift = std::pow(xn, (1.0 - alpha) / ap1) / ap1;
  CuspBall b;
  b.center = {0.0, 0.0, shift + xn};
  b.radius = std::sqrt(shift * shift + std::pow(xn, 2.0 / ap1));
  return b;
}

CuspNdClassification cuspNd_classify(int n, double alpha, double p) {
  check_alpha(alpha);
  if (n < 2) throw ConfigError("cuspNd_classify: n must be >= 2");
  if (!(p >= 1.0)) throw ConfigError("cuspNd_classify: p must be >= 1");
  CuspNdClassification out;
  out.threshold = lp_threshold(n, p);
  out.exponent = (n - 1.0 - (1.0 - alpha) * p) / (1.0 + alpha);
  out.finite = alpha > out.threshold;
  if (out.finite) {
    out.closed_form = 1.0 / (out.exponent + 1.0);
    const double e = out.exponent;
    out.integral = integrate_dyadic([e](double t) { return std::pow(t, e); });
  }
  return out;
}

double cuspNd_bound(int n, double alpha, Vec3 x, double eps_complement) {
  const double height = x[n - 1];
  double rad2 = 0.0;
  for (int a = 0; a < n - 1; ++a) rad2 += x[a] * x[a];
  if (height > 0.0 && height < 1.0 && std::pow(rad2, 0.5 * (1.0 + alpha)) < height)
    return n / cuspNd_ball_data(n, alpha, height).radius;
  if (cuspNd_inside(n, alpha, x)) return n / cuspNd_cap_radius(alpha);
  if (!(eps_complement > 0))
    throw ConfigError("cuspNd_bound: eps_complement must be positive outside E");
  return n / eps_complement;
}

double cuspNd_complement_clearance(int n, double alpha, const GridDomain& d) {
  check_alpha(alpha);
  // Sample ∂E: the cusp profile (radial section height = rho^(1+alpha)) and
  // the cap sphere; clearance = distance to the domain box along the outward
  // normal. E is convex, so 0.9 x half the minimum clearance is a valid eps.
  const int samples = 512;
  double min_clear = std::numeric_limits<double>::infinity();
  Vec3 box_lo = d.origin;
  Vec3 box_hi = {d.origin[0] + d.extent(0), d.origin[1] + d.extent(1),
                 d.n == 3 ? d.origin[2] + d.extent(2) : 0.0};

  auto clearance = [&](Vec3 x, Vec3 nu) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (nu[a] > 1e-12) best = std::min(best, (box_hi[a] - x[a]) / nu[a]);
      if (nu[a] < -1e-12) best = std::min(best, (box_lo[a] - x[a]) / nu[a]);
    }
    return best;
  };

  const double ap1 = 1.0 + alpha;
  for (int i = 1; i <= samples; ++i) {
    const double rho = double(i) / samples;  // radial section of the cusp part
    const double z = std::pow(rho, ap1);
    const double slope = ap1 * std::pow(rho, alpha);
    const double den = std::sqrt(1.0 + slope * slope);
    // profile outward normal (radial, vertical) = (slope, -1)/den
    const Vec3 nu{slope / den, 0.0, -1.0 / den};
    Vec3 x{rho, 0.0, z};
    if (n == 2) {
      x = {rho, z, 0.0};
      min_clear = std::min(min_clear, clearance(x, {nu[0], nu[2], 0.0}));
      min_clear = std::min(min_clear, clearance({-rho, z, 0}, {-nu[0], nu[2], 0.0}));
    } else {
      for (int j = 0; j < 16; ++j) {
        const double th = 2.0 * M_PI * j / 16.0;
        Vec3 xs{rho * std::cos(th), rho * std::sin(th), z};
        Vec3 ns{nu[0] * std::cos(th), nu[0] * std::sin(th), nu[2]};
        min_clear = std::min(min_clear, clearance(xs, ns));
      }
    }
  }
  const Vec3 zc = cuspNd_cap_center(alpha);
  const double rc = cuspNd_cap_radius(alpha);
  for (int i = 0; i < samples; ++i) {
    const double th = M_PI * (i + 0.5) / samples;
    if (n == 2) {
      const Vec3 nu{std::sin(th) * (i % 2 ? 1.0 : -1.0), std::cos(th), 0.0};
      Vec3 x{zc[0] + rc * nu[0], zc[2] + rc * nu[1], 0.0};
      min_clear = std::min(min_clear, clearance(x, nu));
    } else {
      for (int j = 0; j < 16; ++j) {
        const double ph = 2.0 * M_PI * j / 16.0;
        const Vec3 nu{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                      std::cos(th)};
        Vec3 x{zc[0] + rc * nu[0], zc[1] + rc * nu[1], zc[2] + rc * nu[2]};
        min_clear = std::min(min_clear, clearance(x, nu));
      }
    }
  }
  if (!(min_clear > 0))
    throw ConfigError("cuspNd_complement_clearance: E touches the domain boundary");
  return 0.9 * 0.5 * min_clear;
}

double log_example(double s, double x, double y) {
  if (!(s > 0.0) || !(s < 1.0)) throw ConfigError("log_example: s must lie in (0,1)");
  const double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  if (r2 >= s * s) throw ConfigError("log_example: point outside B_s(0)");
  return (x * x - y * y) * std::sqrt(-0.5 * std::log(r2));
}

std::array<double, 2> log_example_gradient(double s, double x, double y) {
  if (!(s > 0.0) || !(s < 1.0)) throw ConfigError("log_example: s must lie in (0,1)");
  const double r2 = x * x + y * y;
  if (r2 == 0.0) return {0.0, 0.0};
  if (r2 >= s * s) throw ConfigError("log_example: point outside B_s(0)");
  const double L = std::sqrt(-0.5 * std::log(r2));
  const double common = (x * x - y * y) / (2.0 * r2 * L);
  return {2.0 * x * L - x * common, -2.0 * y * L - y * common};
}

double log_example_lipschitz_ratio(double s, double delta) {
  // Structured sample: radii delta/2..delta on 16 spokes; max slope of ∇f.
  double best = 0.0;
  std::vector<std::pair<Vec3, std::array<double, 2>>> pts;
  for (int i = 0; i <= 8; ++i) {
    const double r = delta * (0.5 + 0.5 * i / 8.0);
    for (int j = 0; j < 16; ++j) {
      const double th = 2.0 * M_PI * j / 16.0;
      const double x = r * std::cos(th), y = r * std::sin(th);
      pts.push_back({{x, y, 0}, log_example_gradient(s, x, y)});
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i].first[0] - pts[j].first[0];
      const double dy = pts[i].first[1] - pts[j].first[1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist < 1e-15) continue;
      const double dgx = pts[i].second[0] - pts[j].second[0];
      const double dgy = pts[i].second[1] - pts[j].second[1];
      best = std::max(best, std::sqrt(dgx * dgx + dgy * dgy) / dist);
    }
  return best;
}

DivergenceVerification verify_divergence_curvature(
    const std::function<Vec3(Vec3)>& V, const std::function<double(Vec3)>& divV,
    const BinaryMask& set, const BinaryMask& free_cells, const PerimeterWeights& w,
    const std::vector<std::pair<Vec3, Vec3>>& boundary_samples, int n_perturbations,
    std::uint64_t seed, double eps_grid) {
  const GridDomain& d = set.dom;
  DivergenceVerification out;

  for (std::int64_t c = 0; c < d.cell_count(); ++c) {
    if (!free_cells.get(c)) continue;
    const Vec3 v = V(d.center(c));
    double norm2 = 0.0;
    for (int a = 0; a < d.n; ++a) norm2 += v[a] * v[a];
    out.max_unit_deviation =
        std::max(out.max_unit_deviation, std::fabs(std::sqrt(norm2) - 1.0));
  }
  for (const auto& [x, nu] : boundary_samples) {
    const Vec3 v = V(x);
    double dev2 = 0.0;
    for (int a = 0; a < d.n; ++a) dev2 += (v[a] - nu[a]) * (v[a] - nu[a]);
    out.max_normal_deviation = std::max(out.max_normal_deviation, std::sqrt(dev2));
  }
  out.preconditions_ok = out.max_unit_deviation <= 1e-9 && out.max_normal_deviation <= 1e-9;
  if (out.max_unit_deviation > 1e-9)
    throw ConfigError("verify_divergence_curvature: |V| > 1 detected");

  ScalarField H = ScalarField::sample(d, [&](Vec3 x) { return divV(x); }, "1/length");
  CutProblem p{d, std::move(H), set, free_cells, w};
  out.perturbations = verify_minimality(p, set, n_perturbations, seed, eps_grid);
  return out;
}

}  // namespace vmclab
