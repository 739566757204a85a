// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances and thresholds are pinned in code; runtimes are measured where a
// criterion bounds them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vmclab/barozzi.hpp"
#include "vmclab/counterexamples.hpp"
#include "vmclab/cut.hpp"
#include "vmclab/graph_pmc.hpp"
#include "vmclab/grid.hpp"
#include "vmclab/numerics.hpp"
#include "vmclab/regularity.hpp"

using namespace vmclab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

// --------------------------------------------------------------------------
// 1. Exponent formulas at the listed (n, p), 1e-12 within 200 iterations,
//    under a millisecond each.
// --------------------------------------------------------------------------
Outcome criterion_exponents() {
  Outcome out;
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<int, double>> cases = {
      {2, 3.0}, {2, 5.0}, {3, 4.0}, {3, 10.0}, {2, inf}};
  double worst_ms = 0.0;
  for (auto [n, p] : cases) {
    const auto t0 = Clock::now();
    const ExponentIteration r = iterate_exponent({n, p, 1e-13, 200});
    const double ms = seconds_since(t0) * 1e3;
    worst_ms = std::max(worst_ms, ms);
    const double a0 = std::isinf(p) ? 0.25 : 0.25 * (1.0 - double(n) / p);
    const double star = std::isinf(p) ? 1.0 : (p - n) / (p + 1.0);
    out.require(std::fabs(r.alpha0 - a0) <= 1e-12, "alpha0 formula");
    out.require(std::fabs(r.fixed_point - star) <= 1e-12, "fixed point formula");
    out.require(r.converged && int(r.iterates.size()) <= 201, "convergence in 200");
    out.require(std::fabs(r.iterates.back() - star) <= 1e-12, "iterate accuracy");
    out.require(ms < 1.0, "runtime under 1 ms");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst case %.3f ms", worst_ms);
  out.note(buf);
  return out;
}

// --------------------------------------------------------------------------
// 2. Min-cut equals exhaustive enumeration on 200 random problems with at
//    most 16 free cells, within 1e-9, in under 10 s.
// --------------------------------------------------------------------------
Outcome criterion_oracle_equivalence() {
  Outcome out;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240801);
  int worst_case = -1;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const bool three_d = trial % 4 == 3;
    CutProblem p = oracles::random_problem(three_d ? 3 : 2, three_d ? 2 : 4, rng);
    const auto brute = oracles::enumerate_min_energy(p);
    const CutSolution sol = minimize_massari(p);
    const double gap = std::fabs(sol.energy - brute.min_energy);
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_case = trial;
    }
  }
  const double secs = seconds_since(t0);
  out.require(worst_gap <= 1e-9,
              "energy gap " + std::to_string(worst_gap) + " at trial " +
                  std::to_string(worst_case));
  out.require(secs < 10.0, "runtime " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "200 instances, worst gap %.2e, %.1f s", worst_gap,
                secs);
  out.note(buf);
  return out;
}

// --------------------------------------------------------------------------
// 3. L1 optimality of the constructed curvature at 512^2 within 5% of the
//    discrete perimeter; on the disk, H within 10% of n/r on at least 90% of
//    the cells 3+ cells from the boundary. Under 2 minutes.
// --------------------------------------------------------------------------
Outcome criterion_l1_optimality() {
  Outcome out;
  const auto t0 = Clock::now();
  const GridDomain d = GridDomain::square2d(0.0, 1.0, 512);
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
  BarozziOptions opt;
  opt.with_complement = false;

  {
    const double r = 0.3;
    const BinaryMask disk = rasterize_ball(d, {0.5, 0.5, 0}, r);
    const BarozziResult res = barozzi_construct(disk, w, opt);
    const double per = perimeter(disk, w);
    const double l1 = lp_norm(res.on_set.value, 1.0, &res.on_set.covered).value;
    out.require(std::fabs(l1 - per) / per <= 0.05,
                "disk L1/P = " + std::to_string(l1 / per));
    std::int64_t ok = 0, interior = 0;
    for (std::int64_t c = 0; c < d.cell_count(); ++c) {
      if (!disk.get(c)) continue;
      const Vec3 x = d.center(c);
      if (r - std::hypot(x[0] - 0.5, x[1] - 0.5) < 3 * d.h) continue;
      ++interior;
      if (res.on_set.covered.get(c) &&
          std::fabs(res.on_set.value[c] - d.n / r) < 0.10 * d.n / r)
        ++ok;
    }
    out.require(double(ok) >= 0.9 * double(interior),
                "disk interior n/r coverage " + std::to_string(double(ok) / interior));
    char buf[96];
    std::snprintf(buf, sizeof buf, "disk L1/P %.4f, interior ok %.3f", l1 / per,
                  double(ok) / double(interior));
    out.note(buf);
  }
  {
    const double side = 0.5;
    const BinaryMask sq = rasterize(d, [&](Vec3 x) {
      return std::fabs(x[0] - 0.5) < side / 2 && std::fabs(x[1] - 0.5) < side / 2;
    });
    const BarozziResult res = barozzi_construct(sq, w, opt);
    const double per = perimeter(sq, w);
    const double l1 = lp_norm(res.on_set.value, 1.0, &res.on_set.covered).value;
    out.require(std::fabs(l1 - per) / per <= 0.05,
                "square L1/P = " + std::to_string(l1 / per));
    char buf[64];
    std::snprintf(buf, sizeof buf, "square L1/P %.4f", l1 / per);
    out.note(buf);
  }
  const double secs = seconds_since(t0);
  out.require(secs < 120.0, "runtime " + std::to_string(secs) + " s");
  out.note(std::to_string(int(secs)) + " s");
  return out;
}

// --------------------------------------------------------------------------
// 4. Minimizers contain balls: 50 random (E, ball, lambda) with lambda one
//    schedule step above n/r keep the ball up to a 2-cell layer.
// --------------------------------------------------------------------------
Outcome criterion_ball_containment() {
  Outcome out;
  std::mt19937_64 rng(7);
  int done = 0, failures = 0;
  while (done < 50) {
    const bool three_d = done % 3 == 2;
    const int cells = three_d ? 48 : 96;
    const GridDomain d = three_d ? GridDomain::cube3d(0.0, 1.0, cells)
                                 : GridDomain::square2d(0.0, 1.0, cells);
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(d.n);
    std::uniform_real_distribution<double> uc(0.3, 0.7), ur(0.12, 0.2),
        ux(0.2, 0.8), us(0.05, 0.15);
    const Vec3 center{uc(rng), uc(rng), three_d ? uc(rng) : 0.0};
    const double r = ur(rng);
    BinaryMask e = rasterize_ball(d, center, r);
    const Vec3 c2{ux(rng), ux(rng), three_d ? ux(rng) : 0.0};
    e = e.set_or(rasterize_ball(d, c2, us(rng) + 0.05));
    const Vec3 blo{ux(rng) - 0.1, ux(rng) - 0.1, three_d ? ux(rng) - 0.1 : 0.0};
    const double bw = us(rng) + 0.08;
    e = e.set_or(rasterize(d, [&](Vec3 x) {
      bool in = true;
      for (int a = 0; a < d.n; ++a) in = in && x[a] > blo[a] && x[a] < blo[a] + bw;
      return in;
    }));
    e = e.set_and(interior_cells(d, w.radius() + 1));
    const BinaryMask tracked = rasterize_ball(d, center, r);
    if (!tracked.subset_of(e)) continue;  // the ring clipped the ball: redraw
    ++done;

    const double step = LambdaSchedule::default_for(d).ratio();
    const double lambda = (d.n / r) * step * 1.01;
    const BinaryMask el = solve_cp(e, ScalarField(d, 1.0), lambda, w);
    const BinaryMask inner = rasterize_ball(d, center, r - 2.5 * d.h);
    if (inner.set_minus(el).count() != 0) ++failures;
  }
  out.require(failures == 0, std::to_string(failures) + " containment failures");
  out.note("50 triples across 2D and 3D");
  return out;
}

// --------------------------------------------------------------------------
// 5. 2D counterexample analytics: closed-form divergence vs central
//    differences at 1e-6 relative, odd symmetry and unit modulus at 1e-12.
// --------------------------------------------------------------------------
Outcome criterion_cusp_analytics() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (double alpha : {0.3, 0.5, 0.8}) {
    int points = 0, fd_bad = 0, odd_bad = 0, unit_bad = 0;
    double worst_rel = 0.0;
    while (points < 1000) {
      const double x1 = u(rng), x2 = u(rng);
      const double margin = 0.03;
      const double g = std::pow(std::fabs(x1), 1.0 + alpha);
      if (std::fabs(std::fabs(x2) - g) < margin || std::fabs(x1) < margin ||
          std::fabs(x2) < margin)
        continue;
      ++points;
      const double closed = cusp2d_curvature(alpha, x1, x2);
      const double step = 1e-5;
      const auto vxp = cusp2d_normal(alpha, x1 + step, x2);
      const auto vxm = cusp2d_normal(alpha, x1 - step, x2);
      const auto vyp = cusp2d_normal(alpha, x1, x2 + step);
      const auto vym = cusp2d_normal(alpha, x1, x2 - step);
      const double fd =
          (vxp[0] - vxm[0]) / (2 * step) + (vyp[1] - vym[1]) / (2 * step);
      const double rel = std::fabs(closed - fd) / std::max(1e-30, std::fabs(closed));
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) ++fd_bad;
      if (std::fabs(closed + cusp2d_curvature(alpha, -x1, -x2)) > 1e-12) ++odd_bad;
      const auto v = cusp2d_normal(alpha, x1, x2);
      if (std::fabs(std::hypot(v[0], v[1]) - 1.0) > 1e-12) ++unit_bad;
    }
    out.require(fd_bad == 0, "alpha " + std::to_string(alpha) + ": " +
                                 std::to_string(fd_bad) + " FD mismatches (worst " +
                                 std::to_string(worst_rel) + ")");
    out.require(odd_bad == 0, "odd symmetry violations");
    out.require(unit_bad == 0, "unit modulus violations");
  }
  out.note("3000 interior points");
  return out;
}

// --------------------------------------------------------------------------
// 6. Threshold sharpness: exact classification over the grid, and refinement
//    growth of the rasterized |H|^p masses (>25% per refinement divergent,
//    <5% finite, at distance >= 0.1 from the threshold).
// --------------------------------------------------------------------------
std::vector<double> cusp2d_masses(double alpha, const std::vector<double>& ps, int res) {
  const GridDomain d = GridDomain::square2d(-1.0, 1.0, res);
  std::vector<double> acc(ps.size(), 0.0);
#pragma omp parallel
  {
    std::vector<double> local(ps.size(), 0.0);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < d.cell_count(); ++c) {
      const Vec3 x = d.center(c);
      const double h = std::fabs(cusp2d_curvature(alpha, x[0], x[1]));
      for (std::size_t k = 0; k < ps.size(); ++k) local[k] += std::pow(h, ps[k]);
    }
#pragma omp critical
    for (std::size_t k = 0; k < ps.size(); ++k) acc[k] += local[k];
  }
  for (double& v : acc) v *= d.h * d.h;
  return acc;
}

std::vector<double> cuspNd_masses(double alpha, const std::vector<double>& ps, int res) {
  // Bound field n / r_x on the cusp body, summed per slice; the per-row
  // interval count reproduces the cell-center rasterization exactly.
  const double ext = 1.35;
  const double h = 2.0 * ext / res;
  const int nxy = res;
  const int nz = int(std::ceil(1.0 / h));
  std::vector<double> acc(ps.size(), 0.0);
#pragma omp parallel
  {
    std::vector<double> local(ps.size(), 0.0);
#pragma omp for schedule(static)
    for (int k = 0; k < nz; ++k) {
      const double xn = (k + 0.5) * h;
      if (xn >= 1.0) continue;
      const double big_r = cuspNd_slice_radius(alpha, xn);
      std::int64_t count = 0;
      for (int j = 0; j < nxy; ++j) {
        const double y = -ext + (j + 0.5) * h;
        if (std::fabs(y) >= big_r) continue;
        const double w = std::sqrt(big_r * big_r - y * y);
        const int ilo = int(std::ceil((ext - w) / h - 0.5 + 1e-12));
        const int ihi = int(std::floor((ext + w) / h - 0.5 - 1e-12));
        if (ihi >= ilo) count += ihi - ilo + 1;
      }
      const double value = 3.0 / cuspNd_ball_data(3, alpha, xn).radius;
      for (std::size_t q = 0; q < ps.size(); ++q)
        local[q] += double(count) * std::pow(value, ps[q]);
    }
#pragma omp critical
    for (std::size_t q = 0; q < ps.size(); ++q) acc[q] += local[q];
  }
  for (double& v : acc) v *= h * h * h;
  return acc;
}

Outcome criterion_threshold_sharpness() {
  Outcome out;
  const std::vector<double> ps = {2.5, 3.0, 4.0, 6.0, 10.0};

  int class_bad = 0;
  for (int n : {2, 3})
    for (int k = 1; k <= 19; ++k)
      for (double p : ps) {
        const double alpha = 0.05 * k;
        const bool expected = alpha > (p - n) / (p + 1.0);
        const bool got = n == 2 ? cusp2d_lp_classify(alpha, p).finite
                                : cuspNd_classify(3, alpha, p).finite;
        if (got != expected) ++class_bad;
        if (std::fabs(lp_threshold(n, p) - (p - n) / (p + 1.0)) > 1e-15) ++class_bad;
      }
  out.require(class_bad == 0,
              std::to_string(class_bad) + " classification mismatches");

  int div_bad = 0, fin_bad = 0, div_total = 0, fin_total = 0;
  for (int n : {2, 3}) {
    for (int k = 1; k <= 19; ++k) {
      const double alpha = 0.05 * k;
      const auto m128 =
          n == 2 ? cusp2d_masses(alpha, ps, 128) : cuspNd_masses(alpha, ps, 128);
      const auto m256 =
          n == 2 ? cusp2d_masses(alpha, ps, 256) : cuspNd_masses(alpha, ps, 256);
      const auto m512 =
          n == 2 ? cusp2d_masses(alpha, ps, 512) : cuspNd_masses(alpha, ps, 512);
      for (std::size_t q = 0; q < ps.size(); ++q) {
        const double thr = lp_threshold(n, ps[q]);
        if (std::fabs(alpha - thr) < 0.1) continue;
        const double g1 = m256[q] / m128[q], g2 = m512[q] / m256[q];
        if (alpha < thr) {
          ++div_total;
          if (!(g1 > 1.25 && g2 > 1.25)) ++div_bad;
        } else {
          ++fin_total;
          if (!(g1 < 1.05 && g2 < 1.05)) ++fin_bad;
        }
      }
    }
  }
  out.require(div_bad == 0, std::to_string(div_bad) + "/" +
                                std::to_string(div_total) +
                                " divergent-side growth failures");
  out.require(fin_bad == 0, std::to_string(fin_bad) + "/" +
                                std::to_string(fin_total) +
                                " finite-side stabilization failures");
  char buf[128];
  std::snprintf(
      buf, sizeof buf,
      "classification exact; divergent %d/%d grow >25%%; finite %d/%d stay <5%%",
      div_total - div_bad, div_total, fin_total - fin_bad, fin_total);
  out.note(buf);
  return out;
}

// --------------------------------------------------------------------------
// 7. Minimality of the counterexample sets under 1000 random local flips,
//    slack 3 h^(n-1): the 2D cusp under its explicit divergence curvature and
//    the 3D cusp under the constructed composite curvature.
// --------------------------------------------------------------------------
Outcome criterion_counterexample_minimality() {
  Outcome out;
  {
    const double alpha = 0.5;
    const GridDomain d = GridDomain::square2d(-1.0, 1.0, 512);
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
    const BinaryMask e = cusp2d_set(alpha, d);
    const BinaryMask free_cells = interior_cells(d, w.radius());
    std::vector<std::pair<Vec3, Vec3>> boundary;
    for (double t : {-0.7, -0.3, 0.2, 0.6}) {
      const double x2 = (t > 0 ? 1 : -1) * std::pow(std::fabs(t), 1.0 + alpha);
      const auto nu = cusp2d_normal(alpha, t, x2);
      boundary.push_back({{t, x2, 0.0}, {nu[0], nu[1], 0.0}});
    }
    const auto rep = verify_divergence_curvature(
        [&](Vec3 x) {
          const auto v = cusp2d_normal(alpha, x[0], x[1]);
          return Vec3{v[0], v[1], 0.0};
        },
        [&](Vec3 x) { return cusp2d_curvature(alpha, x[0], x[1]); }, e, free_cells,
        w, boundary, 1000, 2024, 3.0 * d.face_area());
    out.require(rep.preconditions_ok, "2D cusp: V preconditions");
    out.require(rep.perturbations.pass,
                "2D cusp: " + std::to_string(rep.perturbations.improving) +
                    " improving flips (max " +
                    std::to_string(rep.perturbations.max_improvement) + ")");
    char buf[96];
    std::snprintf(buf, sizeof buf, "2D max improvement %.2e vs slack %.2e",
                  rep.perturbations.max_improvement, 3.0 * d.face_area());
    out.note(buf);
  }
  {
    const double alpha = 0.5;
    const double ext = 1.35;
    const double top = 1.0 + 1.0 / (1.0 + alpha) + cuspNd_cap_radius(alpha) + 0.18;
    const GridDomain d =
        GridDomain::box(3, {-ext, -ext, -0.2}, {ext, ext, top}, 2 * ext / 128);
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(3);
    const BinaryMask e = cuspNd_set(3, alpha, d);
    BarozziOptions opt;
    opt.schedule_points = 64;
    opt.coverage_tail = true;
    const BarozziResult res = barozzi_construct(e, w, opt);
    out.require(res.on_set.uncovered == 0,
                std::to_string(res.on_set.uncovered) + " uncovered cells on E");
    CutProblem p{d, res.signed_curvature, e, interior_cells(d, w.radius()), w};
    const PerturbationReport rep =
        verify_minimality(p, e, 1000, 2025, 3.0 * d.face_area());
    out.require(rep.pass, "3D cusp: " + std::to_string(rep.improving) +
                              " improving flips (max " +
                              std::to_string(rep.max_improvement) + ")");
    char buf[96];
    std::snprintf(buf, sizeof buf, "3D max improvement %.2e vs slack %.2e",
                  rep.max_improvement, 3.0 * d.face_area());
    out.note(buf);
  }
  return out;
}

// --------------------------------------------------------------------------
// 8. Psi-decay fits at 1024^2 in under 5 minutes: half-space flagged exact,
//    corner slope 1 +- 0.1 matching (2 - sqrt 2) r, cusp implied alpha in
//    [0.35, 0.65] over dyadic radii of 8..128 cells.
// --------------------------------------------------------------------------
Outcome criterion_psi_decay() {
  Outcome out;
  const auto t0 = Clock::now();
  const GridDomain d = GridDomain::square2d(-1.0, 1.0, 1024);
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
  std::vector<double> radii;
  for (int c = 8; c <= 128; c *= 2) radii.push_back(c * d.h);

  {
    const BinaryMask half = rasterize_halfspace(d, {0, 1, 0}, 0.0);
    const PsiDecayFit fit = psi_decay_fit(half, {0, 0, 0}, radii, w);
    out.require(fit.exact_minimizer, "half-space not flagged exact");
  }
  {
    const BinaryMask corner =
        rasterize(d, [](Vec3 x) { return x[0] < 0 && x[1] < 0; });
    const PsiDecayFit fit = psi_decay_fit(corner, {0, 0, 0}, radii, w);
    out.require(fit.fit_valid, "corner fit invalid");
    out.require(std::fabs(fit.slope - 1.0) <= 0.1,
                "corner slope " + std::to_string(fit.slope));
    const double r_big = radii.back();
    const double analytic = (2.0 - std::sqrt(2.0)) * r_big;
    const double psi_big = fit.psi.back();
    out.require(std::fabs(psi_big - analytic) / analytic < 0.1,
                "corner psi vs (2-sqrt2)r: " + std::to_string(psi_big / analytic));
    char buf[96];
    std::snprintf(buf, sizeof buf, "corner slope %.3f, psi/analytic %.3f", fit.slope,
                  psi_big / analytic);
    out.note(buf);
  }
  {
    const BinaryMask cusp = cusp2d_set(0.5, d);
    const PsiDecayFit fit = psi_decay_fit(cusp, {0, 0, 0}, radii, w);
    out.require(fit.fit_valid, "cusp fit invalid");
    out.require(fit.implied_alpha >= 0.35 && fit.implied_alpha <= 0.65,
                "cusp implied alpha " + std::to_string(fit.implied_alpha));
    char buf[64];
    std::snprintf(buf, sizeof buf, "cusp implied alpha %.3f", fit.implied_alpha);
    out.note(buf);
  }
  const double secs = seconds_since(t0);
  out.require(secs < 300.0, "runtime " + std::to_string(secs) + " s");
  out.note(std::to_string(int(secs)) + " s");
  return out;
}

// --------------------------------------------------------------------------
// 9. Graph PMC: arc accuracy at 512 nodes, divergence bound with slack below
//    0.05 for 20 random bounded curvatures at q = infinity, and the
//    finite-difference gradient check at 1e-6 relative.
// --------------------------------------------------------------------------
GraphDomain pmc_interval(int nodes, double lo, double hi) {
  GraphDomain om;
  om.base_dim = 1;
  om.node_counts = {nodes, 1};
  om.h = (hi - lo) / (nodes - 1);
  om.lo = {lo, 0.0};
  return om;
}

Outcome criterion_graph_pmc() {
  Outcome out;
  const double inf = std::numeric_limits<double>::infinity();
  {
    const GraphDomain om = pmc_interval(512, -0.4, 0.4);
    const GraphProblem p = GraphProblem::build(
        om, 2.0, [](std::array<double, 2>, double) { return 1.0; },
        [](std::array<double, 2> y) { return -0.5 + std::sqrt(1 - y[0] * y[0]); });
    const GraphSolution sol = minimize_nonparametric(p, 1, 0);
    double max_err = 0.0;
    for (int i = 0; i < om.num_nodes(); ++i) {
      const double t = om.node_pos(i)[0];
      max_err =
          std::max(max_err, std::fabs(sol.f[i] - (-0.5 + std::sqrt(1 - t * t))));
    }
    out.require(max_err < 1e-3, "arc nodal error " + std::to_string(max_err));
    char buf[64];
    std::snprintf(buf, sizeof buf, "arc error %.2e", max_err);
    out.note(buf);
  }
  {
    const GraphDomain om = pmc_interval(512, -0.4, 0.4);
    std::mt19937_64 rng(11);
    double worst_slack = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const double m_bound = 0.25 + 1.25 * (trial % 5) / 4.0;
      const std::uint64_t salt = rng();
      const GraphProblem p = GraphProblem::build(
          om, 1.0,
          [&](std::array<double, 2> y, double s) {
            const int key = int(std::floor((y[0] + 0.4) * 9)) * 37 +
                            int(std::floor((s + 1.0) * 4)) + int(salt % 101);
            return m_bound * (((key * 2654435761u) >> 14) % 200 / 100.0 - 1.0);
          },
          [](std::array<double, 2>) { return 0.0; });
      const GraphSolution sol = minimize_nonparametric(p, 3, trial);
      const std::vector<double> phi(om.num_nodes(), m_bound);
      const DivBoundReport rep = check_divergence_bound(p, sol, phi, inf, 0.05);
      worst_slack = std::max(worst_slack, rep.slack);
      if (!rep.pass) ++failures;
    }
    out.require(failures == 0,
                std::to_string(failures) + " divergence-bound failures (worst slack " +
                    std::to_string(worst_slack) + ")");
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst divergence slack %.2e", worst_slack);
    out.note(buf);
  }
  {
    const GraphDomain om = pmc_interval(32, -0.5, 0.5);
    const GraphProblem p = GraphProblem::build(
        om, 1.5,
        [](std::array<double, 2> y, double s) {
          return std::sin(5 * y[0]) * (s > 0.2 ? 1.0 : -0.5);
        },
        [](std::array<double, 2> y) { return 0.2 * y[0]; });
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const double ds = 2 * 1.5 / p.samples;
    std::vector<double> f(om.num_nodes()), grad;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      for (int i = 0; i < om.num_nodes(); ++i) {
        f[i] = om.is_boundary(i) ? 0.2 * om.node_pos(i)[0] : u(rng);
        const double off = std::fmod(f[i] + 1.5, ds);
        if (off < 1e-5 || off > ds - 1e-5) f[i] += 2e-5;
      }
      graph_energy_gradient(p, f, grad);
      for (int i = 1; i + 1 < om.num_nodes(); ++i) {
        const double step = 1e-6, keep = f[i];
        f[i] = keep + step;
        const double ep = graph_energy(p, f);
        f[i] = keep - step;
        const double em = graph_energy(p, f);
        f[i] = keep;
        const double fd = (ep - em) / (2 * step);
        const double rel =
            std::fabs(grad[i] - fd) / std::max(1e-12, std::fabs(grad[i]));
        worst = std::max(worst, rel);
      }
    }
    out.require(worst <= 1e-6, "gradient FD mismatch " + std::to_string(worst));
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst gradient FD rel %.2e", worst);
    out.note(buf);
  }
  return out;
}

// --------------------------------------------------------------------------
// 10. C^{1,1} witness: 10 random bounded piecewise H give near-unit Holder
//     exponents of f' with the Lipschitz bound within 10%; the log-example
//     field shows strictly growing two-scale Lipschitz ratios.
// --------------------------------------------------------------------------
Outcome criterion_c11_witness() {
  Outcome out;
  {
    const GraphDomain om = pmc_interval(512, -0.4, 0.4);
    std::mt19937_64 rng(5150);
    int alpha_bad = 0, lip_bad = 0;
    double worst_alpha = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
      const double m_bound = 0.5 + (trial % 4) * 0.5;
      const std::uint64_t salt = rng();
      const GraphProblem p = GraphProblem::build(
          om, 1.0,
          [&](std::array<double, 2> y, double) {
            const int key = int(std::floor((y[0] + 0.4) * 11)) + int(salt % 83);
            return m_bound * (((key * 2654435761u) >> 12) % 200 / 100.0 - 1.0);
          },
          [](std::array<double, 2>) { return 0.0; });
      const GraphSolution sol = minimize_nonparametric(p, 3, trial);
      const C11Report rep = c11_witness_2d(p, sol, 0.10);
      if (!rep.pass) ++lip_bad;
      VectorSamples s;
      s.point_dim = 1;
      s.value_dim = 1;
      for (int i = 0; i + 1 < om.num_nodes(); i += 4) {
        s.points.push_back({om.lo[0] + (i + 0.5) * om.h, 0, 0});
        s.values.push_back({(sol.f[i + 1] - sol.f[i]) / om.h, 0, 0});
      }
      const HolderFit fit = holder_fit(s);
      worst_alpha = std::min(worst_alpha, fit.alpha_hat);
      if (fit.alpha_hat < 0.95) ++alpha_bad;
    }
    out.require(alpha_bad == 0, std::to_string(alpha_bad) +
                                    " low Holder exponents (worst " +
                                    std::to_string(worst_alpha) + ")");
    out.require(lip_bad == 0, std::to_string(lip_bad) + " Lipschitz bound failures");
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst fitted exponent %.2f", worst_alpha);
    out.note(buf);
  }
  {
    double prev = 0.0;
    bool monotone = true;
    for (int k = 4; k <= 12; ++k) {
      const double ratio = log_example_lipschitz_ratio(0.5, std::pow(2.0, -k));
      if (ratio <= prev) monotone = false;
      prev = ratio;
    }
    out.require(monotone, "two-scale Lipschitz ratio not monotone");
    out.note("log-example ratio grows over 2^-4..2^-12");
  }
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> criteria = {
      {1, "exponent formulas", criterion_exponents},
      {2, "oracle equivalence", criterion_oracle_equivalence},
      {3, "L1 optimality of the constructed curvature", criterion_l1_optimality},
      {4, "ball containment", criterion_ball_containment},
      {5, "2D counterexample analytics", criterion_cusp_analytics},
      {6, "threshold sharpness", criterion_threshold_sharpness},
      {7, "counterexample minimality", criterion_counterexample_minimality},
      {8, "psi-decay fits", criterion_psi_decay},
      {9, "graph PMC", criterion_graph_pmc},
      {10, "C11 witness", criterion_c11_witness},
  };

  int failures = 0;
  for (const Entry& e : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.detail = std::string("exception: ") + ex.what();
    }
    const double secs = seconds_since(t0);
    std::printf("criterion %2d [%s] %s (%.1f s)%s%s\n", e.id,
                out.pass ? "PASS" : "FAIL", e.name, secs,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
