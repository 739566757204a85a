#include "vmclab/graph_pmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace vmclab {

GraphProblem GraphProblem::build(
    const GraphDomain& omega, double r,
    const std::function<double(std::array<double, 2>, double)>& H,
    const std::function<double(std::array<double, 2>)>& boundary_data,
    const std::function<double(std::array<double, 2>)>* phi_fn, int samples) {
  if (omega.base_dim != 1 && omega.base_dim != 2)
    throw ConfigError("GraphProblem: base dimension must be 1 or 2");
  if (omega.node_counts[0] < 2 || (omega.base_dim == 2 && omega.node_counts[1] < 2))
    throw ConfigError("GraphProblem: need at least 2 nodes per axis");
  if (!(r > 0)) throw ConfigError("GraphProblem: vertical range must be positive");

  GraphProblem p;
  p.omega = omega;
  p.vrange = r;
  p.samples = samples;
  const int nn = omega.num_nodes();
  p.boundary.assign(nn, 0.0);
  p.h_samples.assign(std::size_t(nn) * samples, 0.0);
  p.w_cumulative.assign(std::size_t(nn) * (samples + 1), 0.0);
  if (phi_fn) p.phi = std::vector<double>(nn, 0.0);

  const double ds = 2.0 * r / samples;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < nn; ++v) {
    const auto y = omega.node_pos(v);
    p.boundary[v] = boundary_data(y);
    if (phi_fn) (*p.phi)[v] = (*phi_fn)(y);
    double acc = 0.0;
    p.w_cumulative[std::size_t(v) * (samples + 1)] = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double s_mid = -r + (k + 0.5) * ds;
      const double hv = H(y, s_mid);
      p.h_samples[std::size_t(v) * samples + k] = hv;
      acc += hv * ds;
      p.w_cumulative[std::size_t(v) * (samples + 1) + k + 1] = acc;
    }
  }
  p.validate();
  return p;
}

void GraphProblem::validate() const {
  const int nn = omega.num_nodes();
  for (int v = 0; v < nn; ++v) {
    if (omega.is_boundary(v) && std::fabs(boundary[v]) >= vrange)
      throw ConfigError("GraphProblem: boundary values must lie inside (-r, r)");
  }
  for (double hv : h_samples)
    if (!std::isfinite(hv)) throw ConfigError("GraphProblem: H sample not finite");
  if (phi) {
    for (int v = 0; v < nn; ++v)
      for (int k = 0; k < samples; ++k)
        if (std::fabs(h_samples[std::size_t(v) * samples + k]) > (*phi)[v] + 1e-12)
          throw ConfigError("GraphProblem: |H(y,s)| exceeds Phi(y) on samples");
  }
}

double GraphProblem::w_at(int node, double t) const {
  const double ds = 2.0 * vrange / samples;
  double u = (t + vrange) / ds;
  u = std::clamp(u, 0.0, double(samples));
  const int k = std::min(int(u), samples - 1);
  const double* w = &w_cumulative[std::size_t(node) * (samples + 1)];
  return w[k] + (u - k) * (w[k + 1] - w[k]);
}

double GraphProblem::w_prime(int node, double t) const {
  const double ds = 2.0 * vrange / samples;
  int k = int((t + vrange) / ds);
  k = std::clamp(k, 0, samples - 1);
  return h_samples[std::size_t(node) * samples + k];
}

double GraphProblem::h_inf() const {
  double m = 0.0;
  for (double hv : h_samples) m = std::max(m, std::fabs(hv));
  return m;
}

namespace {

// Area term on staggered cells; gradient assembled into the same layout.
double area_energy(const GraphProblem& p, const std::vector<double>& f) {
  const GraphDomain& om = p.omega;
  const double h = om.h;
  double area = 0.0;
  if (om.base_dim == 1) {
    for (int i = 0; i + 1 < om.node_counts[0]; ++i) {
      const double s = (f[i + 1] - f[i]) / h;
      area += std::sqrt(1.0 + s * s) * h;
    }
  } else {
    const int nx = om.node_counts[0], ny = om.node_counts[1];
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const double fx = (f[om.node_index(i + 1, j)] - f[om.node_index(i, j)]) / h;
        const double fy = (f[om.node_index(i, j + 1)] - f[om.node_index(i, j)]) / h;
        area += std::sqrt(1.0 + fx * fx + fy * fy) * h * h;
      }
  }
  return area;
}

}  // namespace

double graph_energy(const GraphProblem& p, const std::vector<double>& f) {
  const GraphDomain& om = p.omega;
  const double wscale = om.base_dim == 1 ? om.h : om.h * om.h;
  double sub = 0.0;
  for (int v = 0; v < om.num_nodes(); ++v)
    if (!om.is_boundary(v)) sub += p.w_at(v, f[v]);
  return area_energy(p, f) - sub * wscale;
}

void graph_energy_gradient(const GraphProblem& p, const std::vector<double>& f,
                           std::vector<double>& grad) {
  const GraphDomain& om = p.omega;
  const double h = om.h;
  grad.assign(f.size(), 0.0);
  if (om.base_dim == 1) {
    for (int i = 0; i + 1 < om.node_counts[0]; ++i) {
      const double s = (f[i + 1] - f[i]) / h;
      const double g = s / std::sqrt(1.0 + s * s);
      grad[i] -= g;
      grad[i + 1] += g;
    }
  } else {
    const int nx = om.node_counts[0], ny = om.node_counts[1];
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const double fx = (f[om.node_index(i + 1, j)] - f[om.node_index(i, j)]) / h;
        const double fy = (f[om.node_index(i, j + 1)] - f[om.node_index(i, j)]) / h;
        const double w = std::sqrt(1.0 + fx * fx + fy * fy);
        grad[om.node_index(i, j)] -= (fx + fy) / w * h;
        grad[om.node_index(i + 1, j)] += fx / w * h;
        grad[om.node_index(i, j + 1)] += fy / w * h;
      }
  }
  const double wscale = om.base_dim == 1 ? h : h * h;
  for (int v = 0; v < om.num_nodes(); ++v) {
    if (om.is_boundary(v))
      grad[v] = 0.0;  // Dirichlet nodes are fixed
    else
      grad[v] -= p.w_prime(v, f[v]) * wscale;
  }
}

namespace {

// Direction from the surface-tension part of the Hessian, which is symmetric
// positive definite (the subgraph term has no curvature between the sample
// jumps). 1D assembles the tridiagonal form; 2D applies it matrix-free through
// a Jacobi-preconditioned CG.
void newton_direction_1d(const GraphProblem& p, const std::vector<double>& f,
                         const std::vector<double>& grad, std::vector<double>& dir) {
  const GraphDomain& om = p.omega;
  const int n = om.node_counts[0];
  const double h = om.h;
  std::vector<double> diag(n, 0.0), lower(n - 1, 0.0), rhs(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double s = (f[i + 1] - f[i]) / h;
    const double k = std::pow(1.0 + s * s, -1.5) / h;
    diag[i] += k;
    diag[i + 1] += k;
    lower[i] = -k;
  }
  for (int i = 0; i < n; ++i) {
    if (om.is_boundary(i)) {
      diag[i] = 1.0;
      rhs[i] = 0.0;
      if (i > 0) lower[i - 1] = 0.0;
      if (i + 1 < n) lower[i] = 0.0;
    } else {
      rhs[i] = -grad[i];
    }
  }
  // Thomas solve
  std::vector<double> c(n - 1, 0.0);
  c[0] = lower[0] / diag[0];
  rhs[0] /= diag[0];
  for (int i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i - 1] * c[i - 1];
    if (i < n - 1) c[i] = lower[i] / m;
    rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / m;
  }
  dir.assign(n, 0.0);
  dir[n - 1] = rhs[n - 1];
  for (int i = n - 2; i >= 0; --i) dir[i] = rhs[i] - c[i] * dir[i + 1];
}

void hessian_apply_2d(const GraphProblem& p, const std::vector<double>& f,
                      const std::vector<double>& v, std::vector<double>& out) {
  const GraphDomain& om = p.omega;
  const int nx = om.node_counts[0], ny = om.node_counts[1];
  const double h = om.h;
  out.assign(v.size(), 0.0);
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = om.node_index(i, j), bx = om.node_index(i + 1, j),
                by = om.node_index(i, j + 1);
      const double fx = (f[bx] - f[a]) / h, fy = (f[by] - f[a]) / h;
      const double w2 = 1.0 + fx * fx + fy * fy;
      const double w3 = std::pow(w2, -1.5);
      const double vx = (v[bx] - v[a]) / h, vy = (v[by] - v[a]) / h;
      // d^2 A = h^2/W^3 [ (1+fy^2) vx - fx fy vy ; (1+fx^2) vy - fx fy vx ]
      const double gx = w3 * ((1 + fy * fy) * vx - fx * fy * vy) * h;
      const double gy = w3 * ((1 + fx * fx) * vy - fx * fy * vx) * h;
      out[a] -= gx + gy;
      out[bx] += gx;
      out[by] += gy;
    }
  for (int k = 0; k < om.num_nodes(); ++k)
    if (om.is_boundary(k)) out[k] = v[k];
}

void newton_direction_2d(const GraphProblem& p, const std::vector<double>& f,
                         const std::vector<double>& grad, std::vector<double>& dir) {
  const GraphDomain& om = p.omega;
  const int n = om.num_nodes();
  std::vector<double> rhs(n, 0.0), r(n), z(n), q(n), pr(n);
  for (int i = 0; i < n; ++i) rhs[i] = om.is_boundary(i) ? 0.0 : -grad[i];
  dir.assign(n, 0.0);
  // Jacobi preconditioner from the flat-graph stencil scale
  const double jac = om.h > 0 ? om.h / 4.0 : 1.0;
  hessian_apply_2d(p, f, dir, q);
  for (int i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  for (int i = 0; i < n; ++i) pr[i] = z[i] = jac * r[i];
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];
  double r0 = 0.0;
  for (int i = 0; i < n; ++i) r0 += r[i] * r[i];
  for (int it = 0; it < 400 && rz != 0.0; ++it) {
    hessian_apply_2d(p, f, pr, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) pq += pr[i] * q[i];
    if (pq <= 0) break;
    const double alpha = rz / pq;
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      dir[i] += alpha * pr[i];
      r[i] -= alpha * q[i];
      rr += r[i] * r[i];
    }
    if (rr < 1e-4 * r0) break;
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = jac * r[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) pr[i] = z[i] + beta * pr[i];
  }
}

// The subgraph weight W is piecewise linear with kinks at the sample knots, so
// a node pinned on a knot has one-sided energy derivatives d+ = area - w H(s+)
// and d- = area - w H(s-); it is stationary iff d+ >= 0 >= d-. The effective
// gradient is zero there and otherwise the one-sided slope of the descending
// side, which is also the residual the convergence test uses.
void effective_gradient(const GraphProblem& p, const std::vector<double>& f,
                        std::vector<double>& g) {
  graph_energy_gradient(p, f, g);
  const GraphDomain& om = p.omega;
  const double wscale = om.base_dim == 1 ? om.h : om.h * om.h;
  const double ds = 2.0 * p.vrange / p.samples;
  for (int i = 0; i < om.num_nodes(); ++i) {
    if (om.is_boundary(i)) continue;
    if (std::fabs(std::remainder(f[i] + p.vrange, ds)) > 1e-9) continue;
    const double area_part = g[i] + p.w_prime(i, f[i]) * wscale;
    const double d_plus = area_part - p.w_prime(i, f[i] + 1e-12) * wscale;
    const double d_minus = area_part - p.w_prime(i, f[i] - 0.5 * ds) * wscale;
    if (d_plus >= 0.0 && d_minus <= 0.0) {
      g[i] = 0.0;  // pinned and stationary
    } else if (-d_plus >= d_minus) {
      g[i] = d_plus;  // moving right descends
    } else {
      g[i] = d_minus;  // moving left descends
    }
  }
}

double subgradient_residual(const GraphProblem& p, const std::vector<double>& f,
                            std::vector<double>& scratch) {
  effective_gradient(p, f, scratch);
  double worst = 0.0;
  for (double v : scratch) worst = std::max(worst, std::fabs(v));
  return worst;
}

GraphSolution descend(const GraphProblem& p, std::vector<double> f, double resid_tol,
                      int max_iters) {
  const GraphDomain& om = p.omega;
  const double wscale = om.base_dim == 1 ? om.h : om.h * om.h;
  const double ds = 2.0 * p.vrange / p.samples;
  GraphSolution sol;
  std::vector<double> grad, dir, trial(f.size());
  double energy = graph_energy(p, f);
  sol.energy_trace.push_back(energy);
  effective_gradient(p, f, grad);

  int it = 0;
  for (; it < max_iters; ++it) {
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::fabs(g));
    if (gmax / wscale < resid_tol) {
      sol.converged = true;
      break;
    }

    bool accepted = false;
    // The Newton direction is fast on the smooth part but its coupling can
    // push knot-pinned nodes against their descending side; steepest descent
    // on the effective gradient is sign-consistent there, so it serves as the
    // fallback direction before declaring a stall.
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 0) {
        if (om.base_dim == 1)
          newton_direction_1d(p, f, grad, dir);
        else
          newton_direction_2d(p, f, grad, dir);
      } else {
        for (std::size_t i = 0; i < f.size(); ++i) dir[i] = -grad[i];
      }
      double gd = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) gd += grad[i] * dir[i];
      if (gd >= 0) continue;

      double step = 1.0;
      for (int back = 0; back < 60 && !accepted; ++back) {
        bool in_range = true;
        for (std::size_t i = 0; i < f.size(); ++i) {
          trial[i] = f[i] + step * dir[i];
          if (std::fabs(trial[i]) >= p.vrange) {
            in_range = false;  // escape from (-r, r): reject and damp the step
            break;
          }
        }
        if (in_range) {
          const double etrial = graph_energy(p, trial);
          if (etrial < energy + 1e-4 * step * gd) {  // gd < 0
            f.swap(trial);
            energy = etrial;
            sol.energy_trace.push_back(energy);
            effective_gradient(p, f, grad);
            accepted = true;
            break;
          }
          // kinked subgraph term: stop each node at the first knot it crosses
          // and accept on plain decrease (minimizers sit exactly on knots)
          bool snapped_any = false;
          for (std::size_t i = 0; i < f.size(); ++i) {
            const double b0 = std::floor((f[i] + p.vrange) / ds);
            const double b1 = std::floor((trial[i] + p.vrange) / ds);
            if (b0 != b1) {
              const double knot = -p.vrange + (trial[i] > f[i] ? b0 + 1 : b0) * ds;
              trial[i] = knot;
              snapped_any = true;
            }
          }
          if (snapped_any) {
            const double esnap = graph_energy(p, trial);
            if (esnap < energy) {
              f.swap(trial);
              energy = esnap;
              sol.energy_trace.push_back(energy);
              effective_gradient(p, f, grad);
              accepted = true;
              break;
            }
          }
        }
        step *= 0.5;
      }
    }
    if (!accepted) break;  // stalled at rounding level
  }
  sol.f = std::move(f);
  sol.energy = energy;
  sol.iterations = it;
  if (!sol.converged)
    sol.converged = subgradient_residual(p, sol.f, grad) / wscale < resid_tol * 100.0;
  return sol;
}

}  // namespace

GraphSolution minimize_nonparametric(const GraphProblem& p, int starts, std::uint64_t seed,
                                     double resid_tol, int max_iters) {
  p.validate();
  const GraphDomain& om = p.omega;
  const int nn = om.num_nodes();

  // Start 0: smooth blend of the boundary data (Jacobi passes on the rim
  // values); further starts add seeded smooth noise.
  std::vector<double> base(nn, 0.0);
  for (int v = 0; v < nn; ++v) base[v] = p.boundary[v];
  if (om.base_dim == 1) {
    const int nx = om.node_counts[0];
    for (int i = 0; i < nx; ++i) {
      const double t = double(i) / (nx - 1);
      base[i] = (1.0 - t) * p.boundary[0] + t * p.boundary[nx - 1];
    }
  } else {
    std::vector<double> tmp = base;
    for (int pass = 0; pass < 200; ++pass) {
      for (int j = 1; j + 1 < om.node_counts[1]; ++j)
        for (int i = 1; i + 1 < om.node_counts[0]; ++i)
          tmp[om.node_index(i, j)] =
              0.25 * (base[om.node_index(i - 1, j)] + base[om.node_index(i + 1, j)] +
                      base[om.node_index(i, j - 1)] + base[om.node_index(i, j + 1)]);
      std::swap(base, tmp);
    }
  }

  std::vector<GraphSolution> candidates(starts);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < starts; ++s) {
    std::vector<double> f0 = base;
    if (s > 0) {
      std::mt19937_64 rng(seed + std::uint64_t(s) * 0x9e3779b97f4a7c15ull);
      std::uniform_real_distribution<double> noise(-0.3 * p.vrange, 0.3 * p.vrange);
      for (int v = 0; v < nn; ++v)
        if (!om.is_boundary(v)) f0[v] += noise(rng);
      // smooth the noise so the line search starts in a sane regime
      for (int pass = 0; pass < 6; ++pass) {
        std::vector<double> sm = f0;
        if (om.base_dim == 1) {
          for (int i = 1; i + 1 < om.node_counts[0]; ++i)
            sm[i] = 0.25 * f0[i - 1] + 0.5 * f0[i] + 0.25 * f0[i + 1];
        } else {
          for (int j = 1; j + 1 < om.node_counts[1]; ++j)
            for (int i = 1; i + 1 < om.node_counts[0]; ++i)
              sm[om.node_index(i, j)] =
                  0.5 * f0[om.node_index(i, j)] +
                  0.125 * (f0[om.node_index(i - 1, j)] + f0[om.node_index(i + 1, j)] +
                           f0[om.node_index(i, j - 1)] + f0[om.node_index(i, j + 1)]);
        }
        f0 = std::move(sm);
      }
      for (int v = 0; v < nn; ++v)
        f0[v] = std::clamp(f0[v], -0.95 * p.vrange, 0.95 * p.vrange);
      for (int v = 0; v < nn; ++v)
        if (om.is_boundary(v)) f0[v] = p.boundary[v];
    }
    candidates[s] = descend(p, std::move(f0), resid_tol, max_iters);
  }

  int best = 0;
  for (int s = 1; s < starts; ++s)
    if (candidates[s].energy < candidates[best].energy) best = s;
  return candidates[best];
}

std::vector<double> discrete_mean_curvature(const GraphProblem& p,
                                            const std::vector<double>& f) {
  const GraphDomain& om = p.omega;
  const double h = om.h;
  std::vector<double> div(f.size(), 0.0);
  if (om.base_dim == 1) {
    const int nx = om.node_counts[0];
    for (int i = 1; i + 1 < nx; ++i) {
      const double sl = (f[i] - f[i - 1]) / h, sr = (f[i + 1] - f[i]) / h;
      const double gl = sl / std::sqrt(1.0 + sl * sl), gr = sr / std::sqrt(1.0 + sr * sr);
      div[i] = (gr - gl) / h;
    }
  } else {
    const int nx = om.node_counts[0], ny = om.node_counts[1];
    auto cell = [&](int i, int j, double& gx, double& gy) {
      const double fx = (f[om.node_index(i + 1, j)] - f[om.node_index(i, j)]) / h;
      const double fy = (f[om.node_index(i, j + 1)] - f[om.node_index(i, j)]) / h;
      const double w = std::sqrt(1.0 + fx * fx + fy * fy);
      gx = fx / w;
      gy = fy / w;
    };
    for (int j = 1; j + 1 < ny; ++j)
      for (int i = 1; i + 1 < nx; ++i) {
        double gx0, gy0, gxl, gyl, gxd, gyd;
        cell(i, j, gx0, gy0);
        cell(i - 1, j, gxl, gyl);
        cell(i, j - 1, gxd, gyd);
        div[om.node_index(i, j)] = (gx0 - gxl) / h + (gy0 - gyd) / h;
      }
  }
  return div;
}

DivBoundReport check_divergence_bound(const GraphProblem& p, const GraphSolution& sol,
                                      const std::vector<double>& phi, double q,
                                      double eps_allowed) {
  const GraphDomain& om = p.omega;
  // Precondition: |H| <= Phi on samples.
  for (int v = 0; v < om.num_nodes(); ++v)
    for (int k = 0; k < p.samples; ++k)
      if (std::fabs(p.h_samples[std::size_t(v) * p.samples + k]) > phi[v] + 1e-12)
        throw ConfigError("check_divergence_bound: |H| <= Phi violated on samples");

  const std::vector<double> div = discrete_mean_curvature(p, sol.f);
  const double cell = om.base_dim == 1 ? om.h : om.h * om.h;
  DivBoundReport rep;
  if (std::isinf(q)) {
    for (int v = 0; v < om.num_nodes(); ++v) {
      if (om.is_boundary(v)) continue;
      rep.lhs = std::max(rep.lhs, std::fabs(div[v]));
      rep.rhs = std::max(rep.rhs, phi[v]);
    }
  } else {
    double l = 0.0, r = 0.0;
    for (int v = 0; v < om.num_nodes(); ++v) {
      if (om.is_boundary(v)) continue;
      l += std::pow(std::fabs(div[v]), q) * cell;
      r += std::pow(phi[v], q) * cell;
    }
    rep.lhs = std::pow(l, 1.0 / q);
    rep.rhs = std::pow(r, 1.0 / q);
  }
  rep.slack = rep.rhs > 0 ? std::max(0.0, rep.lhs / rep.rhs - 1.0)
                          : (rep.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + eps_allowed) + 1e-8;
  return rep;
}

C11Report c11_witness_2d(const GraphProblem& p, const GraphSolution& sol,
                         double eps_allowed) {
  const GraphDomain& om = p.omega;
  if (om.base_dim != 1) throw ConfigError("c11_witness_2d: needs a 1D base (n = 2)");
  const int nx = om.node_counts[0];
  const double h = om.h;
  std::vector<double> slope(nx - 1), pos(nx - 1);
  for (int i = 0; i + 1 < nx; ++i) {
    slope[i] = (sol.f[i + 1] - sol.f[i]) / h;
    pos[i] = om.lo[0] + (i + 0.5) * h;
  }
  C11Report rep;
  for (double s : slope) rep.max_slope = std::max(rep.max_slope, std::fabs(s));
  rep.h_inf = p.h_inf();
  rep.predicted = std::pow(1.0 + rep.max_slope * rep.max_slope, 1.5) * rep.h_inf;
  // pairs at >= 4h separation: below that the ratio is discretization noise
  for (int i = 0; i + 1 < int(slope.size()); ++i)
    for (int j = i + 1; j < int(slope.size()); ++j) {
      const double sep = pos[j] - pos[i];
      if (sep < 4.0 * h) continue;
      rep.fitted_lipschitz =
          std::max(rep.fitted_lipschitz, std::fabs(slope[j] - slope[i]) / sep);
    }
  rep.pass = rep.fitted_lipschitz <= rep.predicted * (1.0 + eps_allowed) + 1e-9;
  return rep;
}

}  // namespace vmclab
