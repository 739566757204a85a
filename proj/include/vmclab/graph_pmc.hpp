#ifndef VMCLAB_GRAPH_PMC_HPP
#define VMCLAB_GRAPH_PMC_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vmclab/grid.hpp"

namespace vmclab {

/// Node grid over the base Ω ⊂ R^(n-1), n-1 in {1,2}. Nodes sit at
/// lo + i h; the rim nodes carry Dirichlet data.
struct GraphDomain {
  int base_dim = 1;
  std::array<int, 2> node_counts{2, 1};
  double h = 1.0;
  std::array<double, 2> lo{0.0, 0.0};

  int num_nodes() const { return node_counts[0] * (base_dim == 2 ? node_counts[1] : 1); }
  int node_index(int i, int j = 0) const { return i + node_counts[0] * j; }
  std::array<double, 2> node_pos(int idx) const {
    const int i = idx % node_counts[0], j = idx / node_counts[0];
    return {lo[0] + i * d_h(), lo[1] + j * d_h()};
  }
  double d_h() const { return h; }
  bool is_boundary(int idx) const {
    const int i = idx % node_counts[0], j = idx / node_counts[0];
    if (i == 0 || i == node_counts[0] - 1) return true;
    return base_dim == 2 && (j == 0 || j == node_counts[1] - 1);
  }
};

/// Discretization of the graph-form functional
///   Σ_cells sqrt(1+|∇_h f|²) h^(n-1)  -  Σ_nodes W(y, f(y)) h^(n-1),
/// where W(y,t) = ∫_{-r}^t H(y,s) ds is precomputed per column with
/// sample-level jumps (H is piecewise constant across 'samples' bins).
struct GraphProblem {
  GraphDomain omega;
  double vrange = 1.0;  // r: admissible band (-r, r)
  int samples = 1024;
  std::vector<double> boundary;     // per node; used at rim nodes
  std::vector<double> h_samples;    // node-major, 'samples' bins per column
  std::vector<double> w_cumulative; // node-major, samples+1 knots per column
  std::optional<std::vector<double>> phi;  // |H(y,s)| <= Phi(y)

  static GraphProblem build(const GraphDomain& omega, double r,
                            const std::function<double(std::array<double, 2>, double)>& H,
                            const std::function<double(std::array<double, 2>)>& boundary_data,
                            const std::function<double(std::array<double, 2>)>* phi = nullptr,
                            int samples = 1024);

  double w_at(int node, double t) const;       // interpolated cumulative integral
  double w_prime(int node, double t) const;    // the H sample of t's bin
  double h_inf() const;                        // max |H| over stored samples
  void validate() const;
};

struct GraphSolution {
  std::vector<double> f;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;  // accepted energies, strictly decreasing
};

double graph_energy(const GraphProblem& p, const std::vector<double>& f);
void graph_energy_gradient(const GraphProblem& p, const std::vector<double>& f,
                           std::vector<double>& grad);

/// Damped descent with backtracking line search (Barzilai-Borwein step sizes);
/// iterates that escape (-r, r) are rejected and the step damped. The subgraph
/// term is nonconvex for general H, so several starts run and the best energy
/// wins; for H nonincreasing in s the energy is convex and any start reaches
/// the global minimum.
GraphSolution minimize_nonparametric(const GraphProblem& p, int starts = 5,
                                     std::uint64_t seed = 0, double resid_tol = 1e-5,
                                     int max_iters = 2000);

/// Discrete div(∇f/sqrt(1+|∇f|²)) at interior nodes (0 at the rim), assembled
/// from the same staggered gradients as the energy, so at a solution it equals
/// -H(y, f(y)) up to the solver residual.
std::vector<double> discrete_mean_curvature(const GraphProblem& p,
                                            const std::vector<double>& f);

struct DivBoundReport {
  double lhs = 0.0;    // ||div ∇f/sqrt(1+|∇f|²)||_q
  double rhs = 0.0;    // ||Phi||_q
  double slack = 0.0;  // max(0, lhs/rhs - 1)
  bool pass = false;
};

/// Checks the differential inequality ||div ...||_q <= ||Phi||_q (1 + eps).
DivBoundReport check_divergence_bound(const GraphProblem& p, const GraphSolution& sol,
                                      const std::vector<double>& phi, double q,
                                      double eps_allowed);

struct C11Report {
  double fitted_lipschitz = 0.0;  // max slope of f' over pairs >= 4h apart
  double predicted = 0.0;         // (1+M²)^(3/2) ||H||_inf
  double max_slope = 0.0;         // M
  double h_inf = 0.0;
  bool pass = false;
};

/// n = 2 witness: f' must be Lipschitz with constant (1+M²)^(3/2) ||H||_inf.
C11Report c11_witness_2d(const GraphProblem& p, const GraphSolution& sol,
                         double eps_allowed);

}  // namespace vmclab

#endif
