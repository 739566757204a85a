#ifndef VMCLAB_REGULARITY_HPP
#define VMCLAB_REGULARITY_HPP

#include <span>
#include <vector>

#include "vmclab/grid.hpp"

namespace vmclab {

// ---------------------------------------------------------------------------
// Exponent-improvement iteration: one pass of the regularity bootstrap maps a
// Hölder exponent s to g(s) = (1-1/p)/2 · s + (p-n)/(2p); iterating from
// α0 = (1-n/p)/4 climbs to the fixed point (p-n)/(p+1).
// ---------------------------------------------------------------------------

struct ExponentParams {
  int n = 2;
  double p = 0.0;  // may be infinity
  double tol = 1e-13;
  int max_iters = 200;
};

struct ExponentIteration {
  double alpha0 = 0.0;
  double fixed_point = 0.0;  // closed form (p-n)/(p+1)
  std::vector<double> iterates;
  bool converged = false;
};

double exponent_map(double s, int n, double p);
ExponentIteration iterate_exponent(const ExponentParams& params);

// ---------------------------------------------------------------------------
// Ψ-decay fits: Ψ(E, B_r) against r in log-log, slope s, implied Hölder
// exponent (s - (n-1))/2.
// ---------------------------------------------------------------------------

struct PsiDecayFit {
  std::vector<double> radii;
  std::vector<double> psi;
  std::vector<int> used;        // indices with Ψ > 0 entering the fit
  bool exact_minimizer = false; // every Ψ vanished
  bool fit_valid = false;
  double slope = 0.0;
  double implied_alpha = 0.0;
  double r_squared = 0.0;
};

/// Radii are physical; each must be >= 8 cells and fit in the domain with the
/// frozen ring. Cut solves run in parallel across radii.
PsiDecayFit psi_decay_fit(const BinaryMask& set, Vec3 center, std::span<const double> radii,
                          const PerimeterWeights& w);

// ---------------------------------------------------------------------------
// Hölder-constant estimation from samples.
// ---------------------------------------------------------------------------

/// Sampled function values (vector-valued) at points; dims <= 3.
struct VectorSamples {
  std::vector<Vec3> points;
  std::vector<Vec3> values;
  int point_dim = 1;
  int value_dim = 1;
};

struct HolderFit {
  double alpha_hat = 1.0;
  double c_hat = 0.0;
  bool degenerate = false;  // all oscillations vanish: C = 0, alpha = 1
};

/// Grid search over alpha (0.01 steps): binned sup-ratio envelope must be
/// flattest at the true exponent; C is the max ratio at the chosen alpha.
/// Requires pair separations spanning at least two decades.
HolderFit holder_fit(const VectorSamples& samples, double alpha_step = 0.01);

/// Scalar function samples over Ω ⊆ R^(n-1) with gradients.
struct FunctionSamples {
  std::vector<Vec3> points;    // x̄
  std::vector<double> values;  // f(x̄)
  std::vector<Vec3> gradients; // ∇f(x̄)
  int dim = 1;                 // n-1
};

struct TransferReport {
  double alpha = 0.0;
  double c_gradient = 0.0;  // fitted Hölder constant of ∇f (base distances)
  double c_normal = 0.0;    // fitted Hölder constant of ν on the graph
  double max_gradient = 0.0;
  double factor = 0.0;      // 2 (1 + M^2)^(1 + alpha/2)
  bool forward_ok = false;  // C_nu <= C_grad
  bool backward_ok = false; // C_grad <= factor * C_nu
};

/// Pairwise-exact transfer inequalities between the Hölder constants of ∇f and
/// of the graph's unit normal.
TransferReport normal_transfer_check(const FunctionSamples& samples, double alpha);

struct CylinderCheck {
  std::vector<double> radii;
  std::vector<double> max_ratio;  // max |z_n| / r^(1+alpha0) over E △ half-space
  double c_fit = 0.0;             // fitted Hölder constant of ∇f at alpha0
  bool pass = false;
};

/// For subgraph sets with a critical point of f at the origin: every cell of
/// E △ {x_n < 0} inside the cylinder C_r must obey |z_n| <= C r^(1+alpha0).
CylinderCheck cylinder_estimate_check(const FunctionSamples& samples, double alpha0,
                                      std::span<const double> radii, double slack = 1e-9);

}  // namespace vmclab

#endif
