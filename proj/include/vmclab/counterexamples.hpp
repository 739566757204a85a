#ifndef VMCLAB_COUNTEREXAMPLES_HPP
#define VMCLAB_COUNTEREXAMPLES_HPP

#include <array>
#include <functional>

#include "vmclab/cut.hpp"
#include "vmclab/grid.hpp"

namespace vmclab {

// ---------------------------------------------------------------------------
// 2D cusp family on (-1,1)^2: E = { x2 < sgn(x1) |x1|^(1+alpha) }. The square
// splits into D1 (|x2| < |x1|^(1+alpha)) and D2 (the rest); the outward unit
// normal of ∂E extends continuously to a unit field V, constant along x2 in
// D1 and along x1 in D2, whose divergence is an explicit curvature with sharp
// L^p integrability threshold (p-2)/(p+1).
// ---------------------------------------------------------------------------

enum class CuspRegion { D1Plus, D1Minus, D2Plus, D2Minus, BoundaryE, BoundaryD };

CuspRegion cusp2d_region(double alpha, double x1, double x2);

BinaryMask cusp2d_set(double alpha, const GridDomain& d);

/// The unit extension V of the outward normal; defined on all of (-1,1)^2.
std::array<double, 2> cusp2d_normal(double alpha, double x1, double x2);

/// Closed-form H = div V; odd under x -> -x. On the branch curves the value
/// is one-sided, decided by `region` (the two curves are null sets).
double cusp2d_curvature(double alpha, double x1, double x2, CuspRegion region);
double cusp2d_curvature(double alpha, double x1, double x2);

/// Sharp exponent alpha_opt(n,p) = (p-n)/(p+1); 1 for p = infinity.
double lp_threshold(int n, double p);

struct LpClassification {
  bool finite = false;
  double threshold = 0.0;
  double integral = 0.0;     // quadrature value when finite, else 0
  double closed_form = 0.0;  // exact antiderivative value when finite
};

/// Exponent test plus dyadic quadrature of the cusp curvature's L^p integral
/// ∫_0^1 t^(1+α-(1-α)p) + t^(1/(1+α) - (1-α)p/(1+α)) dt.
LpClassification cusp2d_lp_classify(double alpha, double p);

// ---------------------------------------------------------------------------
// n-dimensional cusp: E = Ẽ ∪ B with Ẽ = { |x̄|^(1+α) < x_n < 1 } and B the
// ball that closes the top so ∂E is C^1. Curvature bounds come from inscribed
// balls B_{r_x}(z_x) ⊆ E through each point.
// ---------------------------------------------------------------------------

BinaryMask cuspNd_set(int n, double alpha, const GridDomain& d);

/// True if the cell centers of the domain can hold E with margin (E ⋐ U).
bool cuspNd_fits(int n, double alpha, const GridDomain& d, int ring);

struct CuspBall {
  Vec3 center;
  double radius;
};

/// Inscribed ball through height x_n on the axis: x ∈ B_{r_x}(z_x) ⊆ E.
CuspBall cuspNd_ball_data(int n, double alpha, double xn);

/// Radius of the ball closing the top of the cusp.
double cuspNd_cap_radius(double alpha);
Vec3 cuspNd_cap_center(double alpha);

/// Slice radius R_{x_n} = x_n^(1/(1+α)) of Ẽ at height x_n.
double cuspNd_slice_radius(double alpha, double xn);

struct CuspNdClassification {
  bool finite = false;
  double threshold = 0.0;
  double exponent = 0.0;     // integrand exponent of the slice integral
  double integral = 0.0;
  double closed_form = 0.0;
};

/// Classification of ∫_0^1 x^((n-1)/(1+α) - (1-α)p/(1+α)) dx against the
/// threshold α > (p-n)/(p+1).
CuspNdClassification cuspNd_classify(int n, double alpha, double p);

/// Pointwise curvature bound: n/r_x on Ẽ, n/(cap radius) on B, n/eps outside.
double cuspNd_bound(int n, double alpha, Vec3 x, double eps_complement);

/// Largest ball radius fitting between ∂E and the domain boundary, computed
/// by sampling outward normal clearances (0.9 × half the minimum clearance).
double cuspNd_complement_clearance(int n, double alpha, const GridDomain& d);

// ---------------------------------------------------------------------------
// The n = 3 example with bounded curvature whose boundary is C^(1,α) for all
// α < 1 but not C^(1,1): f(x,y) = (x² - y²) sqrt(-log sqrt(x²+y²)).
// ---------------------------------------------------------------------------

double log_example(double s, double x, double y);
std::array<double, 2> log_example_gradient(double s, double x, double y);

/// Max pairwise Lipschitz ratio of ∇f over structured samples at scale delta;
/// grows like sqrt(-log delta), witnessing the C^(1,1) failure.
double log_example_lipschitz_ratio(double s, double delta);

// ---------------------------------------------------------------------------
// Minimality verification for sets whose curvature is the divergence of a
// unit extension of the normal.
// ---------------------------------------------------------------------------

struct DivergenceVerification {
  double max_unit_deviation = 0.0;    // max ||V|-1| over sampled cells
  double max_normal_deviation = 0.0;  // max |V - nu_E| over boundary samples
  bool preconditions_ok = false;
  PerturbationReport perturbations;
};

/// Rasterizes H = div V on cell centers, checks |V| <= 1 on the free region
/// and V = nu_E on the supplied boundary samples, then runs the perturbation
/// oracle for the Massari energy of E under H.
DivergenceVerification verify_divergence_curvature(
    const std::function<Vec3(Vec3)>& V, const std::function<double(Vec3)>& divV,
    const BinaryMask& set, const BinaryMask& free_cells, const PerimeterWeights& w,
    const std::vector<std::pair<Vec3, Vec3>>& boundary_samples, int n_perturbations,
    std::uint64_t seed, double eps_grid);

}  // namespace vmclab

#endif
