#ifndef VMCLAB_NUMERICS_HPP
#define VMCLAB_NUMERICS_HPP

#include <functional>
#include <span>
#include <vector>

namespace vmclab {

/// Quadrature of f over (0,1] for integrands with a power singularity at 0:
/// Gauss-Legendre panels on dyadic intervals [2^-k-1, 2^-k] and a tail whose
/// local power-law exponent is fitted from the last panels. Exact to ~1e-12
/// for pure powers t^e with e > -1.
double integrate_dyadic(const std::function<double(double)>& f, int levels = 160);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool valid = false;
};

/// Theil-Sen estimator: median of pairwise slopes, intercept the median
/// residual; robust against outliers at the ends of the radius range.
LineFit theil_sen(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> v);

}  // namespace vmclab

#endif
