#include "vmclab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vmclab {

namespace {

// 16-point Gauss-Legendre nodes/weights on (-1, 1).
const double kGaussX[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                           0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
const double kGaussW[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                           0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                           0.0622535239386479, 0.0271524594117541};

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    s += kGaussW[i] * (f(c + h * kGaussX[i]) + f(c - h * kGaussX[i]));
  return s * h;
}

}  // namespace

double integrate_dyadic(const std::function<double(double)>& f, int levels) {
  if (levels < 4) levels = 4;
  double total = 0.0;
  double last = 0.0, prev = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double hi = std::ldexp(1.0, -k), lo = std::ldexp(1.0, -k - 1);
    const double panel = gauss_panel(f, lo, hi);
    total += panel;
    prev = last;
    last = panel;
  }
  // Tail below 2^-levels: panel integrals of t^e scale by 2^-(1+e) per level.
  if (last > 0.0 && prev > 0.0) {
    const double ratio = last / prev;
    if (ratio < 1.0) total += last * ratio / (1.0 - ratio);
  }
  return total;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + m - 1, v.end());
  return 0.5 * (hi + v[m - 1]);
}

LineFit theil_sen(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  if (x.size() != y.size() || x.size() < 2) return fit;
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] != x[j]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) return fit;
  fit.slope = median(slopes);
  std::vector<double> residuals(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) residuals[i] = y[i] - fit.slope * x[i];
  fit.intercept = median(residuals);

  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= double(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += e * e;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.valid = true;
  return fit;
}

}  // namespace vmclab
