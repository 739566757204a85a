#ifndef VMCLAB_GRID_HPP
#define VMCLAB_GRID_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmclab {

/// Thrown on precondition / configuration errors. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

using Vec3 = std::array<double, 3>;
using Idx3 = std::array<int, 3>;

/// Uniform pixel/voxel box in R^n, n in {2,3}. Cell centers sit at
/// origin + (i + 1/2) h per axis; all lengths are physical (h multiplies in).
struct GridDomain {
  int n = 2;
  Idx3 counts{1, 1, 1};  // counts[2] == 1 when n == 2
  double h = 1.0;
  Vec3 origin{0.0, 0.0, 0.0};

  static GridDomain make(int n, Idx3 counts, double h, Vec3 origin);
  /// Square (lo,hi)^2 with `cells` cells per axis.
  static GridDomain square2d(double lo, double hi, int cells);
  /// Cube (lo,hi)^3 with `cells` cells per axis.
  static GridDomain cube3d(double lo, double hi, int cells);
  /// Box with given corner points; counts derived from h (hi is rounded outward).
  static GridDomain box(int n, Vec3 lo, Vec3 hi, double h);

  std::int64_t cell_count() const {
    return std::int64_t(counts[0]) * counts[1] * counts[2];
  }
  std::int64_t index(int i, int j, int k = 0) const {
    return i + std::int64_t(counts[0]) * (j + std::int64_t(counts[1]) * k);
  }
  Idx3 coords(std::int64_t idx) const {
    int i = int(idx % counts[0]);
    std::int64_t r = idx / counts[0];
    return {i, int(r % counts[1]), int(r / counts[1])};
  }
  bool in_bounds(int i, int j, int k = 0) const {
    return i >= 0 && i < counts[0] && j >= 0 && j < counts[1] && k >= 0 && k < counts[2];
  }
  Vec3 center(std::int64_t idx) const {
    Idx3 c = coords(idx);
    return {origin[0] + (c[0] + 0.5) * h, origin[1] + (c[1] + 0.5) * h,
            origin[2] + (c[2] + 0.5) * h};
  }
  double extent(int axis) const { return counts[axis] * h; }
  double cell_volume() const { return n == 2 ? h * h : h * h * h; }
  /// h^(n-1), the area element of one cut face.
  double face_area() const { return n == 2 ? h : h * h; }

  bool operator==(const GridDomain& o) const {
    return n == o.n && counts == o.counts && h == o.h && origin == o.origin;
  }
};

/// Cell-union stand-in for a measurable set: one bit per cell.
struct BinaryMask {
  GridDomain dom;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  explicit BinaryMask(const GridDomain& d, bool value = false)
      : dom(d), bits(d.cell_count(), value ? 1 : 0) {}

  bool get(std::int64_t idx) const { return bits[idx] != 0; }
  void set(std::int64_t idx, bool v) { bits[idx] = v ? 1 : 0; }
  std::int64_t count() const;
  bool empty() const { return count() == 0; }

  BinaryMask complement() const;
  BinaryMask set_and(const BinaryMask& o) const;
  BinaryMask set_or(const BinaryMask& o) const;
  BinaryMask set_minus(const BinaryMask& o) const;
  /// True if this set is contained in `o` (cellwise).
  bool subset_of(const BinaryMask& o) const;

  bool operator==(const BinaryMask& o) const { return dom == o.dom && bits == o.bits; }
};

/// Cell-wise real values (curvatures, weights, bounds). `unit` is a free-form tag.
struct ScalarField {
  GridDomain dom;
  std::vector<double> values;
  std::string unit;

  ScalarField() = default;
  explicit ScalarField(const GridDomain& d, double fill = 0.0, std::string unit_tag = "")
      : dom(d), values(d.cell_count(), fill), unit(std::move(unit_tag)) {}

  static ScalarField sample(const GridDomain& d, const std::function<double(Vec3)>& f,
                            std::string unit_tag = "");

  double operator[](std::int64_t idx) const { return values[idx]; }
  double& operator[](std::int64_t idx) { return values[idx]; }
  bool all_finite() const;
};

/// Pairwise-interaction stencil for the discrete perimeter. One entry per
/// unordered offset family {o, -o}; weights are calibrated so that axis-aligned
/// interfaces have exact length/area (see cauchy_crofton()).
struct StencilEntry {
  Idx3 offset;
  double weight;
};

struct PerimeterWeights {
  std::string name;
  std::vector<StencilEntry> families;

  /// Max Chebyshev radius of the stencil; the frozen ring must be this wide.
  int radius() const;

  /// Calibrated multi-neighborhood weights: 16-neighborhood in 2D
  /// (axis exact, worst-case anisotropy 1.87%), 26-neighborhood in 3D
  /// (axis exact, worst-case anisotropy 5.72%).
  static PerimeterWeights cauchy_crofton(int n);
  /// Nearest-neighbor stencil; exact for axis-aligned interfaces only.
  static PerimeterWeights axis_only(int n);
  static PerimeterWeights by_name(const std::string& name, int n);
};

// ---------------------------------------------------------------------------
// Operations. All are pure; the OpenMP kernels have serial reference twins
// used by the test suite and the benchmark.
// ---------------------------------------------------------------------------

/// Cut-pair counts per stencil family: pairs {c, c+o} with both cells in the
/// domain, differing mask values, and at least one endpoint in `region`
/// (region == nullptr means the whole domain). Counts are exact integers, so
/// the parallel and serial paths agree bitwise.
std::vector<std::int64_t> cut_pair_counts(const BinaryMask& mask, const BinaryMask* region,
                                          const PerimeterWeights& w);
std::vector<std::int64_t> cut_pair_counts_serial(const BinaryMask& mask,
                                                 const BinaryMask* region,
                                                 const PerimeterWeights& w);

/// Discrete perimeter of `mask` measured in `region` (units of h^(n-1) times
/// physical length/area). Additive over disjoint regions.
double perimeter(const BinaryMask& mask, const PerimeterWeights& w);
double perimeter(const BinaryMask& mask, const BinaryMask& region, const PerimeterWeights& w);
double perimeter_serial(const BinaryMask& mask, const PerimeterWeights& w);
double perimeter_serial(const BinaryMask& mask, const BinaryMask& region,
                        const PerimeterWeights& w);

/// Cell is set iff its center satisfies the predicate. Shapes reaching outside
/// the domain are clipped silently.
BinaryMask rasterize(const GridDomain& d, const std::function<bool(Vec3)>& pred);
BinaryMask rasterize_serial(const GridDomain& d, const std::function<bool(Vec3)>& pred);

BinaryMask rasterize_ball(const GridDomain& d, Vec3 center, double r);
/// Open cylinder C_r(x): |x̄ - c̄| < r and |x_n - c_n| < r.
BinaryMask rasterize_cylinder(const GridDomain& d, Vec3 center, double r);
/// Half-space x·normal < offset.
BinaryMask rasterize_halfspace(const GridDomain& d, Vec3 normal, double offset);
/// Subgraph x_n < f(x̄) of a sampled height function over the first n-1 axes.
BinaryMask rasterize_subgraph(const GridDomain& d, const std::function<double(Vec3)>& f);

/// True if the ball B_r(center) is not fully inside the domain box (the
/// rasterization silently clipped it).
bool ball_clipped(const GridDomain& d, Vec3 center, double r);

struct LpResult {
  double value = 0.0;
  bool empty_region = false;
};

/// (Σ |v|^p h^n)^(1/p) over region cells; max over region for p = infinity.
/// Empty region gives 0 with the flag set.
LpResult lp_norm(const ScalarField& f, double p, const BinaryMask* region = nullptr);
LpResult lp_norm_serial(const ScalarField& f, double p, const BinaryMask* region = nullptr);

/// Σ |v|^p h^n without the final root: the integral tested by the L^p
/// classification witnesses.
double lp_mass(const ScalarField& f, double p, const BinaryMask* region = nullptr);

/// Cells whose full stencil neighborhood stays inside the domain: the largest
/// admissible free region for a cut problem.
BinaryMask interior_cells(const GridDomain& d, int ring);

}  // namespace vmclab

#endif
