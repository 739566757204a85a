#include "vmclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vmclab {

GridDomain GridDomain::make(int n, Idx3 counts, double h, Vec3 origin) {
  if (n != 2 && n != 3) throw ConfigError("GridDomain: dimension must be 2 or 3");
  if (h <= 0) throw ConfigError("GridDomain: spacing h must be positive");
  if (n == 2) counts[2] = 1;
  for (int a = 0; a < n; ++a)
    if (counts[a] < 1) throw ConfigError("GridDomain: cell counts must be >= 1");
  GridDomain d;
  d.n = n;
  d.counts = counts;
  d.h = h;
  d.origin = origin;
  if (n == 2) d.origin[2] = 0.0;
  return d;
}

GridDomain GridDomain::square2d(double lo, double hi, int cells) {
  if (hi <= lo) throw ConfigError("GridDomain: hi must exceed lo");
  return make(2, {cells, cells, 1}, (hi - lo) / cells, {lo, lo, 0.0});
}

GridDomain GridDomain::cube3d(double lo, double hi, int cells) {
  if (hi <= lo) throw ConfigError("GridDomain: hi must exceed lo");
  return make(3, {cells, cells, cells}, (hi - lo) / cells, {lo, lo, lo});
}

GridDomain GridDomain::box(int n, Vec3 lo, Vec3 hi, double h) {
  Idx3 counts{1, 1, 1};
  for (int a = 0; a < n; ++a) {
    if (hi[a] <= lo[a]) throw ConfigError("GridDomain: hi must exceed lo");
    counts[a] = std::max(1, int(std::ceil((hi[a] - lo[a]) / h - 1e-9)));
  }
  return make(n, counts, h, lo);
}

std::int64_t BinaryMask::count() const {
  std::int64_t c = 0;
  for (std::uint8_t b : bits) c += b;
  return c;
}

BinaryMask BinaryMask::complement() const {
  BinaryMask r(dom);
  for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] ? 0 : 1;
  return r;
}

BinaryMask BinaryMask::set_and(const BinaryMask& o) const {
  if (!(dom == o.dom)) throw ConfigError("BinaryMask: domain mismatch");
  BinaryMask r(dom);
  for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] & o.bits[i];
  return r;
}

BinaryMask BinaryMask::set_or(const BinaryMask& o) const {
  if (!(dom == o.dom)) throw ConfigError("BinaryMask: domain mismatch");
  BinaryMask r(dom);
  for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] | o.bits[i];
  return r;
}

BinaryMask BinaryMask::set_minus(const BinaryMask& o) const {
  if (!(dom == o.dom)) throw ConfigError("BinaryMask: domain mismatch");
  BinaryMask r(dom);
  for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] & (o.bits[i] ^ 1);
  return r;
}

bool BinaryMask::subset_of(const BinaryMask& o) const {
  if (!(dom == o.dom)) throw ConfigError("BinaryMask: domain mismatch");
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] && !o.bits[i]) return false;
  return true;
}

ScalarField ScalarField::sample(const GridDomain& d, const std::function<double(Vec3)>& f,
                                std::string unit_tag) {
  ScalarField r(d, 0.0, std::move(unit_tag));
  const std::int64_t nc = d.cell_count();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nc; ++i) r.values[i] = f(d.center(i));
  return r;
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

int PerimeterWeights::radius() const {
  int r = 0;
  for (const auto& e : families)
    for (int a = 0; a < 3; ++a) r = std::max(r, std::abs(e.offset[a]));
  return r;
}

PerimeterWeights PerimeterWeights::cauchy_crofton(int n) {
  PerimeterWeights w;
  if (n == 2) {
    w.name = "cc16";
    // Axis weight solves sqrt(1+a^2) + (2+a)/sqrt(5) = 2: axis directions are
    // exact and the over/undershoot on [0, atan(1/2)] is balanced at 1.87%.
    const double a = (1.0 - std::sqrt(5.0) + std::sqrt(25.0 - 10.0 * std::sqrt(5.0))) / 2.0;
    const double k = 0.11;
    const double b = (1.0 - a - 6.0 * k) / 2.0;
    w.families = {{{1, 0, 0}, a},  {{0, 1, 0}, a},  {{1, 1, 0}, b},  {{1, -1, 0}, b},
                  {{2, 1, 0}, k},  {{1, 2, 0}, k},  {{-1, 2, 0}, k}, {{2, -1, 0}, k}};
  } else if (n == 3) {
    w.name = "cc26";
    // Min-max balanced under the axis-exactness constraint; worst-case
    // anisotropy over the sphere is 5.72%.
    const double b3 = 0.1216, c3 = 0.1064;
    const double a3 = 1.0 - 4.0 * b3 - 4.0 * c3;
    w.families = {{{1, 0, 0}, a3},  {{0, 1, 0}, a3},  {{0, 0, 1}, a3},  {{1, 1, 0}, b3},
                  {{1, -1, 0}, b3}, {{0, 1, 1}, b3},  {{1, 0, 1}, b3},  {{-1, 0, 1}, b3},
                  {{0, -1, 1}, b3}, {{1, 1, 1}, c3},  {{1, -1, 1}, c3}, {{-1, 1, 1}, c3},
                  {{-1, -1, 1}, c3}};
  } else {
    throw ConfigError("PerimeterWeights: dimension must be 2 or 3");
  }
  return w;
}

PerimeterWeights PerimeterWeights::axis_only(int n) {
  PerimeterWeights w;
  w.name = n == 2 ? "axis4" : "axis6";
  w.families = {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}};
  if (n == 3) w.families.push_back({{0, 0, 1}, 1.0});
  return w;
}

PerimeterWeights PerimeterWeights::by_name(const std::string& name, int n) {
  if (name == "cc16" || name == "cc26" || name == "cauchy-crofton")
    return cauchy_crofton(n);
  if (name == "axis4" || name == "axis6" || name == "axis") return axis_only(n);
  throw ConfigError("PerimeterWeights: unknown stencil name '" + name + "'");
}

namespace {

// Counts for one family. The loop over cells visits each unordered pair once
// since only the +offset neighbor is inspected.
template <bool kParallel>
std::int64_t count_family(const BinaryMask& mask, const BinaryMask* region, Idx3 off) {
  const GridDomain& d = mask.dom;
  const int nx = d.counts[0], ny = d.counts[1], nz = d.counts[2];
  const std::int64_t stride =
      off[0] + std::int64_t(nx) * (off[1] + std::int64_t(ny) * off[2]);
  const int ilo = std::max(0, -off[0]), ihi = nx - std::max(0, off[0]);
  const int jlo = std::max(0, -off[1]), jhi = ny - std::max(0, off[1]);
  const int klo = std::max(0, -off[2]), khi = nz - std::max(0, off[2]);
  if (ilo >= ihi || jlo >= jhi || klo >= khi) return 0;

  std::int64_t total = 0;
  const std::uint8_t* m = mask.bits.data();
  const std::uint8_t* rg = region ? region->bits.data() : nullptr;
#pragma omp parallel for collapse(2) reduction(+ : total) schedule(static) if (kParallel)
  for (int k = klo; k < khi; ++k) {
    for (int j = jlo; j < jhi; ++j) {
      const std::int64_t row = d.index(0, j, k);
      std::int64_t cnt = 0;
      for (int i = ilo; i < ihi; ++i) {
        const std::int64_t c = row + i;
        if (m[c] != m[c + stride] && (!rg || rg[c] || rg[c + stride])) ++cnt;
      }
      total += cnt;
    }
  }
  return total;
}

std::vector<std::int64_t> counts_impl(const BinaryMask& mask, const BinaryMask* region,
                                      const PerimeterWeights& w, bool parallel) {
  if (region && !(region->dom == mask.dom))
    throw ConfigError("perimeter: mask and region domains differ");
  std::vector<std::int64_t> counts(w.families.size(), 0);
  for (std::size_t f = 0; f < w.families.size(); ++f)
    counts[f] = parallel ? count_family<true>(mask, region, w.families[f].offset)
                         : count_family<false>(mask, region, w.families[f].offset);
  return counts;
}

double weighted_perimeter(const std::vector<std::int64_t>& counts, const PerimeterWeights& w,
                          double face_area) {
  double s = 0.0;
  for (std::size_t f = 0; f < counts.size(); ++f) s += w.families[f].weight * counts[f];
  return s * face_area;
}

}  // namespace

std::vector<std::int64_t> cut_pair_counts(const BinaryMask& mask, const BinaryMask* region,
                                          const PerimeterWeights& w) {
  return counts_impl(mask, region, w, true);
}

std::vector<std::int64_t> cut_pair_counts_serial(const BinaryMask& mask,
                                                 const BinaryMask* region,
                                                 const PerimeterWeights& w) {
  return counts_impl(mask, region, w, false);
}

double perimeter(const BinaryMask& mask, const PerimeterWeights& w) {
  return weighted_perimeter(cut_pair_counts(mask, nullptr, w), w, mask.dom.face_area());
}

double perimeter(const BinaryMask& mask, const BinaryMask& region, const PerimeterWeights& w) {
  return weighted_perimeter(cut_pair_counts(mask, &region, w), w, mask.dom.face_area());
}

double perimeter_serial(const BinaryMask& mask, const PerimeterWeights& w) {
  return weighted_perimeter(cut_pair_counts_serial(mask, nullptr, w), w,
                            mask.dom.face_area());
}

double perimeter_serial(const BinaryMask& mask, const BinaryMask& region,
                        const PerimeterWeights& w) {
  return weighted_perimeter(cut_pair_counts_serial(mask, &region, w), w,
                            mask.dom.face_area());
}

BinaryMask rasterize(const GridDomain& d, const std::function<bool(Vec3)>& pred) {
  BinaryMask m(d);
  const std::int64_t nc = d.cell_count();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nc; ++i) m.bits[i] = pred(d.center(i)) ? 1 : 0;
  return m;
}

BinaryMask rasterize_serial(const GridDomain& d, const std::function<bool(Vec3)>& pred) {
  BinaryMask m(d);
  const std::int64_t nc = d.cell_count();
  for (std::int64_t i = 0; i < nc; ++i) m.bits[i] = pred(d.center(i)) ? 1 : 0;
  return m;
}

BinaryMask rasterize_ball(const GridDomain& d, Vec3 center, double r) {
  const double r2 = r * r;
  const int n = d.n;
  return rasterize(d, [=](Vec3 x) {
    double s = 0;
    for (int a = 0; a < n; ++a) s += (x[a] - center[a]) * (x[a] - center[a]);
    return s < r2;
  });
}

BinaryMask rasterize_cylinder(const GridDomain& d, Vec3 center, double r) {
  const int n = d.n;
  return rasterize(d, [=](Vec3 x) {
    double s = 0;
    for (int a = 0; a < n - 1; ++a) s += (x[a] - center[a]) * (x[a] - center[a]);
    return s < r * r && std::fabs(x[n - 1] - center[n - 1]) < r;
  });
}

BinaryMask rasterize_halfspace(const GridDomain& d, Vec3 normal, double offset) {
  const int n = d.n;
  return rasterize(d, [=](Vec3 x) {
    double s = 0;
    for (int a = 0; a < n; ++a) s += x[a] * normal[a];
    return s < offset;
  });
}

BinaryMask rasterize_subgraph(const GridDomain& d, const std::function<double(Vec3)>& f) {
  const int n = d.n;
  return rasterize(d, [&, n](Vec3 x) { return x[n - 1] < f(x); });
}

bool ball_clipped(const GridDomain& d, Vec3 center, double r) {
  for (int a = 0; a < d.n; ++a) {
    if (center[a] - r < d.origin[a]) return true;
    if (center[a] + r > d.origin[a] + d.extent(a)) return true;
  }
  return false;
}

namespace {

template <bool kParallel>
LpResult lp_impl(const ScalarField& f, double p, const BinaryMask* region) {
  if (region && !(region->dom == f.dom))
    throw ConfigError("lp_norm: field and region domains differ");
  if (!(p >= 1.0) && !std::isinf(p)) throw ConfigError("lp_norm: p must be >= 1 or infinity");
  const std::int64_t nc = f.dom.cell_count();
  const std::uint8_t* rg = region ? region->bits.data() : nullptr;
  std::int64_t used = 0;
  double acc = 0.0;
  if (std::isinf(p)) {
#pragma omp parallel for reduction(max : acc) reduction(+ : used) schedule(static) \
    if (kParallel)
    for (std::int64_t i = 0; i < nc; ++i) {
      if (rg && !rg[i]) continue;
      ++used;
      acc = std::max(acc, std::fabs(f.values[i]));
    }
    return {used == 0 ? 0.0 : acc, used == 0};
  }
#pragma omp parallel for reduction(+ : acc, used) schedule(static) if (kParallel)
  for (std::int64_t i = 0; i < nc; ++i) {
    if (rg && !rg[i]) continue;
    ++used;
    acc += std::pow(std::fabs(f.values[i]), p);
  }
  if (used == 0) return {0.0, true};
  return {std::pow(acc * f.dom.cell_volume(), 1.0 / p), false};
}

}  // namespace

LpResult lp_norm(const ScalarField& f, double p, const BinaryMask* region) {
  return lp_impl<true>(f, p, region);
}

LpResult lp_norm_serial(const ScalarField& f, double p, const BinaryMask* region) {
  return lp_impl<false>(f, p, region);
}

double lp_mass(const ScalarField& f, double p, const BinaryMask* region) {
  if (std::isinf(p)) return lp_norm(f, p, region).value;
  const std::int64_t nc = f.dom.cell_count();
  const std::uint8_t* rg = region ? region->bits.data() : nullptr;
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (std::int64_t i = 0; i < nc; ++i) {
    if (rg && !rg[i]) continue;
    acc += std::pow(std::fabs(f.values[i]), p);
  }
  return acc * f.dom.cell_volume();
}

BinaryMask interior_cells(const GridDomain& d, int ring) {
  BinaryMask m(d);
  for (int k = 0; k < d.counts[2]; ++k)
    for (int j = 0; j < d.counts[1]; ++j)
      for (int i = 0; i < d.counts[0]; ++i) {
        bool inside = i >= ring && i < d.counts[0] - ring && j >= ring &&
                      j < d.counts[1] - ring;
        if (d.n == 3) inside = inside && k >= ring && k < d.counts[2] - ring;
        m.bits[d.index(i, j, k)] = inside ? 1 : 0;
      }
  return m;
}

}  // namespace vmclab
