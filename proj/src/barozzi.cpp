#include "vmclab/barozzi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vmclab/cut.hpp"

namespace vmclab {

void LambdaSchedule::validate() const {
  if (values.empty()) throw ConfigError("LambdaSchedule: empty schedule");
  double prev = 0.0;
  for (double v : values) {
    if (!(v > prev)) throw ConfigError("LambdaSchedule: values must be positive and strictly increasing");
    prev = v;
  }
}

double LambdaSchedule::ratio() const {
  if (values.size() < 2) return 1.0;
  return std::pow(values.back() / values.front(), 1.0 / double(values.size() - 1));
}

LambdaSchedule LambdaSchedule::geometric(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 1)
    throw ConfigError("LambdaSchedule: need 0 < lo < hi and count >= 1");
  LambdaSchedule s;
  s.values.resize(count);
  if (count == 1) {
    s.values[0] = lo;
    return s;
  }
  const double q = std::pow(hi / lo, 1.0 / double(count - 1));
  double v = lo;
  for (int i = 0; i < count; ++i, v *= q) s.values[i] = v;
  s.values.back() = hi;
  return s;
}

LambdaSchedule LambdaSchedule::default_for(const GridDomain& d, int count) {
  double diag2 = 0.0;
  for (int a = 0; a < d.n; ++a) diag2 += d.extent(a) * d.extent(a);
  const double lo = d.n / (0.5 * std::sqrt(diag2));
  const double hi = d.n / (2.0 * d.h);
  return geometric(lo, hi, count);
}

LambdaSchedule LambdaSchedule::with_coverage_tail(const GridDomain& d) const {
  validate();
  // A lone cell joins the minimizer once λ h^n beats its full pair perimeter,
  // i.e. λ >= 2 Σ_o w_o h^{n-1} / h^n; go a factor 2 above to make it strict.
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(d.n);
  double wsum = 0.0;
  for (const auto& e : w.families) wsum += e.weight;
  const double lambda_cover = 4.0 * wsum / d.h;
  LambdaSchedule out = *this;
  const double q = std::max(ratio(), 1.02);
  for (double v = values.back() * q; v < lambda_cover * q; v *= q) out.values.push_back(v);
  return out;
}

BinaryMask solve_cp(const BinaryMask& base, const ScalarField& h_weight, double lambda,
                    const PerimeterWeights& w) {
  if (!(base.dom == h_weight.dom)) throw ConfigError("solve_cp: domain mismatch");
  if (!(lambda > 0)) throw ConfigError("solve_cp: lambda must be positive");
  const std::int64_t nc = base.dom.cell_count();
  // Up to the constant λ μ(E), the penalized functional is the Massari
  // functional with H = λ h_E on E, datum ∅ and free region E.
  ScalarField curv(base.dom, 0.0, "1/length");
  for (std::int64_t c = 0; c < nc; ++c) {
    if (!base.get(c)) continue;
    if (!(h_weight[c] > 0)) throw ConfigError("solve_cp: h_E must be positive on E");
    curv[c] = lambda * h_weight[c];
  }
  CutProblem p{base.dom, std::move(curv), BinaryMask(base.dom, false), base, w};
  return minimize_massari(p).minimizer;
}

double cp_energy(const BinaryMask& base, const ScalarField& h_weight, double lambda,
                 const PerimeterWeights& w, const BinaryMask& candidate) {
  if (!candidate.subset_of(base)) throw ConfigError("cp_energy: candidate not inside E");
  double missing = 0.0;
  for (std::int64_t c = 0; c < base.dom.cell_count(); ++c)
    if (base.get(c) && !candidate.get(c)) missing += h_weight[c];
  return perimeter(candidate, w) + lambda * missing * base.dom.cell_volume();
}

LambdaSweep lambda_sweep(const BinaryMask& base, const ScalarField& h_weight,
                         const LambdaSchedule& schedule, const PerimeterWeights& w) {
  schedule.validate();
  LambdaSweep sweep;
  sweep.schedule = schedule;
  sweep.h_weight = h_weight;
  sweep.base = base;
  sweep.sets.resize(schedule.values.size());

  const int count = int(schedule.values.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i)
    sweep.sets[i] = solve_cp(base, h_weight, schedule.values[i], w);

  for (int i = 0; i + 1 < count; ++i)
    if (!sweep.sets[i].subset_of(sweep.sets[i + 1]))
      throw std::logic_error("lambda_sweep: nestedness violated (solver bug)");
  for (int i = 0; i < count; ++i)
    if (!sweep.sets[i].subset_of(base))
      throw std::logic_error("lambda_sweep: E_lambda escapes E (solver bug)");
  return sweep;
}

CurvatureField barozzi_curvature(const LambdaSweep& sweep) {
  if (sweep.sets.empty()) throw ConfigError("barozzi_curvature: empty sweep");
  const GridDomain& d = sweep.base.dom;
  CurvatureField out{ScalarField(d, 0.0, "1/length"), BinaryMask(d, false), 0};
  for (std::int64_t c = 0; c < d.cell_count(); ++c) {
    if (!sweep.base.get(c)) continue;
    bool covered = false;
    for (std::size_t k = 0; k < sweep.sets.size(); ++k) {
      if (sweep.sets[k].get(c)) {
        out.value[c] = sweep.schedule.values[k] * sweep.h_weight[c];
        covered = true;
        break;
      }
    }
    if (covered)
      out.covered.set(c, true);
    else
      ++out.uncovered;
  }
  return out;
}

namespace {

// Complement stand-in: pad the bounding box of E by the given fraction of its
// extent, clamp to the domain minus the frozen ring.
BinaryMask complement_box(const BinaryMask& base, double pad, int ring) {
  const GridDomain& d = base.dom;
  Idx3 lo{d.counts[0], d.counts[1], d.counts[2]}, hi{-1, -1, -1};
  for (std::int64_t c = 0; c < d.cell_count(); ++c) {
    if (!base.get(c)) continue;
    const Idx3 ijk = d.coords(c);
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], ijk[a]);
      hi[a] = std::max(hi[a], ijk[a]);
    }
  }
  if (hi[0] < 0) throw ConfigError("barozzi_construct: base set is empty");
  BinaryMask box(d, false);
  Idx3 plo, phi;
  for (int a = 0; a < d.n; ++a) {
    const int margin = int(std::ceil(pad * (hi[a] - lo[a] + 1)));
    plo[a] = std::max(ring, lo[a] - margin);
    phi[a] = std::min(d.counts[a] - 1 - ring, hi[a] + margin);
  }
  if (d.n == 2) {
    plo[2] = 0;
    phi[2] = 0;
  }
  for (int k = plo[2]; k <= phi[2]; ++k)
    for (int j = plo[1]; j <= phi[1]; ++j)
      for (int i = plo[0]; i <= phi[0]; ++i) {
        const std::int64_t c = d.index(i, j, k);
        if (!base.get(c)) box.set(c, true);
      }
  return box;
}

}  // namespace

BarozziResult barozzi_construct(const BinaryMask& base, const PerimeterWeights& w,
                                const BarozziOptions& options) {
  const GridDomain& d = base.dom;
  LambdaSchedule sched = options.schedule
                             ? *options.schedule
                             : LambdaSchedule::default_for(d, options.schedule_points);
  if (options.coverage_tail) sched = sched.with_coverage_tail(d);

  BarozziResult out;
  const ScalarField ones(d, 1.0);
  out.on_set = barozzi_curvature(lambda_sweep(base, ones, sched, w));
  out.signed_curvature = ScalarField(d, 0.0, "1/length");
  for (std::int64_t c = 0; c < d.cell_count(); ++c)
    out.signed_curvature[c] = out.on_set.value[c];

  if (options.with_complement) {
    out.complement_region = complement_box(base, options.complement_pad, w.radius());
    out.on_complement =
        barozzi_curvature(lambda_sweep(out.complement_region, ones, sched, w));
    for (std::int64_t c = 0; c < d.cell_count(); ++c)
      if (out.complement_region.get(c))
        out.signed_curvature[c] = -out.on_complement.value[c];
  } else {
    out.complement_region = BinaryMask(d, false);
    out.on_complement = CurvatureField{ScalarField(d), BinaryMask(d, false), 0};
  }
  return out;
}

ScalarField compose_curvature(const ScalarField& h1, const ScalarField& h2,
                              const BinaryMask& set, const BinaryMask& free_cells) {
  if (!(h1.dom == h2.dom) || !(h1.dom == set.dom) || !(h1.dom == free_cells.dom))
    throw ConfigError("compose_curvature: domain mismatch");
  ScalarField out(h1.dom, 0.0, h1.unit);
  for (std::int64_t c = 0; c < h1.dom.cell_count(); ++c)
    out[c] = set.get(c) ? h1[c] : h2[c];
  return out;
}

}  // namespace vmclab
