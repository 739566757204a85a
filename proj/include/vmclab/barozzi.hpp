#ifndef VMCLAB_BAROZZI_HPP
#define VMCLAB_BAROZZI_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "vmclab/grid.hpp"

namespace vmclab {

/// Strictly increasing positive λ values (units 1/length).
struct LambdaSchedule {
  std::vector<double> values;

  void validate() const;
  double ratio() const;  // geometric step between consecutive values

  static LambdaSchedule geometric(double lo, double hi, int count);
  /// Default: geometric from n/(half domain diagonal) to n/(2h). The lower end
  /// is below the threshold of any resolvable ball, the upper end covers balls
  /// of radius 2h.
  static LambdaSchedule default_for(const GridDomain& d, int count = 128);
  /// Appends a geometric tail up to the single-cell inclusion threshold so that
  /// every cell of the base set gets covered (used before minimality checks).
  LambdaSchedule with_coverage_tail(const GridDomain& d) const;
};

/// Nested family E_λ ⊆ E of minimizers of P(F) + λ ∫_{E\F} h_E, one per
/// scheduled λ. Nestedness is asserted, not enforced: the canonical smallest
/// minimizers of a parametric cut are monotone, so a violation is a solver bug.
struct LambdaSweep {
  LambdaSchedule schedule;
  std::vector<BinaryMask> sets;
  ScalarField h_weight;
  BinaryMask base;
};

/// Canonical smallest minimizer of P(F) + λ ∫_{E\F} h_E h^n over F ⊆ E.
BinaryMask solve_cp(const BinaryMask& base, const ScalarField& h_weight, double lambda,
                    const PerimeterWeights& w);

/// Value of the penalized functional for a given F ⊆ E.
double cp_energy(const BinaryMask& base, const ScalarField& h_weight, double lambda,
                 const PerimeterWeights& w, const BinaryMask& candidate);

/// Runs solve_cp over the schedule (parallel across λ) and asserts nestedness.
LambdaSweep lambda_sweep(const BinaryMask& base, const ScalarField& h_weight,
                         const LambdaSchedule& schedule, const PerimeterWeights& w);

struct CurvatureField {
  ScalarField value;    // λ_first-coverage × h_E on covered cells, 0 elsewhere
  BinaryMask covered;
  std::int64_t uncovered = 0;  // cells of the base never covered by the sweep
};

/// Per cell: the smallest scheduled λ whose E_λ contains the cell, times
/// h_E(cell). Cells never covered carry the sentinel (excluded from norms).
CurvatureField barozzi_curvature(const LambdaSweep& sweep);

struct BarozziOptions {
  int schedule_points = 128;
  bool coverage_tail = false;   // extend the schedule until every cell is covered
  bool with_complement = true;  // also construct H on the complement box
  double complement_pad = 0.25; // bounding-box padding for the complement stand-in
  std::optional<LambdaSchedule> schedule;  // overrides the default when set
};

struct BarozziResult {
  CurvatureField on_set;
  CurvatureField on_complement;       // values are H_{box \ E} >= 0
  ScalarField signed_curvature;       // H_E on E, -H_complement off E
  BinaryMask complement_region;       // where the complement construction ran
};

/// Full construction: sweep on E, sweep on the padded-box complement, and the
/// signed composite field H_E 1_E - H_complement 1_{box \ E}.
BarozziResult barozzi_construct(const BinaryMask& base, const PerimeterWeights& w,
                                const BarozziOptions& options = {});

/// Composed field: H1 on E ∩ U_free, H2 elsewhere.
ScalarField compose_curvature(const ScalarField& h1, const ScalarField& h2,
                              const BinaryMask& set, const BinaryMask& free_cells);

}  // namespace vmclab

#endif
