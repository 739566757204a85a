#ifndef VMCLAB_CUT_HPP
#define VMCLAB_CUT_HPP

#include <cstdint>
#include <span>

#include "vmclab/grid.hpp"

namespace vmclab {

/// One Massari minimization instance: minimize
///   perimeter(F, U_free) - sum_{F ∩ U_free} H h^n
/// over masks F that agree with `datum` off `free_cells`. The free region must
/// keep a frozen ring of one stencil radius inside the domain so that
/// "F △ E compactly inside U" is literal on the grid.
struct CutProblem {
  GridDomain dom;
  ScalarField curvature;  // H
  BinaryMask datum;       // E
  BinaryMask free_cells;  // U_free
  PerimeterWeights weights;

  void validate() const;
};

struct SolverStats {
  std::int64_t nodes = 0;
  std::int64_t arcs = 0;
  std::int64_t flow_quanta = 0;
  double max_flow = 0.0;
};

struct CutSolution {
  BinaryMask minimizer;         // F*, the canonical smallest minimizer
  double energy = 0.0;          // perimeter_part - bulk_part
  double perimeter_part = 0.0;  // perimeter(F*, U_free)
  double bulk_part = 0.0;       // sum_{F* ∩ U_free} H h^n
  SolverStats stats;
};

/// Quantization scale: energies are rounded to integer multiples of
/// 1/kEnergyScale before the exact min-cut, fine enough that the quantized
/// argmin stays within 1e-9 of the true optimum on desk-scale instances.
inline constexpr double kEnergyScale = 1e12;

/// Exact discrete minimization by min-cut. Among minimizers returns the
/// smallest one (the source side reachable in the residual graph).
CutSolution minimize_massari(const CutProblem& problem);

/// Energy of an arbitrary admissible mask under the problem's functional.
double cut_energy(const CutProblem& problem, const BinaryMask& mask);

/// Exact energy change from flipping `cells` (indices into the domain) in
/// `base`; only pairs incident to the flipped set are visited.
double cut_energy_delta(const CutProblem& problem, const BinaryMask& base,
                        std::span<const std::int64_t> cells);

struct XiResult {
  double value = 0.0;     // least perimeter with E's boundary datum
  BinaryMask minimizer;   // a set A attaining it
};

/// Xi(E,U): minimize_massari with H ≡ 0.
XiResult xi(const BinaryMask& datum, const BinaryMask& free_cells,
            const PerimeterWeights& w);

/// Psi(E,U) = perimeter(E, U_free) - Xi(E, U_free) >= 0.
double psi(const BinaryMask& datum, const BinaryMask& free_cells,
           const PerimeterWeights& w);

struct PerturbationReport {
  int tried = 0;
  int improving = 0;         // flips better by more than eps_grid
  double max_improvement = 0.0;
  double eps_grid = 0.0;
  bool pass = false;
};

/// Flips random balls (radius 1..4 cells) inside the free region and measures
/// the exact energy change of each; `candidate` should already minimize the
/// problem, so no flip may improve by more than the grid slack.
PerturbationReport verify_minimality(const CutProblem& problem, const BinaryMask& candidate,
                                     int n_perturbations, std::uint64_t seed,
                                     double eps_grid);

}  // namespace vmclab

#endif
