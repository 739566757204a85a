#include "vmclab/cut.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "vmclab/maxflow.hpp"

namespace vmclab {

void CutProblem::validate() const {
  if (!(curvature.dom == dom) || !(datum.dom == dom) || !(free_cells.dom == dom))
    throw ConfigError("CutProblem: component domains differ");
  const int ring = weights.radius();
  const int nx = dom.counts[0], ny = dom.counts[1], nz = dom.counts[2];
  for (std::int64_t c = 0; c < dom.cell_count(); ++c) {
    if (!free_cells.get(c)) continue;
    if (!std::isfinite(curvature[c]))
      throw ConfigError("CutProblem: curvature not finite on the free region");
    Idx3 ijk = dom.coords(c);
    bool ok = ijk[0] >= ring && ijk[0] < nx - ring && ijk[1] >= ring &&
              ijk[1] < ny - ring;
    if (dom.n == 3) ok = ok && ijk[2] >= ring && ijk[2] < nz - ring;
    if (!ok)
      throw ConfigError(
          "CutProblem: free region touches the domain boundary; no frozen ring of "
          "stencil radius " +
          std::to_string(ring));
  }
}

namespace {

std::int64_t quantize(double v) { return std::llround(v * kEnergyScale); }

}  // namespace

CutSolution minimize_massari(const CutProblem& problem) {
  problem.validate();
  const GridDomain& d = problem.dom;
  const std::int64_t nc = d.cell_count();

  // Compact ids for free cells.
  std::vector<int> id(nc, -1);
  std::vector<std::int64_t> cells;
  for (std::int64_t c = 0; c < nc; ++c)
    if (problem.free_cells.get(c)) {
      id[c] = int(cells.size());
      cells.push_back(c);
    }
  const int n_free = int(cells.size());

  const double face = d.face_area();
  const double vol = d.cell_volume();
  std::vector<std::int64_t> pair_q(problem.weights.families.size());
  std::vector<std::int64_t> strides(problem.weights.families.size());
  for (std::size_t f = 0; f < problem.weights.families.size(); ++f) {
    pair_q[f] = quantize(problem.weights.families[f].weight * face);
    const Idx3 o = problem.weights.families[f].offset;
    strides[f] = o[0] + std::int64_t(d.counts[0]) * (o[1] + std::int64_t(d.counts[1]) * o[2]);
  }

  MaxFlow g(n_free, std::int64_t(n_free) * std::int64_t(problem.weights.families.size()));

  // Unary: difference of labeling costs, cost(inside) - cost(outside) =
  // -H h^n, plus the folded pair terms against frozen neighbors.
  for (int u = 0; u < n_free; ++u) {
    const std::int64_t c = cells[u];
    const Idx3 ijk = d.coords(c);
    std::int64_t g1 = -quantize(problem.curvature[c] * vol);  // cost of inside
    std::int64_t g0 = 0;                                       // cost of outside
    for (std::size_t f = 0; f < strides.size(); ++f) {
      const Idx3 o = problem.weights.families[f].offset;
      for (int s = -1; s <= 1; s += 2) {
        const int i = ijk[0] + s * o[0], j = ijk[1] + s * o[1], k = ijk[2] + s * o[2];
        if (!d.in_bounds(i, j, k)) continue;
        const std::int64_t nb = c + s * strides[f];
        if (id[nb] >= 0) {
          if (s > 0 && id[nb] > u)  // free-free pair, added once
            g.add_edge(u, id[nb], pair_q[f], pair_q[f]);
          else if (s < 0 && id[nb] > u)
            g.add_edge(u, id[nb], pair_q[f], pair_q[f]);
          continue;
        }
        // Frozen neighbor: the pair cost folds into the unary term.
        if (problem.datum.get(nb))
          g0 += pair_q[f];
        else
          g1 += pair_q[f];
      }
    }
    const std::int64_t diff = g1 - g0;
    if (diff > 0)
      g.add_terminal(u, 0, diff);  // being inside costs extra: sink arc
    else if (diff < 0)
      g.add_terminal(u, -diff, 0);
  }

  g.solve();

  CutSolution sol;
  sol.minimizer = problem.datum;
  for (int u = 0; u < n_free; ++u) sol.minimizer.set(cells[u], g.source_side(u));
  sol.perimeter_part = perimeter(sol.minimizer, problem.free_cells, problem.weights);
  double bulk = 0.0;
  for (int u = 0; u < n_free; ++u)
    if (sol.minimizer.get(cells[u])) bulk += problem.curvature[cells[u]];
  sol.bulk_part = bulk * vol;
  sol.energy = sol.perimeter_part - sol.bulk_part;
  sol.stats = {std::int64_t(n_free), g.num_arcs(), g.flow(), double(g.flow()) / kEnergyScale};
  return sol;
}

double cut_energy(const CutProblem& problem, const BinaryMask& mask) {
  double bulk = 0.0;
  for (std::int64_t c = 0; c < problem.dom.cell_count(); ++c)
    if (problem.free_cells.get(c) && mask.get(c)) bulk += problem.curvature[c];
  return perimeter(mask, problem.free_cells, problem.weights) -
         bulk * problem.dom.cell_volume();
}

double cut_energy_delta(const CutProblem& problem, const BinaryMask& base,
                        std::span<const std::int64_t> cells) {
  const GridDomain& d = problem.dom;
  std::unordered_set<std::int64_t> flipped(cells.begin(), cells.end());
  const double face = d.face_area();
  double dperim = 0.0, dbulk = 0.0;
  for (const std::int64_t c : cells) {
    const Idx3 ijk = d.coords(c);
    const bool before = base.get(c);
    dbulk += (before ? -1.0 : 1.0) * problem.curvature[c];
    for (const auto& fam : problem.weights.families) {
      const Idx3 o = fam.offset;
      const std::int64_t stride =
          o[0] + std::int64_t(d.counts[0]) * (o[1] + std::int64_t(d.counts[1]) * o[2]);
      for (int s = -1; s <= 1; s += 2) {
        const int i = ijk[0] + s * o[0], j = ijk[1] + s * o[1], k = ijk[2] + s * o[2];
        if (!d.in_bounds(i, j, k)) continue;
        const std::int64_t nb = c + s * stride;
        const bool nb_flipped = flipped.count(nb) > 0;
        if (nb_flipped && nb < c) continue;  // both flipped: count the pair once
        if (!problem.free_cells.get(c) && !problem.free_cells.get(nb)) continue;
        const bool nb_before = base.get(nb);
        const bool cut_before = before != nb_before;
        const bool cut_after = (!before) != (nb_flipped ? !nb_before : nb_before);
        if (cut_before != cut_after) dperim += (cut_after ? 1.0 : -1.0) * fam.weight;
      }
    }
  }
  return dperim * face - dbulk * d.cell_volume();
}

XiResult xi(const BinaryMask& datum, const BinaryMask& free_cells,
            const PerimeterWeights& w) {
  CutProblem p{datum.dom, ScalarField(datum.dom, 0.0, "1/length"), datum, free_cells, w};
  CutSolution s = minimize_massari(p);
  return {s.perimeter_part, std::move(s.minimizer)};
}

double psi(const BinaryMask& datum, const BinaryMask& free_cells,
           const PerimeterWeights& w) {
  const double p_e = perimeter(datum, free_cells, w);
  const double value = p_e - xi(datum, free_cells, w).value;
  if (value < -1e-9) throw std::logic_error("psi: negative deviation from minimality");
  return std::max(value, 0.0);
}

PerturbationReport verify_minimality(const CutProblem& problem, const BinaryMask& candidate,
                                     int n_perturbations, std::uint64_t seed,
                                     double eps_grid) {
  problem.validate();
  const GridDomain& d = problem.dom;
  std::vector<std::int64_t> free_list;
  for (std::int64_t c = 0; c < d.cell_count(); ++c)
    if (problem.free_cells.get(c)) free_list.push_back(c);
  if (free_list.empty()) throw ConfigError("verify_minimality: empty free region");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free_list.size() - 1);
  std::uniform_int_distribution<int> radius_cells(1, 4);

  PerturbationReport rep;
  rep.tried = n_perturbations;
  rep.eps_grid = eps_grid;
  for (int t = 0; t < n_perturbations; ++t) {
    const std::int64_t center = free_list[pick(rng)];
    const Idx3 cc = d.coords(center);
    const int r = radius_cells(rng);
    std::vector<std::int64_t> cells;
    for (int dk = -r; dk <= r; ++dk) {
      if (d.n == 2 && dk != 0) continue;
      for (int dj = -r; dj <= r; ++dj)
        for (int di = -r; di <= r; ++di) {
          if (di * di + dj * dj + dk * dk > r * r) continue;
          const int i = cc[0] + di, j = cc[1] + dj, k = cc[2] + dk;
          if (!d.in_bounds(i, j, k)) continue;
          const std::int64_t c = d.index(i, j, k);
          if (problem.free_cells.get(c)) cells.push_back(c);
        }
    }
    if (cells.empty()) continue;
    const double delta = cut_energy_delta(problem, candidate, cells);
    if (-delta > rep.max_improvement) rep.max_improvement = -delta;
    if (-delta > eps_grid) ++rep.improving;
  }
  rep.pass = rep.improving == 0;
  return rep;
}

}  // namespace vmclab
