// Compares the OpenMP kernels against their serial reference implementations:
// same results (checked), wall times side by side.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "vmclab/barozzi.hpp"
#include "vmclab/counterexamples.hpp"
#include "vmclab/grid.hpp"

using namespace vmclab;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

void row(const std::string& name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-34s %10.1f ms %10.1f ms   x%.2f  %s\n", name.c_str(), serial_ms,
              parallel_ms, serial_ms / parallel_ms, same ? "results match" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %13s %13s\n", "kernel", "serial", "openmp");

  {
    const GridDomain d = GridDomain::square2d(-1.0, 1.0, 2048);
    const BinaryMask m = rasterize(d, [](Vec3 x) {
      return std::sin(6 * x[0]) + std::cos(5 * x[1]) > 0.2;
    });
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
    std::vector<std::int64_t> a, b;
    const double ts = time_ms([&] { a = cut_pair_counts_serial(m, nullptr, w); });
    const double tp = time_ms([&] { b = cut_pair_counts(m, nullptr, w); });
    row("perimeter counts 2048^2 (cc16)", ts, tp, a == b);
  }
  {
    const GridDomain d = GridDomain::cube3d(0.0, 1.0, 192);
    const BinaryMask m = rasterize_ball(d, {0.5, 0.5, 0.5}, 0.35);
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(3);
    std::vector<std::int64_t> a, b;
    const double ts = time_ms([&] { a = cut_pair_counts_serial(m, nullptr, w); });
    const double tp = time_ms([&] { b = cut_pair_counts(m, nullptr, w); });
    row("perimeter counts 192^3 (cc26)", ts, tp, a == b);
  }
  {
    const GridDomain d = GridDomain::square2d(-1.0, 1.0, 2048);
    auto pred = [](Vec3 x) {
      return x[1] < (x[0] > 0 ? 1 : -1) * std::pow(std::fabs(x[0]), 1.5);
    };
    BinaryMask a, b;
    const double ts = time_ms([&] { a = rasterize_serial(d, pred); });
    const double tp = time_ms([&] { b = rasterize(d, pred); });
    row("rasterize cusp set 2048^2", ts, tp, a == b);
  }
  {
    const GridDomain d = GridDomain::square2d(-1.0, 1.0, 1024);
    const ScalarField f = ScalarField::sample(
        d, [](Vec3 x) { return cusp2d_curvature(0.5, x[0], x[1]); });
    double a = 0, b = 0;
    const double ts = time_ms([&] { a = lp_norm_serial(f, 3.0).value; });
    const double tp = time_ms([&] { b = lp_norm(f, 3.0).value; });
    row("L^3 norm of the cusp curvature", ts, tp, std::fabs(a - b) < 1e-12 * a);
  }
  {
    // sweep-level parallelism: low-resolution optimal-curvature construction
    const GridDomain d = GridDomain::square2d(0.0, 1.0, 128);
    const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
    const BinaryMask disk = rasterize_ball(d, {0.5, 0.5, 0}, 0.3);
    const ScalarField ones(d, 1.0);
    const LambdaSchedule sched = LambdaSchedule::default_for(d, 32);
    LambdaSweep sa, sb;
    const double ts = time_ms(
        [&] {
          omp_set_num_threads(1);
          sa = lambda_sweep(disk, ones, sched, w);
          omp_set_num_threads(omp_get_num_procs());
        },
        1);
    const double tp = time_ms([&] { sb = lambda_sweep(disk, ones, sched, w); }, 1);
    bool same = sa.sets.size() == sb.sets.size();
    for (std::size_t k = 0; same && k < sa.sets.size(); ++k)
      same = sa.sets[k] == sb.sets[k];
    row("lambda sweep 128^2 x 32", ts, tp, same);
  }
  return 0;
}
