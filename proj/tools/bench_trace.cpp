// Benchmark: serial reference kernel vs the OpenMP kernel for the moduli trace,
// plus the per-point certification pipeline throughput.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wkspin/moduli.hpp"
#include "wkspin/wk_core.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  int resolution = argc > 1 ? std::atoi(argv[1]) : 512;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif
  std::printf("trace resolution %d, %d repetitions\n\n", resolution, reps);

  wkspin::TraceOptions opts;
  opts.resolution = resolution;

  double best_serial = 1e300, best_parallel = 1e300;
  size_t points = 0;
  for (int r = 0; r < reps; ++r) {
    opts.parallel = false;
    auto t0 = Clock::now();
    auto serial = wkspin::trace_variety(opts);
    best_serial = std::min(best_serial, seconds_since(t0));

    opts.parallel = true;
    t0 = Clock::now();
    auto parallel = wkspin::trace_variety(opts);
    best_parallel = std::min(best_parallel, seconds_since(t0));

    points = 0;
    for (const auto& b : parallel.branches) points += b.points.size();
    if (serial.branches.size() != parallel.branches.size()) {
      std::printf("MISMATCH: serial %zu branches vs parallel %zu\n", serial.branches.size(),
                  parallel.branches.size());
      return 1;
    }
  }
  std::printf("trace %-22s %8.3f s\n", "serial reference:", best_serial);
  std::printf("trace %-22s %8.3f s  (speedup %.2fx)\n", "openmp kernel:", best_parallel,
              best_serial / best_parallel);
  std::printf("traced points: %zu\n\n", points);

  // verification throughput on the K=M locus points scaled through a few sizes
  std::vector<wkspin::ModelParams> pts;
  for (int i = 0; i < 64; ++i) {
    const double k = 0.25 + 0.05 * i;
    const auto [lm, lp] = wkspin::km_locus(k);
    pts.push_back({k, lm, k});
    pts.push_back({k, lp, k});
  }
  auto t0 = Clock::now();
  int passed = 0;
  for (const auto& p : pts) {
    passed += wkspin::verify(p).verdict == wkspin::Verdict::Pass ? 1 : 0;
  }
  const double dt = seconds_since(t0);
  std::printf("verify pipeline: %zu points in %.3f s (%.2f ms/point, %d passed)\n", pts.size(),
              dt, 1e3 * dt / pts.size(), passed);
  return 0;
}
