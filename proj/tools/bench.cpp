// Timing comparison of the OpenMP kernels against their serial references.
#include <chrono>
#include <cstdio>

#include "haarwalk/spectral.hpp"
#include "haarwalk/walk.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace haarwalk;

namespace {

template <typename F>
double time_of(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif

  auto g = symmetric_group(4);
  Eigen::VectorXd w(24);
  RngStream rng(1, 0);
  for (int i = 0; i < 24; ++i) w(i) = -std::log(1.0 - rng.next_double());
  w /= w.sum();
  auto nu = FiniteMeasure::probability(g, w);
  Eigen::VectorXd v(24);
  for (int i = 0; i < 24; ++i) v(i) = 2.0 * rng.next_double() - 1.0;
  auto f = FiniteFunction::demeaned(g, v);

  WalkConfig cfg;
  cfg.instance = FiniteWalkInstance{g, nu, f};
  cfg.steps = 100000;
  cfg.replicas = 1000;
  cfg.seed = 42;
  cfg.checkpoints = {1000, 10000, 100000};
  cfg.track_lil = true;

  TrajectoryBatch serial, parallel;
  const double t_serial = time_of([&] { serial = run_batch_serial(cfg); });
  const double t_parallel = time_of([&] { parallel = run_batch(cfg); });
  const bool identical = serial.sums == parallel.sums && serial.counts == parallel.counts &&
                         serial.lil_raw == parallel.lil_raw;
  std::printf("run_batch          serial %8.3fs   omp %8.3fs   speedup %5.2fx   bit-identical: %s\n",
              t_serial, t_parallel, t_serial / t_parallel, identical ? "yes" : "NO");

  const double t_var = time_of([&] {
    volatile double sink = stationary_sum_variance(f, nu, 20000);
    (void)sink;
  });
  std::printf("variance prefix    %8.3fs (N = 20000 on S4)\n", t_var);

  const double t_delta = time_of([&] {
    volatile double sink = tv_series(nu, 1e-12).sum;
    (void)sink;
  });
  std::printf("delta series       %8.3fs\n", t_delta);
  return identical ? 0 : 1;
}
