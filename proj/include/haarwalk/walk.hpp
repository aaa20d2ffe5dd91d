#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "haarwalk/circle.hpp"
#include "haarwalk/function.hpp"
#include "haarwalk/measure.hpp"

namespace haarwalk {

/// identity: S_0 = e (the raw walk). stationary: S_0 is a fresh Haar draw, so
/// every visited point is exactly uniform.
enum class StartMode { identity, stationary };

struct FiniteWalkInstance {
  GroupPtr group;
  FiniteMeasure step_law;
  FiniteFunction observable;
};

struct CircleWalkInstance {
  CircleMeasure step_law;
  CircleFunction observable;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WalkConfig {
  std::variant<std::monostate, FiniteWalkInstance, CircleWalkInstance> instance;
  long long steps = 0;
  int replicas = 1;
  std::uint64_t seed = 0;
  std::vector<long long> checkpoints;  // sorted, in [1, steps]
  StartMode mode = StartMode::identity;
  bool count_cells = true;  // finite: singleton cells; circle: equal arcs
  int circle_cells = 64;
  /// Track per replica the max over n in [steps/10, steps] of
  /// |sum_n| / sqrt(n log log n); scale by 1/sqrt(2C) downstream.
  bool track_lil = false;
  long long budget = 2'000'000'000;  // cap on replicas * steps
};

struct TrajectoryBatch {
  std::vector<long long> checkpoints;
  int replicas = 0;
  int n_cells = 0;
  long long steps = 0;
  StartMode mode = StartMode::identity;
  std::uint64_t seed = 0;
  std::vector<double> sums;          // replicas x checkpoints, row-major
  std::vector<std::int64_t> counts;  // replicas x n_cells, row-major
  std::vector<int> final_cell;       // cell of S_steps per replica
  std::vector<double> lil_raw;       // empty unless track_lil

  double sum_at(int r, int c) const {
    return sums[static_cast<std::size_t>(r) * checkpoints.size() + static_cast<std::size_t>(c)];
  }
  std::int64_t count_at(int r, int cell) const {
    return counts[static_cast<std::size_t>(r) * n_cells + static_cast<std::size_t>(cell)];
  }
};

/// Replicas run on independent counter-based streams, so the parallel and
/// serial engines produce bit-identical batches.
TrajectoryBatch run_batch(const WalkConfig& cfg);
TrajectoryBatch run_batch_serial(const WalkConfig& cfg);

/// Inverse-CDF draw from the step law.
class FiniteStepSampler {
public:
  explicit FiniteStepSampler(const FiniteMeasure& nu);
  Element operator()(RngStream& rng) const;

private:
  std::vector<double> cum_;
};

Element sample_increment(const FiniteMeasure& nu, RngStream& rng);
double sample_increment(const CircleMeasure& nu, RngStream& rng);

struct MomentEstimate {
  double value = 0.0;      // estimate of E |sum_{k=M+1}^{M+N} f(S_k)|^p
  double std_error = 0.0;  // Monte Carlo standard error of the estimate
  int replicas = 0;
};

MomentEstimate shifted_moment(const FiniteWalkInstance& inst, long long M, long long N, double p,
                              int replicas, std::uint64_t seed,
                              StartMode mode = StartMode::identity);

}  // namespace haarwalk
