#include "haarwalk/walk.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace haarwalk {

FiniteStepSampler::FiniteStepSampler(const FiniteMeasure& nu) {
  if (!nu.is_probability()) throw std::invalid_argument("step law must be a probability measure");
  double acc = 0.0;
  cum_.reserve(static_cast<std::size_t>(nu.size()));
  for (int x = 0; x < nu.size(); ++x) {
    acc += nu.weight(x);
    cum_.push_back(acc);
  }
  cum_.back() = std::max(cum_.back(), 1.0);
}

Element FiniteStepSampler::operator()(RngStream& rng) const {
  const double u = rng.next_double();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return static_cast<Element>(std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()),
                                                    cum_.size() - 1));
}

Element sample_increment(const FiniteMeasure& nu, RngStream& rng) {
  return FiniteStepSampler(nu)(rng);
}

double sample_increment(const CircleMeasure& nu, RngStream& rng) {
  return CircleSampler(nu).sample(rng);
}

namespace {

void validate_config(const WalkConfig& cfg) {
  if (std::holds_alternative<std::monostate>(cfg.instance))
    throw std::invalid_argument("walk config has no instance");
  if (cfg.steps < 1) throw std::invalid_argument("walk needs steps >= 1");
  if (cfg.replicas < 1) throw std::invalid_argument("walk needs replicas >= 1");
  if (static_cast<long long>(cfg.replicas) * cfg.steps > cfg.budget)
    throw BudgetExceeded("replicas * steps exceeds the configured budget");
  long long prev = 0;
  for (long long c : cfg.checkpoints) {
    if (c <= prev || c > cfg.steps)
      throw std::invalid_argument("checkpoints must be strictly increasing and within [1, steps]");
    prev = c;
  }
}

// One replica of the walk; identical code on the serial and OpenMP paths.
template <typename State, typename StepFn, typename EvalFn, typename CellFn>
void run_replica(const WalkConfig& cfg, int replica, State start, StepFn step, EvalFn eval,
                 CellFn cell, TrajectoryBatch& out) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(replica));
  State s = start;
  if (cfg.mode == StartMode::stationary) s = step(s, rng, /*haar=*/true);
  double sum = 0.0;
  const std::size_t n_cp = cfg.checkpoints.size();
  std::size_t ci = 0;
  double* sums_row = out.sums.data() + static_cast<std::size_t>(replica) * n_cp;
  std::int64_t* counts_row =
      out.n_cells > 0 ? out.counts.data() + static_cast<std::size_t>(replica) * out.n_cells : nullptr;
  const long long lil_lo = std::max<long long>(cfg.steps / 10, 16);
  double lil_stat = 0.0;
  for (long long n = 1; n <= cfg.steps; ++n) {
    s = step(s, rng, /*haar=*/false);
    sum += eval(s);
    if (counts_row) ++counts_row[cell(s)];
    if (cfg.track_lil && n >= lil_lo) {
      const double scale = std::sqrt(static_cast<double>(n) * std::log(std::log(static_cast<double>(n))));
      lil_stat = std::max(lil_stat, std::abs(sum) / scale);
    }
    if (ci < n_cp && n == cfg.checkpoints[ci]) sums_row[ci++] = sum;
  }
  out.final_cell[static_cast<std::size_t>(replica)] = cell(s);
  if (cfg.track_lil) out.lil_raw[static_cast<std::size_t>(replica)] = lil_stat;
}

TrajectoryBatch run_impl(const WalkConfig& cfg, bool parallel) {
  validate_config(cfg);
  TrajectoryBatch out;
  out.checkpoints = cfg.checkpoints;
  out.replicas = cfg.replicas;
  out.steps = cfg.steps;
  out.mode = cfg.mode;
  out.seed = cfg.seed;
  out.final_cell.assign(static_cast<std::size_t>(cfg.replicas), 0);
  if (cfg.track_lil) out.lil_raw.assign(static_cast<std::size_t>(cfg.replicas), 0.0);
  out.sums.assign(static_cast<std::size_t>(cfg.replicas) * cfg.checkpoints.size(), 0.0);

  if (const auto* fin = std::get_if<FiniteWalkInstance>(&cfg.instance)) {
    const auto& g = *fin->group;
    const int nn = g.order();
    out.n_cells = cfg.count_cells ? nn : 0;
    out.counts.assign(static_cast<std::size_t>(cfg.replicas) * out.n_cells, 0);
    const FiniteStepSampler sampler(fin->step_law);
    const int* table = g.table().data();
    const double* fvals = fin->observable.values().data();
    auto step = [&, nn](Element s, RngStream& rng, bool haar) {
      const Element x = haar ? static_cast<Element>(rng.next_below(static_cast<std::uint32_t>(nn)))
                             : sampler(rng);
      return table[static_cast<std::size_t>(s) * nn + x];
    };
    auto eval = [&](Element s) { return fvals[s]; };
    auto cell = [](Element s) { return s; };
    const Element start = g.identity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int r = 0; r < cfg.replicas; ++r) run_replica(cfg, r, start, step, eval, cell, out);
  } else {
    const auto& cw = std::get<CircleWalkInstance>(cfg.instance);
    out.n_cells = cfg.count_cells ? cfg.circle_cells : 0;
    out.counts.assign(static_cast<std::size_t>(cfg.replicas) * out.n_cells, 0);
    const CircleSampler sampler(cw.step_law);
    const int arcs = std::max(cfg.circle_cells, 1);
    auto step = [&](double s, RngStream& rng, bool haar) {
      return circle_compose(s, haar ? haar_sample_circle(rng) : sampler.sample(rng));
    };
    auto eval = [&](double s) { return cw.observable.value(s); };
    auto cell = [arcs](double s) {
      return std::min(static_cast<int>(s * arcs), arcs - 1);
    };
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int r = 0; r < cfg.replicas; ++r) run_replica(cfg, r, 0.0, step, eval, cell, out);
  }
  return out;
}

}  // namespace

TrajectoryBatch run_batch(const WalkConfig& cfg) { return run_impl(cfg, true); }
TrajectoryBatch run_batch_serial(const WalkConfig& cfg) { return run_impl(cfg, false); }

MomentEstimate shifted_moment(const FiniteWalkInstance& inst, long long M, long long N, double p,
                              int replicas, std::uint64_t seed, StartMode mode) {
  if (M < 0 || N < 1) throw std::invalid_argument("need M >= 0 and N >= 1");
  const auto& g = *inst.group;
  const int nn = g.order();
  const FiniteStepSampler sampler(inst.step_law);
  const int* table = g.table().data();
  const double* fvals = inst.observable.values().data();

  std::vector<double> powers(static_cast<std::size_t>(replicas));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int r = 0; r < replicas; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    Element s = mode == StartMode::stationary
                    ? static_cast<Element>(rng.next_below(static_cast<std::uint32_t>(nn)))
                    : g.identity();
    double sum = 0.0;
    for (long long k = 1; k <= M + N; ++k) {
      s = table[static_cast<std::size_t>(s) * nn + sampler(rng)];
      if (k > M) sum += fvals[s];
    }
    powers[static_cast<std::size_t>(r)] = std::pow(std::abs(sum), p);
  }

  MomentEstimate est;
  est.replicas = replicas;
  double mean = 0.0;
  for (double v : powers) mean += v;
  mean /= static_cast<double>(replicas);
  double var = 0.0;
  for (double v : powers) var += (v - mean) * (v - mean);
  var /= std::max(1.0, static_cast<double>(replicas - 1));
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(replicas));
  return est;
}

}  // namespace haarwalk
