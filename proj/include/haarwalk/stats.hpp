#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "haarwalk/walk.hpp"

namespace haarwalk {

/// Standard normal distribution function, absolute error well under 1e-12.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0,1); bisection-refined, deterministic.
double normal_quantile(double p);

/// One-sample Kolmogorov-Smirnov distance of the sample to the standard
/// normal law (sorts a copy).
double ks_vs_standard_normal(std::vector<double> sample);

/// Wilson-Hilferty chi-square quantile; adequate at the significance levels
/// used by the sampling tests.
double chi_square_quantile(double p, int df);

struct LawVerdict {
  std::string law;
  double statistic = 0.0;
  double reference_lo = 0.0;
  double reference_hi = 0.0;
  bool pass = false;
  bool degenerate = false;  // degenerate branch taken (q = 1 or C = 0 regime)
  bool trend_ok = true;
  std::vector<std::pair<long long, double>> diagnostics;  // checkpoint -> normalized statistic
  std::string note;
};

/// Strong-law verdict: cross-replica median of max over late checkpoints
/// (n >= N/10) of |sum_n| / phi_{m,eps}(n)^{1/p}; passes when the statistic
/// sits under `cap` and the median trace does not grow over the last decade.
LawVerdict slln_verdict(const TrajectoryBatch& batch, int m, double eps, double p,
                        double cap = 0.2);

/// Median trace of |sum_n| / phi_{m,eps}(n)^{1/p} over all checkpoints.
std::vector<std::pair<long long, double>> phi_normalized_trace(const TrajectoryBatch& batch,
                                                               int m, double eps, double p);

/// Iterated-logarithm verdict: cross-replica median of
/// max_{N/10 <= n <= N} |sum_n| / sqrt(2 C n log log n), checked against the
/// finite-N bracket [0.5, 1.3]. C = nullopt or 0 switches to the degenerate
/// branch, which instead checks that sum_N / sqrt(N) decays.
LawVerdict lil_verdict(const TrajectoryBatch& batch, std::optional<double> C);

/// CLT verdict: KS distance of {sum_N / sqrt(C N)} to the normal law at the
/// final checkpoint, passing under max(3 x KS noise floor, K_hi x the
/// Lyapunov rate). Degenerate branch as in lil_verdict.
LawVerdict clt_verdict(const TrajectoryBatch& batch, std::optional<double> C, double delta_exp,
                       double K_hi);

/// Log-log slope of the p-th moment norm across checkpoint horizons; passes
/// under 1/p + 0.05 for p < 2 and 0.55 for p >= 2. Needs >= 3 horizons.
LawVerdict moment_growth_verdict(const std::vector<std::pair<double, double>>& horizon_to_norm,
                                 double p);

/// p-th moment norm (E |sum_n|^p)^{1/p} per checkpoint, from a batch.
std::vector<std::pair<double, double>> moment_norms(const TrajectoryBatch& batch, double p);

}  // namespace haarwalk
