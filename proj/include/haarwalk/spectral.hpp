#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haarwalk/circle.hpp"
#include "haarwalk/dual.hpp"
#include "haarwalk/fourier.hpp"
#include "haarwalk/function.hpp"
#include "haarwalk/measure.hpp"

namespace haarwalk {

/// Delta_k = || nu^{*k} - uniform ||_TV, exact on finite groups.
double tv_to_uniform_at(const FiniteMeasure& nu, long long k);

/// The series Delta = 1 + 2 sum_k Delta_k, truncated once Delta_K <= tol with
/// the submultiplicative tail bound  sum_{k>K} Delta_k <= K Delta_K/(1-Delta_K).
/// `divergent` is set when Delta_k never drops below 1 within k_max steps
/// (exactly the q >= 1 regime, since Delta_k >= q^k).
struct TvSeries {
  std::vector<double> table;  // Delta_1..Delta_K
  double sum = 1.0;           // 1 + 2 * partial sum
  double tail_bound = 0.0;    // on the full sum (already doubled)
  bool divergent = false;
  int k_stop = 0;

  double at(int k) const { return table.at(static_cast<std::size_t>(k) - 1); }
};

TvSeries tv_series(const FiniteMeasure& nu, double tol = 1e-12, int k_max = 20000);

/// Weighted tail sum_{d>=1} d * Delta_d with its own submultiplicative tail
/// bound; this is the uniform bound on |exact partial-sum variance - C N|.
double tv_series_weighted(const TvSeries& s);

/// Convergence rate q: max of the spectral radii of nu-hat over nontrivial
/// irreps and (circle backend) the geometric floor of the singular parts.
struct RateReport {
  double q = 0.0;
  double spectral_term = 0.0;
  double singular_term = 0.0;   // zero on finite groups
  double window_tail = 0.0;     // circle: bound on the spectral term outside the window
  bool singular_floor = false;  // the singular term attains the max
};

RateReport convergence_rate(const FiniteMeasure& nu, const DualSet& dual);
RateReport convergence_rate(const CircleMeasure& nu, int window);

/// A_k = double integral of f(u) f(ux) d uniform(u) d nu^{*k}(x); exact.
double autocovariance(const FiniteFunction& f, const FiniteMeasure& nu, long long k);

struct SeriesValue {
  double value = 0.0;
  double bound = 0.0;  // truncation bound; FP-only terms are 0
  bool divergent = false;
};

/// C(f,nu) as ||f||_2^2 + 2 sum_k A_k, truncated with the Delta tail bound.
SeriesValue variance_constant_series(const FiniteFunction& f, const FiniteMeasure& nu,
                                     double tol = 1e-12);

/// B(pi) = I + (I - nu-hat)^{-1} nu-hat + (I - nu-hat*)^{-1} nu-hat*.
Eigen::MatrixXcd b_matrix(const Eigen::MatrixXcd& nu_hat);

/// C(f,nu) as sum over nontrivial pi of d_pi tr(f-hat f-hat* B(pi)); exact
/// finite sum. Reports divergent instead of inverting when some spectral
/// radius reaches 1.
SeriesValue variance_constant_fourier(const FiniteFunction& f, const FiniteMeasure& nu,
                                      const DualSet& dual);

/// Per-irrep terms of the Fourier form (nontrivial irreps, dual order).
std::vector<double> variance_fourier_terms(const FiniteFunction& f, const FiniteMeasure& nu,
                                           const DualSet& dual);

/// [(1-q)/(1+q), (1+q)/(1-q)] * ||f||_2^2 when f is a class function, nu-hat
/// is normal (nu * nu-reversed commutes), or nu is central; nullopt otherwise.
std::optional<std::pair<double, double>> class_central_bracket(const FiniteFunction& f,
                                                               const FiniteMeasure& nu, double q);

/// E ( sum_{k<=N} f(U S_k) )^2 = N ||f||_2^2 + 2 sum_{d<N} (N-d) A_d; exact.
double stationary_sum_variance(const FiniteFunction& f, const FiniteMeasure& nu, long long N);

/// Same quantity for every N = 1..N_max in one pass.
std::vector<double> stationary_sum_variance_prefix(const FiniteFunction& f,
                                                   const FiniteMeasure& nu, long long N_max);

/// Berry-Esseen constant K = Delta (||f||_{2+delta} / sqrt(C))^{(2+delta)/(1+delta)}.
/// Delta's truncation slack propagates, so K comes out as an interval. With
/// use_l2_norm (valid when f is in L^4; always true here) ||f||_2 replaces
/// ||f||_{2+delta}, the variant that yields K <= 2 Delta^{7/4} for class
/// functions and central measures.
struct BeConstant {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // C = 0 (or unavailable): no CLT normalization
};

BeConstant berry_esseen_constant(const FiniteFunction& f, const SeriesValue& c,
                                 const TvSeries& delta, double delta_exp, bool use_l2_norm = false);

/// phi_{m,eps}(N) = N (prod_{i<m} log_i N) (log_m N)^{1+eps}, natural logs.
/// Throws std::domain_error when the m-fold iterated log is not positive.
double slln_normalizer(int m, double eps, double N);

/// Everything the analyze command reports for a finite-group instance.
struct AnalysisReport {
  std::string group_name;
  int order = 0;
  bool adapted = false;
  bool strictly_aperiodic = false;
  bool abs_component = false;
  RateReport rate;
  TvSeries delta;
  SeriesValue c_series;
  SeriesValue c_fourier;
  bool cross_consistent = false;  // |C_series - C_fourier| within combined bounds + 1e-9
  std::optional<std::pair<double, double>> bracket;
  bool bracket_ok = true;
  BeConstant K;        // with ||f||_{2+delta}
  BeConstant K_l2;     // L2-norm variant (delta_exp = 1)
  double delta_exp = 1.0;
  double l2_norm = 0.0;
  std::vector<std::string> warnings;
};

AnalysisReport analyze(const GroupPtr& group, const DualSet& dual, const FiniteMeasure& nu,
                       const FiniteFunction& f, double delta_exp = 1.0, double tol = 1e-12);

/// Circle-backend analysis: rate with window tail, flags, and the variance
/// constant by the closed form and by the k-series over the same window.
struct CircleAnalysis {
  bool adapted = false;
  bool abs_component = false;
  RateReport rate;
  SeriesValue c_fourier;
  SeriesValue c_series;
  BeConstant K;
  double delta_exp = 1.0;
  int window = 0;
  std::vector<std::string> warnings;
};

CircleAnalysis analyze_circle(const CircleMeasure& nu, const CircleFunction& f,
                              int window = 512, double delta_exp = 1.0, double tol = 1e-12);

}  // namespace haarwalk
