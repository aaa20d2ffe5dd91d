#include "haarwalk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace haarwalk {

namespace {

double spectral_radius(const Eigen::MatrixXcd& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// g(x) = (1/n) sum_u f(u) f(ux); A_k is its integral against nu^{*k}.
Eigen::VectorXd autocorrelation(const FiniteFunction& f) {
  const auto& g = *f.group();
  const int n = g.order();
  const auto table = g.table();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < n; ++u) {
    const double fu = f.value(u);
    if (fu == 0.0) continue;
    const int* row = table.data() + static_cast<std::size_t>(u) * n;
    for (int x = 0; x < n; ++x) out(x) += fu * f.value(row[x]);
  }
  return out / static_cast<double>(n);
}

void require_mean_zero(const FiniteFunction& f) {
  if (!f.mean_zero())
    throw std::invalid_argument("observable must have zero mean against the uniform measure");
}

constexpr double kOne = 1.0 - 1e-12;

// One step of the centered iteration theta_{k+1} = theta_k * nu, where
// theta_k = nu^{*k} - uniform. Working with the deviation keeps Delta_k
// meaningful far below the ulp of the raw weights (q^200 territory). The
// constant component is projected away after every step: it is exactly zero
// in real arithmetic but rounding feeds it back, and the convolution map does
// not contract it.
Eigen::VectorXd drop_constant_part(Eigen::VectorXd v) {
  return v.array() - v.mean();
}

Eigen::VectorXd centered_step(const FiniteGroup& g, const Eigen::VectorXd& theta,
                              const FiniteMeasure& nu) {
  const int n = g.order();
  const auto table = g.table();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int x = 0; x < n; ++x) {
    const double wx = theta(x);
    if (wx == 0.0) continue;
    const int* row = table.data() + static_cast<std::size_t>(x) * n;
    for (int y = 0; y < n; ++y) out(row[y]) += wx * nu.weight(y);
  }
  return drop_constant_part(std::move(out));
}

Eigen::VectorXd centered_start(const FiniteMeasure& nu) {
  return drop_constant_part(nu.weights().array() - 1.0 / static_cast<double>(nu.size()));
}

}  // namespace

double tv_to_uniform_at(const FiniteMeasure& nu, long long k) {
  if (k < 1) throw std::invalid_argument("need k >= 1");
  Eigen::VectorXd theta = centered_start(nu);
  for (long long i = 1; i < k; ++i) theta = centered_step(*nu.group(), theta, nu);
  return theta.cwiseAbs().sum();
}

TvSeries tv_series(const FiniteMeasure& nu, double tol, int k_max) {
  TvSeries s;
  Eigen::VectorXd theta = centered_start(nu);
  double partial = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double d = theta.cwiseAbs().sum();
    s.table.push_back(d);
    partial += d;
    s.k_stop = k;
    if (d <= tol) break;
    if (k < k_max) theta = centered_step(*nu.group(), theta, nu);
  }
  const double last = s.table.back();
  if (last >= kOne) {
    // Delta_k >= q^k, so a value pinned at or above 1 means q >= 1.
    s.divergent = true;
    s.sum = std::numeric_limits<double>::infinity();
    return s;
  }
  s.sum = 1.0 + 2.0 * partial;
  s.tail_bound = 2.0 * static_cast<double>(s.k_stop) * last / (1.0 - last);
  return s;
}

double tv_series_weighted(const TvSeries& s) {
  if (s.divergent) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t d = 0; d < s.table.size(); ++d)
    acc += static_cast<double>(d + 1) * s.table[d];
  const double K = static_cast<double>(s.k_stop);
  const double x = s.table.back();
  if (x > 0.0) acc += K * K * (2.0 * x - x * x) / ((1.0 - x) * (1.0 - x));
  return acc;
}

RateReport convergence_rate(const FiniteMeasure& nu, const DualSet& dual) {
  if (dual.group.get() != nu.group().get())
    throw std::invalid_argument("dual set belongs to a different group");
  RateReport r;
  for (std::size_t i = 1; i < dual.irreps.size(); ++i)
    r.spectral_term = std::max(r.spectral_term, spectral_radius(fourier_coefficient(nu, dual.irreps[i])));
  r.singular_term = 0.0;  // every measure on a finite group is absolutely continuous
  r.q = r.spectral_term;
  return r;
}

RateReport convergence_rate(const CircleMeasure& nu, int window) {
  RateReport r;
  for (int n = 1; n <= window; ++n)
    r.spectral_term = std::max(r.spectral_term, std::abs(fourier_coefficient(nu, n)));
  r.singular_term = nu.atom_mass();
  // Outside the window the density coefficients decay like V/(2 pi n), V the
  // total jump variation of the piecewise-constant density.
  double jump_var = 0.0;
  const auto& v = nu.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    jump_var += std::abs(v[i] - v[i == 0 ? v.size() - 1 : i - 1]);
  r.window_tail = jump_var / (2.0 * std::numbers::pi * (window + 1));
  r.q = std::max(r.spectral_term, r.singular_term);
  r.singular_floor = r.singular_term >= r.spectral_term && r.singular_term > 0.0;
  return r;
}

double autocovariance(const FiniteFunction& f, const FiniteMeasure& nu, long long k) {
  require_mean_zero(f);
  // The autocorrelation has zero mean, so pairing it with the centered power
  // equals pairing it with nu^{*k}.
  if (k < 1) throw std::invalid_argument("need k >= 1");
  Eigen::VectorXd theta = centered_start(nu);
  for (long long i = 1; i < k; ++i) theta = centered_step(*nu.group(), theta, nu);
  return autocorrelation(f).dot(theta);
}

SeriesValue variance_constant_series(const FiniteFunction& f, const FiniteMeasure& nu, double tol) {
  require_mean_zero(f);
  const Eigen::VectorXd g = autocorrelation(f);
  const double l2sq = f.lp_norm(2.0) * f.lp_norm(2.0);

  SeriesValue out;
  Eigen::VectorXd theta = centered_start(nu);
  double acc = l2sq;
  constexpr int k_max = 20000;
  double d = 2.0;
  int k = 1;
  for (; k <= k_max; ++k) {
    d = theta.cwiseAbs().sum();
    acc += 2.0 * g.dot(theta);
    if (d <= tol) break;
    if (k < k_max) theta = centered_step(*nu.group(), theta, nu);
  }
  if (d >= kOne) {
    out.divergent = true;
    return out;
  }
  out.value = acc;
  out.bound = 2.0 * l2sq * (static_cast<double>(std::min(k, k_max)) * d / (1.0 - d));
  return out;
}

Eigen::MatrixXcd b_matrix(const Eigen::MatrixXcd& nu_hat) {
  const int d = static_cast<int>(nu_hat.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd a = nu_hat;
  return id + (id - a).fullPivLu().solve(a) + (id - a.adjoint()).fullPivLu().solve(a.adjoint());
}

std::vector<double> variance_fourier_terms(const FiniteFunction& f, const FiniteMeasure& nu,
                                           const DualSet& dual) {
  require_mean_zero(f);
  std::vector<double> terms;
  for (std::size_t i = 1; i < dual.irreps.size(); ++i) {
    const auto& pi = dual.irreps[i];
    const Eigen::MatrixXcd nu_hat = fourier_coefficient(nu, pi);
    if (spectral_radius(nu_hat) >= kOne)
      throw std::domain_error("variance constant diverges: spectral radius at 1 for irrep " + pi.label);
    const Eigen::MatrixXcd f_hat = fourier_coefficient(f, pi);
    // With f-hat = integral of f pi* and nu-hat = integral of pi*, the
    // shifted function h_k(u) = integral of f(ux) d nu^{*k} transforms as
    // h_k-hat = (nu-hat^k)* f-hat, so the quadratic form pairs f-hat f-hat*
    // with B; the adjoint sits on the right.
    const std::complex<double> t = (f_hat * f_hat.adjoint() * b_matrix(nu_hat)).trace();
    terms.push_back(static_cast<double>(pi.dim) * t.real());
  }
  return terms;
}

SeriesValue variance_constant_fourier(const FiniteFunction& f, const FiniteMeasure& nu,
                                      const DualSet& dual) {
  SeriesValue out;
  try {
    double acc = 0.0;
    for (double t : variance_fourier_terms(f, nu, dual)) acc += t;
    out.value = acc;
  } catch (const std::domain_error&) {
    out.divergent = true;
  }
  return out;
}

std::optional<std::pair<double, double>> class_central_bracket(const FiniteFunction& f,
                                                               const FiniteMeasure& nu, double q) {
  if (q >= kOne) return std::nullopt;
  bool applies = f.is_class_function() || is_central(nu);
  if (!applies) {
    const FiniteMeasure rev = nu.reversed();
    applies = tv_distance(convolve(nu, rev), convolve(rev, nu)) <= 1e-12;
  }
  if (!applies) return std::nullopt;
  const double l2sq = f.lp_norm(2.0) * f.lp_norm(2.0);
  return std::make_pair((1.0 - q) / (1.0 + q) * l2sq, (1.0 + q) / (1.0 - q) * l2sq);
}

double stationary_sum_variance(const FiniteFunction& f, const FiniteMeasure& nu, long long N) {
  return stationary_sum_variance_prefix(f, nu, N).back();
}

std::vector<double> stationary_sum_variance_prefix(const FiniteFunction& f,
                                                   const FiniteMeasure& nu, long long N_max) {
  require_mean_zero(f);
  if (N_max < 1) throw std::invalid_argument("need N >= 1");
  const Eigen::VectorXd g = autocorrelation(f);
  const double l2sq = f.lp_norm(2.0) * f.lp_norm(2.0);
  std::vector<double> out(static_cast<std::size_t>(N_max));
  Eigen::VectorXd theta = centered_start(nu);
  double sum_a = 0.0;   // sum of A_d, d < N
  double sum_da = 0.0;  // sum of d A_d, d < N
  out[0] = l2sq;
  for (long long N = 2; N <= N_max; ++N) {
    const long long d = N - 1;
    const double a_d = g.dot(theta);
    sum_a += a_d;
    sum_da += static_cast<double>(d) * a_d;
    out[static_cast<std::size_t>(N) - 1] =
        static_cast<double>(N) * l2sq + 2.0 * (static_cast<double>(N) * sum_a - sum_da);
    if (N < N_max) theta = centered_step(*nu.group(), theta, nu);
  }
  return out;
}

BeConstant berry_esseen_constant(const FiniteFunction& f, const SeriesValue& c,
                                 const TvSeries& delta, double delta_exp, bool use_l2_norm) {
  if (delta_exp <= 0.0 || delta_exp > 1.0)
    throw std::invalid_argument("delta exponent must lie in (0,1]");
  BeConstant k;
  if (c.divergent || delta.divergent || c.value <= 1e-12 * f.lp_norm(2.0) * f.lp_norm(2.0)) {
    k.degenerate = true;
    return k;
  }
  const double norm = use_l2_norm ? f.lp_norm(2.0) : f.lp_norm(2.0 + delta_exp);
  const double expo = (2.0 + delta_exp) / (1.0 + delta_exp);
  const double base = std::pow(norm / std::sqrt(c.value), expo);
  k.lo = delta.sum * base;
  k.hi = (delta.sum + delta.tail_bound) * base;
  return k;
}

double slln_normalizer(int m, double eps, double N) {
  if (m < 1) throw std::invalid_argument("iterated-log depth must be >= 1");
  if (eps <= 0.0) throw std::invalid_argument("epsilon must be positive");
  double value = N;
  double l = N;
  for (int i = 1; i <= m; ++i) {
    l = std::log(l);
    if (!(l > 0.0)) throw std::domain_error("N below the iterated-log domain");
    if (i < m) value *= l;
  }
  return value * std::pow(l, 1.0 + eps);
}

AnalysisReport analyze(const GroupPtr& group, const DualSet& dual, const FiniteMeasure& nu,
                       const FiniteFunction& f, double delta_exp, double tol) {
  require_mean_zero(f);
  AnalysisReport r;
  r.group_name = group->name();
  r.order = group->order();
  r.adapted = is_adapted(nu);
  r.strictly_aperiodic = is_strictly_aperiodic(nu);
  r.abs_component = has_abs_component(nu);
  r.rate = convergence_rate(nu, dual);
  r.delta = tv_series(nu, tol);
  r.c_series = variance_constant_series(f, nu, tol);
  r.c_fourier = variance_constant_fourier(f, nu, dual);
  r.delta_exp = delta_exp;
  r.l2_norm = f.lp_norm(2.0);

  if (!r.c_series.divergent && !r.c_fourier.divergent) {
    const double gap = std::abs(r.c_series.value - r.c_fourier.value);
    r.cross_consistent = gap <= r.c_series.bound + r.c_fourier.bound + 1e-9;
    if (!r.cross_consistent) r.warnings.push_back("series and Fourier variance constants disagree");
    const double l2sq = r.l2_norm * r.l2_norm;
    if (r.c_fourier.value < -1e-10 ||
        (!r.delta.divergent && r.c_fourier.value > l2sq * (r.delta.sum + r.delta.tail_bound) + 1e-9))
      r.warnings.push_back("variance constant outside [0, ||f||_2^2 Delta]");
  } else {
    r.cross_consistent = r.c_series.divergent == r.c_fourier.divergent;
    if (!r.cross_consistent) r.warnings.push_back("one variance route diverged, the other did not");
  }

  if (r.rate.q < 1.0 && !r.delta.divergent &&
      r.delta.sum + r.delta.tail_bound < 1.0 / (1.0 - r.rate.q) - 1e-9)
    r.warnings.push_back("Delta fell below 1/(1-q)");

  r.bracket = class_central_bracket(f, nu, r.rate.q);
  if (r.bracket && !r.c_fourier.divergent) {
    r.bracket_ok = r.c_fourier.value >= r.bracket->first - 1e-9 &&
                   r.c_fourier.value <= r.bracket->second + 1e-9;
    if (!r.bracket_ok) r.warnings.push_back("variance constant escapes the class/central bracket");
  }

  r.K = berry_esseen_constant(f, r.c_fourier, r.delta, delta_exp, false);
  r.K_l2 = berry_esseen_constant(f, r.c_fourier, r.delta, 1.0, true);
  return r;
}

CircleAnalysis analyze_circle(const CircleMeasure& nu, const CircleFunction& f, int window,
                              double delta_exp, double tol) {
  if (!f.mean_zero())
    throw std::invalid_argument("observable must have zero mean against the uniform measure");
  CircleAnalysis r;
  r.window = window;
  r.delta_exp = delta_exp;
  r.adapted = is_adapted(nu);
  r.abs_component = has_abs_component(nu);
  r.rate = convergence_rate(nu, window);

  const double q_hi = std::max(r.rate.q, r.rate.singular_term + r.rate.window_tail);
  const double l2 = f.lp_norm(2.0);
  const double l2sq = l2 * l2;

  if (q_hi >= kOne) {
    r.c_fourier.divergent = true;
    r.c_series.divergent = true;
    r.K.degenerate = true;
    if (r.rate.singular_floor) r.warnings.push_back("rate pinned at the singular floor");
    return r;
  }

  // Window data shared by both routes; in-window sums are exact.
  std::vector<double> fsq(static_cast<std::size_t>(window) + 1, 0.0);
  std::vector<std::complex<double>> lambda(static_cast<std::size_t>(window) + 1);
  double window_l2sq = 0.0;
  for (int n = 1; n <= window; ++n) {
    fsq[static_cast<std::size_t>(n)] = std::norm(f.fourier(n));
    lambda[static_cast<std::size_t>(n)] = fourier_coefficient(nu, n);
    window_l2sq += 2.0 * fsq[static_cast<std::size_t>(n)];
  }
  // Mean-zero, so the out-of-window coefficient mass is the L2 defect.
  const double out_mass = std::max(l2sq - window_l2sq, 0.0);
  // |b(lambda) - 1| <= 2 q / (1 - q) uniformly over |lambda| <= q_hi.
  const double out_slack = out_mass * 2.0 * q_hi / (1.0 - q_hi);

  double cf = 0.0;
  for (int n = 1; n <= window; ++n) {
    const std::complex<double> l = lambda[static_cast<std::size_t>(n)];
    const double b = (1.0 - std::norm(l)) / std::norm(1.0 - l);
    cf += 2.0 * fsq[static_cast<std::size_t>(n)] * b;
  }
  r.c_fourier.value = cf + out_mass;  // out-of-window terms counted with b = 1
  r.c_fourier.bound = out_slack;

  // Series route over the same window, truncated in k. The in-window A_k is
  // bounded by window_l2sq q_spec^k with q_spec the in-window spectral term.
  const double q_spec = r.rate.spectral_term;
  double acc = window_l2sq;
  std::vector<std::complex<double>> pow_l(lambda);
  double k_tail = 0.0;
  const int k_cap = 200000;
  for (int k = 1; k <= k_cap; ++k) {
    double a_k = 0.0;
    for (int n = 1; n <= window; ++n)
      a_k += 2.0 * fsq[static_cast<std::size_t>(n)] * pow_l[static_cast<std::size_t>(n)].real();
    acc += 2.0 * a_k;
    const double env = window_l2sq * std::pow(q_spec, k);
    if (env <= tol || k == k_cap) {
      k_tail = 2.0 * window_l2sq * std::pow(q_spec, k + 1) / (1.0 - q_spec);
      break;
    }
    for (int n = 1; n <= window; ++n)
      pow_l[static_cast<std::size_t>(n)] *= lambda[static_cast<std::size_t>(n)];
  }
  r.c_series.value = acc + out_mass;
  r.c_series.bound = k_tail + out_slack;
  if (std::abs(r.c_series.value - r.c_fourier.value) >
      r.c_series.bound + r.c_fourier.bound + 1e-9)
    r.warnings.push_back("series and Fourier variance constants disagree");

  // Delta by exact convolution powers inside the class, if the grids allow.
  try {
    TvSeries delta;
    CircleMeasure power = nu;
    double partial = 0.0;
    double err_acc = 0.0;
    const int k_max = 512;
    for (int k = 1; k <= k_max; ++k) {
      const double d = tv_to_uniform(power);
      delta.table.push_back(d);
      partial += d;
      err_acc += power.l1_error();
      delta.k_stop = k;
      if (d <= tol) break;
      if (k < k_max) power = convolve(power, nu);
    }
    const double last = delta.table.back();
    if (last >= kOne) {
      delta.divergent = true;
    } else if (last <= tol || last < 1.0) {
      delta.sum = 1.0 + 2.0 * partial;
      delta.tail_bound =
          2.0 * static_cast<double>(delta.k_stop) * last / (1.0 - last) + 2.0 * err_acc;
      // Berry-Esseen constant: exact L^{2+delta} norms are available for
      // piecewise observables; the series form uses quadrature otherwise.
      SeriesValue c = r.c_fourier;
      BeConstant k;
      if (c.divergent || c.value <= 1e-12 * l2sq) {
        k.degenerate = true;
      } else {
        const double norm = f.lp_norm(2.0 + delta_exp);
        const double expo = (2.0 + delta_exp) / (1.0 + delta_exp);
        const double base = std::pow(norm / std::sqrt(c.value), expo);
        k.lo = delta.sum * base;
        k.hi = (delta.sum + delta.tail_bound) * base;
      }
      r.K = k;
      return r;
    }
    r.K.degenerate = true;
  } catch (const std::exception&) {
    r.K.degenerate = true;
    r.warnings.push_back("Delta series unavailable: convolution grid cap reached");
  }
  return r;
}

}  // namespace haarwalk
