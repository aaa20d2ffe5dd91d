#include "haarwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haarwalk/spectral.hpp"

namespace haarwalk {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile needs p in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_vs_standard_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = normal_cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - F);
    d = std::max(d, F - static_cast<double>(i) / n);
  }
  return d;
}

double chi_square_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("df must be positive");
  const double z = normal_quantile(p);
  const double a = 2.0 / (9.0 * df);
  const double c = 1.0 - a + z * std::sqrt(a);
  return df * c * c * c;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<std::size_t> late_checkpoints(const TrajectoryBatch& b) {
  if (b.checkpoints.empty()) return {};
  const long long lo = b.checkpoints.back() / 10;
  std::vector<std::size_t> idx;
  for (std::size_t c = 0; c < b.checkpoints.size(); ++c)
    if (b.checkpoints[c] >= lo) idx.push_back(c);
  return idx;
}

// RMS of sum_n / sqrt(n) across replicas, the L2 decay statistic of the
// degenerate branch.
LawVerdict degenerate_decay_verdict(const TrajectoryBatch& b, const std::string& law) {
  LawVerdict v;
  v.law = law;
  v.degenerate = true;
  if (b.checkpoints.empty()) throw std::invalid_argument("degenerate check needs checkpoints");
  std::vector<double> rms;
  for (std::size_t c = 0; c < b.checkpoints.size(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < b.replicas; ++r) {
      const double s = b.sum_at(r, static_cast<int>(c));
      acc += s * s;
    }
    rms.push_back(std::sqrt(acc / b.replicas / static_cast<double>(b.checkpoints[c])));
    v.diagnostics.emplace_back(b.checkpoints[c], rms.back());
  }
  v.statistic = rms.back();
  v.reference_lo = 0.0;
  v.reference_hi = 0.05;
  v.trend_ok = rms.back() <= rms.front() + 1e-12;
  v.pass = v.statistic <= v.reference_hi && v.trend_ok;
  v.note = "L2 decay branch: sum_N / sqrt(N) must vanish";
  return v;
}

}  // namespace

std::vector<std::pair<long long, double>> phi_normalized_trace(const TrajectoryBatch& b, int m,
                                                               double eps, double p) {
  std::vector<std::pair<long long, double>> trace;
  for (std::size_t c = 0; c < b.checkpoints.size(); ++c) {
    const double norm = std::pow(slln_normalizer(m, eps, static_cast<double>(b.checkpoints[c])),
                                 1.0 / p);
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(b.replicas));
    for (int r = 0; r < b.replicas; ++r)
      vals.push_back(std::abs(b.sum_at(r, static_cast<int>(c))) / norm);
    trace.emplace_back(b.checkpoints[c], median(std::move(vals)));
  }
  return trace;
}

LawVerdict slln_verdict(const TrajectoryBatch& b, int m, double eps, double p, double cap) {
  const auto late = late_checkpoints(b);
  if (late.size() < 2) throw std::invalid_argument("slln verdict needs at least two late checkpoints");
  LawVerdict v;
  v.law = "slln";
  std::vector<double> norms(b.checkpoints.size());
  for (std::size_t c : late)
    norms[c] = std::pow(slln_normalizer(m, eps, static_cast<double>(b.checkpoints[c])), 1.0 / p);

  std::vector<double> per_replica;
  per_replica.reserve(static_cast<std::size_t>(b.replicas));
  for (int r = 0; r < b.replicas; ++r) {
    double best = 0.0;
    for (std::size_t c : late)
      best = std::max(best, std::abs(b.sum_at(r, static_cast<int>(c))) / norms[c]);
    per_replica.push_back(best);
  }
  v.statistic = median(std::move(per_replica));
  v.diagnostics = phi_normalized_trace(b, m, eps, p);
  const double first_late = v.diagnostics[v.diagnostics.size() - late.size()].second;
  const double last = v.diagnostics.back().second;
  v.trend_ok = last <= first_late * 1.05 + 1e-12;
  v.reference_lo = 0.0;
  v.reference_hi = cap;
  v.pass = v.statistic <= cap && v.trend_ok;
  return v;
}

LawVerdict lil_verdict(const TrajectoryBatch& b, std::optional<double> C) {
  if (!C || *C <= 0.0) return degenerate_decay_verdict(b, "lil");
  LawVerdict v;
  v.law = "lil";
  const double scale = 1.0 / std::sqrt(2.0 * *C);
  std::vector<double> per_replica;
  per_replica.reserve(static_cast<std::size_t>(b.replicas));
  if (!b.lil_raw.empty()) {
    for (double raw : b.lil_raw) per_replica.push_back(raw * scale);
  } else {
    const auto late = late_checkpoints(b);
    if (late.empty()) throw std::invalid_argument("lil verdict needs late checkpoints or tracking");
    for (int r = 0; r < b.replicas; ++r) {
      double best = 0.0;
      for (std::size_t c : late) {
        const double n = static_cast<double>(b.checkpoints[c]);
        if (std::log(std::log(n)) <= 0.0) continue;
        best = std::max(best, std::abs(b.sum_at(r, static_cast<int>(c))) /
                                  std::sqrt(n * std::log(std::log(n))));
      }
      per_replica.push_back(best * scale);
    }
  }
  v.statistic = median(std::move(per_replica));
  v.reference_lo = 0.5;
  v.reference_hi = 1.3;
  v.pass = v.statistic >= v.reference_lo && v.statistic <= v.reference_hi;
  return v;
}

LawVerdict clt_verdict(const TrajectoryBatch& b, std::optional<double> C, double delta_exp,
                       double K_hi) {
  if (!C || *C <= 0.0) return degenerate_decay_verdict(b, "clt");
  if (b.checkpoints.empty()) throw std::invalid_argument("clt verdict needs checkpoints");
  LawVerdict v;
  v.law = "clt";
  const double noise_floor = 1.36 / std::sqrt(static_cast<double>(b.replicas));
  double ks_final = 0.0;
  double ref_final = 0.0;
  for (std::size_t c = 0; c < b.checkpoints.size(); ++c) {
    const double n = static_cast<double>(b.checkpoints[c]);
    std::vector<double> sample;
    sample.reserve(static_cast<std::size_t>(b.replicas));
    for (int r = 0; r < b.replicas; ++r)
      sample.push_back(b.sum_at(r, static_cast<int>(c)) / std::sqrt(*C * n));
    const double ks = ks_vs_standard_normal(std::move(sample));
    v.diagnostics.emplace_back(b.checkpoints[c], ks);
    if (c + 1 == b.checkpoints.size()) {
      ks_final = ks;
      ref_final = K_hi * std::pow(std::log(n), delta_exp / (1.0 + delta_exp)) /
                  std::pow(n, delta_exp / (2.0 + 2.0 * delta_exp));
    }
  }
  for (std::size_t c = 1; c < v.diagnostics.size(); ++c)
    v.trend_ok = v.trend_ok && v.diagnostics[c].second <= v.diagnostics[c - 1].second + noise_floor;
  v.statistic = ks_final;
  v.reference_lo = 3.0 * noise_floor;
  v.reference_hi = std::max(3.0 * noise_floor, ref_final);
  v.pass = ks_final <= v.reference_hi;
  v.note = "reference is max(3x KS noise floor, K x Lyapunov rate)";
  return v;
}

std::vector<std::pair<double, double>> moment_norms(const TrajectoryBatch& b, double p) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t c = 0; c < b.checkpoints.size(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < b.replicas; ++r)
      acc += std::pow(std::abs(b.sum_at(r, static_cast<int>(c))), p);
    out.emplace_back(static_cast<double>(b.checkpoints[c]),
                     std::pow(acc / b.replicas, 1.0 / p));
  }
  return out;
}

LawVerdict moment_growth_verdict(const std::vector<std::pair<double, double>>& pts, double p) {
  if (pts.size() < 3) throw std::invalid_argument("moment growth fit needs at least 3 horizons");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, norm] : pts) {
    const double x = std::log(n);
    const double y = std::log(std::max(norm, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  LawVerdict v;
  v.law = "moment-growth";
  v.statistic = slope;
  v.reference_hi = p < 2.0 ? 1.0 / p + 0.05 : 0.55;
  v.reference_lo = 0.0;
  v.pass = slope <= v.reference_hi;
  for (const auto& [n, norm] : pts) v.diagnostics.emplace_back(static_cast<long long>(n), norm);
  return v;
}

}  // namespace haarwalk
