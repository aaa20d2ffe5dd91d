// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <cmath>
#include <vector>

#include "haarwalk/walk.hpp"

namespace haarwalk::testing {

// Exact E ( sum_{k=1}^N f(S_k) )^2 for the identity-start walk on a finite
// group, by dynamic programming over convolution powers:
//   E f(S_k) f(S_{k+d}) = sum_x nu^{*k}(x) f(x) h_d(x),
//   h_d(x) = sum_y f(xy) nu^{*d}(y).
inline double exact_walk_sum_second_moment(const FiniteWalkInstance& inst, long long N) {
  const auto& g = *inst.group;
  const int n = g.order();
  const auto& f = inst.observable;

  std::vector<Eigen::VectorXd> powers;  // nu^{*k}, k = 1..N
  powers.reserve(static_cast<std::size_t>(N));
  powers.push_back(inst.step_law.weights());
  for (long long k = 2; k <= N; ++k) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd& prev = powers.back();
    for (int x = 0; x < n; ++x) {
      if (prev(x) == 0.0) continue;
      for (int y = 0; y < n; ++y) next(g.compose(x, y)) += prev(x) * inst.step_law.weight(y);
    }
    powers.push_back(std::move(next));
  }

  std::vector<Eigen::VectorXd> prefix;  // P_m = sum_{k<=m} nu^{*k}
  prefix.reserve(static_cast<std::size_t>(N));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (const auto& p : powers) {
    acc += p;
    prefix.push_back(acc);
  }

  double total = 0.0;
  for (int x = 0; x < n; ++x) total += prefix.back()(x) * f.value(x) * f.value(x);
  for (long long d = 1; d < N; ++d) {
    const Eigen::VectorXd& pd = powers[static_cast<std::size_t>(d) - 1];
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) h(x) += f.value(g.compose(x, y)) * pd(y);
    const Eigen::VectorXd& pref = prefix[static_cast<std::size_t>(N - d) - 1];
    double cross = 0.0;
    for (int x = 0; x < n; ++x) cross += pref(x) * f.value(x) * h(x);
    total += 2.0 * cross;
  }
  return total;
}

// High-precision normal distribution function: Taylor series with positive
// terms in long double, symmetric continuation for the negative half.
inline long double normal_cdf_series(long double x) {
  if (x < 0) return 1.0L - normal_cdf_series(-x);
  const long double phi = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  long double term = x;  // x^{2n+1} / (2n+1)!!
  long double sum = term;
  for (int n = 1; n < 400; ++n) {
    term *= x * x / (2.0L * n + 1.0L);
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return 0.5L + phi * sum;
}

}  // namespace haarwalk::testing
