#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "haarwalk/group.hpp"

namespace haarwalk {

/// A finite (possibly signed) Borel measure on a finite group: one weight per
/// element index. Probability measures are validated at construction.
class FiniteMeasure {
public:
  /// Probability measure; weights must be nonnegative and sum to 1 (1e-12).
  static FiniteMeasure probability(GroupPtr group, Eigen::VectorXd weights);

  /// Signed measure; arbitrary weights.
  static FiniteMeasure signed_measure(GroupPtr group, Eigen::VectorXd weights);

  static FiniteMeasure uniform(GroupPtr group);
  static FiniteMeasure dirac(GroupPtr group, Element at);

  const GroupPtr& group() const noexcept { return group_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double weight(Element x) const { return weights_(x); }
  int size() const noexcept { return static_cast<int>(weights_.size()); }
  bool is_probability() const noexcept { return probability_; }

  /// Indices with strictly positive weight.
  std::vector<Element> support() const;

  /// Distribution of X^{-1}.
  FiniteMeasure reversed() const;

private:
  FiniteMeasure(GroupPtr g, Eigen::VectorXd w, bool prob)
      : group_(std::move(g)), weights_(std::move(w)), probability_(prob) {}
  GroupPtr group_;
  Eigen::VectorXd weights_;
  bool probability_ = false;
};

/// Exact convolution: out[z] = sum over xy = z of a(x) b(y). Matches the
/// pairing  integral of f d(a*b) = double integral of f(xy) da(x) db(y).
FiniteMeasure convolve(const FiniteMeasure& a, const FiniteMeasure& b);

/// k-fold convolution power via binary powering (fixed association order, so
/// results are bit-deterministic). k >= 1.
FiniteMeasure convolution_power(const FiniteMeasure& nu, long long k);

/// Total variation in the supremum-functional convention: sum of |weights|.
/// Differences of probability measures land in [0, 2].
double tv_norm(const FiniteMeasure& signed_measure);

/// TV distance between two measures on the same group.
double tv_distance(const FiniteMeasure& a, const FiniteMeasure& b);

/// Support generates the whole group.
bool is_adapted(const FiniteMeasure& nu);

/// Support is in no coset of a proper normal subgroup: the normal closure of
/// s0^{-1} support is everything (any fixed s0 in the support).
bool is_strictly_aperiodic(const FiniteMeasure& nu);

/// On a finite group every measure is absolutely continuous with respect to
/// the uniform measure, so this is constant true (kept for interface parity
/// with the circle backend).
bool has_abs_component(const FiniteMeasure& nu);

/// Is nu invariant under conjugation.
bool is_central(const FiniteMeasure& nu, double tol = 1e-12);

/// Maximal coupling of nu against the uniform measure: full joint table with
/// min-mass diagonal and outer-product residuals. offdiag_mass equals half
/// the TV distance exactly.
struct Coupling {
  GroupPtr group;
  Eigen::MatrixXd joint;  // row marginal nu, column marginal uniform
  double offdiag_mass = 0.0;
};

Coupling maximal_coupling(const FiniteMeasure& nu);

/// Draws pairs from a coupling's joint table.
class CouplingSampler {
public:
  explicit CouplingSampler(const Coupling& c);
  std::pair<Element, Element> sample(RngStream& rng) const;

private:
  int n_ = 0;
  std::vector<double> flat_cum_;
};

}  // namespace haarwalk
