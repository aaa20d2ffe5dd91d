#pragma once

#include <Eigen/Dense>
#include <array>

#include "haarwalk/group.hpp"
#include "haarwalk/measure.hpp"

namespace haarwalk {

/// Real-valued observable on a finite group: one value per element index,
/// with cached mean and L^p norms (p = 1..4) against the uniform measure.
class FiniteFunction {
public:
  FiniteFunction(GroupPtr group, Eigen::VectorXd values);

  /// Same values shifted by a constant so the mean is exactly zero.
  static FiniteFunction demeaned(GroupPtr group, Eigen::VectorXd values);

  const GroupPtr& group() const noexcept { return group_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double value(Element x) const { return values_(x); }
  int size() const noexcept { return static_cast<int>(values_.size()); }

  double mean() const noexcept { return mean_; }
  bool mean_zero() const noexcept { return std::abs(mean_) <= 1e-12; }

  /// ((1/n) sum |f|^p)^{1/p}; cached for integer p in 1..4, exact otherwise.
  double lp_norm(double p) const;
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

  /// L_p = sup_c E|f(cX)|^p, the supremum running over all shifts; exact max
  /// over the n left translates.
  double shifted_pth_moment_sup(const FiniteMeasure& nu, double p) const;

  bool is_class_function(double tol = 1e-12) const;

private:
  GroupPtr group_;
  Eigen::VectorXd values_;
  double mean_ = 0.0;
  std::array<double, 4> norms_{};  // p = 1..4
};

}  // namespace haarwalk
