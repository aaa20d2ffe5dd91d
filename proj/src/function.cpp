#include "haarwalk/function.hpp"

#include <cmath>
#include <stdexcept>

namespace haarwalk {

FiniteFunction::FiniteFunction(GroupPtr group, Eigen::VectorXd values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (!group_) throw std::invalid_argument("null group");
  if (values_.size() != group_->order())
    throw std::invalid_argument("value vector length must equal group order");
  const double n = static_cast<double>(values_.size());
  mean_ = values_.sum() / n;
  for (int p = 1; p <= 4; ++p)
    norms_[p - 1] = std::pow(values_.array().abs().pow(p).sum() / n, 1.0 / p);
}

FiniteFunction FiniteFunction::demeaned(GroupPtr group, Eigen::VectorXd values) {
  const double m = values.sum() / static_cast<double>(values.size());
  return FiniteFunction(std::move(group), values.array() - m);
}

double FiniteFunction::lp_norm(double p) const {
  if (p == 1.0 || p == 2.0 || p == 3.0 || p == 4.0) return norms_[static_cast<int>(p) - 1];
  const double n = static_cast<double>(values_.size());
  return std::pow(values_.array().abs().pow(p).sum() / n, 1.0 / p);
}

double FiniteFunction::shifted_pth_moment_sup(const FiniteMeasure& nu, double p) const {
  if (nu.group().get() != group_.get()) throw std::invalid_argument("measure on a different group");
  const auto& g = *group_;
  double best = 0.0;
  for (Element c = 0; c < g.order(); ++c) {
    double m = 0.0;
    for (Element x = 0; x < g.order(); ++x)
      m += std::pow(std::abs(values_(g.compose(c, x))), p) * nu.weight(x);
    best = std::max(best, m);
  }
  return best;
}

bool FiniteFunction::is_class_function(double tol) const {
  const auto& g = *group_;
  for (Element x = 0; x < g.order(); ++x)
    for (Element c = 0; c < g.order(); ++c)
      if (std::abs(values_(g.conjugate(c, x)) - values_(x)) > tol) return false;
  return true;
}

}  // namespace haarwalk
