#include "haarwalk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haarwalk {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void require_same_group(const FiniteMeasure& a, const FiniteMeasure& b) {
  require(a.group().get() == b.group().get(), "measures live on different groups");
}

}  // namespace

FiniteMeasure FiniteMeasure::probability(GroupPtr group, Eigen::VectorXd weights) {
  require(static_cast<bool>(group), "null group");
  require(weights.size() == group->order(), "weight vector length must equal group order");
  require((weights.array() >= 0.0).all(), "probability weights must be nonnegative");
  require(std::abs(weights.sum() - 1.0) <= 1e-12, "probability weights must sum to 1");
  return FiniteMeasure(std::move(group), std::move(weights), true);
}

FiniteMeasure FiniteMeasure::signed_measure(GroupPtr group, Eigen::VectorXd weights) {
  require(static_cast<bool>(group), "null group");
  require(weights.size() == group->order(), "weight vector length must equal group order");
  return FiniteMeasure(std::move(group), std::move(weights), false);
}

FiniteMeasure FiniteMeasure::uniform(GroupPtr group) {
  const int n = group->order();
  return probability(std::move(group), Eigen::VectorXd::Constant(n, 1.0 / n));
}

FiniteMeasure FiniteMeasure::dirac(GroupPtr group, Element at) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(group->order());
  w(at) = 1.0;
  return probability(std::move(group), std::move(w));
}

std::vector<Element> FiniteMeasure::support() const {
  std::vector<Element> s;
  for (int x = 0; x < size(); ++x)
    if (weights_(x) > 0.0) s.push_back(x);
  return s;
}

FiniteMeasure FiniteMeasure::reversed() const {
  Eigen::VectorXd w(size());
  for (int x = 0; x < size(); ++x) w(group_->inverse(x)) = weights_(x);
  return FiniteMeasure(group_, std::move(w), probability_);
}

FiniteMeasure convolve(const FiniteMeasure& a, const FiniteMeasure& b) {
  require_same_group(a, b);
  const auto& g = *a.group();
  const int n = g.order();
  const auto table = g.table();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int x = 0; x < n; ++x) {
    const double wx = a.weight(x);
    if (wx == 0.0) continue;
    const int* row = table.data() + static_cast<std::size_t>(x) * n;
    for (int y = 0; y < n; ++y) out(row[y]) += wx * b.weight(y);
  }
  bool prob = a.is_probability() && b.is_probability();
  return prob ? FiniteMeasure::probability(a.group(), std::move(out))
              : FiniteMeasure::signed_measure(a.group(), std::move(out));
}

FiniteMeasure convolution_power(const FiniteMeasure& nu, long long k) {
  require(k >= 1, "convolution power needs k >= 1");
  FiniteMeasure acc = nu;
  bool have = false;
  FiniteMeasure result = nu;  // placeholder until first bit is consumed
  long long bits = k;
  while (bits > 0) {
    if (bits & 1) {
      result = have ? convolve(result, acc) : acc;
      have = true;
    }
    bits >>= 1;
    if (bits > 0) acc = convolve(acc, acc);
  }
  return result;
}

double tv_norm(const FiniteMeasure& m) { return m.weights().cwiseAbs().sum(); }

double tv_distance(const FiniteMeasure& a, const FiniteMeasure& b) {
  require_same_group(a, b);
  return (a.weights() - b.weights()).cwiseAbs().sum();
}

bool is_adapted(const FiniteMeasure& nu) {
  require(nu.is_probability(), "adaptedness is defined for probability measures");
  auto supp = nu.support();
  require(!supp.empty(), "measure has empty support");
  return generated_subgroup(nu.group(), supp).is_whole_group();
}

bool is_strictly_aperiodic(const FiniteMeasure& nu) {
  require(nu.is_probability(), "strict aperiodicity is defined for probability measures");
  auto supp = nu.support();
  require(!supp.empty(), "measure has empty support");
  const auto& g = *nu.group();
  const Element s0inv = g.inverse(supp.front());
  std::vector<Element> diffs;
  diffs.reserve(supp.size());
  for (Element s : supp) diffs.push_back(g.compose(s0inv, s));
  return normal_closure(nu.group(), diffs).is_whole_group();
}

bool has_abs_component(const FiniteMeasure& nu) {
  require(nu.is_probability(), "expected a probability measure");
  return true;
}

bool is_central(const FiniteMeasure& nu, double tol) {
  const auto& g = *nu.group();
  for (int x = 0; x < g.order(); ++x)
    for (int c = 0; c < g.order(); ++c)
      if (std::abs(nu.weight(g.conjugate(c, x)) - nu.weight(x)) > tol) return false;
  return true;
}

Coupling maximal_coupling(const FiniteMeasure& nu) {
  require(nu.is_probability(), "maximal coupling needs a probability measure");
  require(nu.size() <= 4096, "couplings materialize the full joint table; order capped at 4096");
  const int n = nu.size();
  const double u = 1.0 / n;
  Eigen::VectorXd diag(n), row_res(n), col_res(n);
  for (int x = 0; x < n; ++x) {
    diag(x) = std::min(nu.weight(x), u);
    row_res(x) = nu.weight(x) - diag(x);
    col_res(x) = u - diag(x);
  }
  const double residual = row_res.sum();
  Coupling c;
  c.group = nu.group();
  c.joint = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) c.joint(x, x) = diag(x);
  if (residual > 0.0) c.joint += (row_res * col_res.transpose()) / residual;
  c.offdiag_mass = residual;
  return c;
}

CouplingSampler::CouplingSampler(const Coupling& c) : n_(static_cast<int>(c.joint.rows())) {
  flat_cum_.resize(static_cast<std::size_t>(n_) * n_);
  double acc = 0.0;
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y) {
      acc += c.joint(x, y);
      flat_cum_[static_cast<std::size_t>(x) * n_ + y] = acc;
    }
  if (!flat_cum_.empty()) flat_cum_.back() = std::max(flat_cum_.back(), 1.0);
}

std::pair<Element, Element> CouplingSampler::sample(RngStream& rng) const {
  const double u = rng.next_double();
  auto it = std::upper_bound(flat_cum_.begin(), flat_cum_.end(), u);
  std::size_t idx = std::min(static_cast<std::size_t>(it - flat_cum_.begin()), flat_cum_.size() - 1);
  return {static_cast<Element>(idx / n_), static_cast<Element>(idx % n_)};
}

}  // namespace haarwalk
