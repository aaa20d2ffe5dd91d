#include "haarwalk/fourier.hpp"

#include <stdexcept>

namespace haarwalk {

Eigen::MatrixXcd fourier_coefficient(const FiniteFunction& f, const Irrep& pi) {
  if (pi.matrices.size() != static_cast<std::size_t>(f.size()))
    throw std::invalid_argument("irrep and function live on different groups");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(pi.dim, pi.dim);
  for (int x = 0; x < f.size(); ++x)
    acc += f.value(x) * pi.matrices[static_cast<std::size_t>(x)].adjoint();
  return acc / static_cast<double>(f.size());
}

Eigen::MatrixXcd fourier_coefficient(const FiniteMeasure& nu, const Irrep& pi) {
  if (pi.matrices.size() != static_cast<std::size_t>(nu.size()))
    throw std::invalid_argument("irrep and measure live on different groups");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(pi.dim, pi.dim);
  for (int x = 0; x < nu.size(); ++x) {
    const double w = nu.weight(x);
    if (w != 0.0) acc += w * pi.matrices[static_cast<std::size_t>(x)].adjoint();
  }
  return acc;
}

ParsevalResult parseval(const FiniteFunction& f, const FiniteFunction& g, const DualSet& dual) {
  if (f.group().get() != g.group().get() || f.group().get() != dual.group.get())
    throw std::invalid_argument("Parseval operands live on different groups");
  std::complex<double> dual_side{};
  for (const auto& pi : dual.irreps) {
    const auto fh = fourier_coefficient(f, pi);
    const auto gh = fourier_coefficient(g, pi);
    dual_side += static_cast<double>(pi.dim) * (fh * gh.adjoint()).trace();
  }
  ParsevalResult r;
  r.dual_side = dual_side.real();
  r.direct_side = f.values().dot(g.values()) / static_cast<double>(f.size());
  return r;
}

}  // namespace haarwalk
