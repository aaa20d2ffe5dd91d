#pragma once

#include <Eigen/Dense>

#include "haarwalk/dual.hpp"
#include "haarwalk/function.hpp"
#include "haarwalk/measure.hpp"

namespace haarwalk {

/// f-hat(pi) = (1/n) sum_x f(x) pi(x)*  — integration against the uniform
/// measure, entrywise.
Eigen::MatrixXcd fourier_coefficient(const FiniteFunction& f, const Irrep& pi);

/// nu-hat(pi) = sum_x nu(x) pi(x)*.
Eigen::MatrixXcd fourier_coefficient(const FiniteMeasure& nu, const Irrep& pi);

struct ParsevalResult {
  double dual_side;    // sum over pi of d_pi tr(f-hat g-hat*)
  double direct_side;  // integral of f g
  double gap() const { return std::abs(dual_side - direct_side); }
};

/// Evaluates both sides of the Parseval identity; exact on finite groups.
ParsevalResult parseval(const FiniteFunction& f, const FiniteFunction& g, const DualSet& dual);

}  // namespace haarwalk
