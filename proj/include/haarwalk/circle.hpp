#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "haarwalk/group.hpp"

namespace haarwalk {

/// Breakpoint cap for circle densities; convolution refuses to refine past it.
inline constexpr std::size_t kMaxCircleBreaks = std::size_t{1} << 16;

struct CircleAtom {
  double location = 0.0;  // in [0,1)
  double mass = 0.0;      // > 0
};

/// Borel measure on R/Z in the closed class "finitely many atoms plus a
/// piecewise-constant density". The density grid is canonical: breakpoints
/// start at 0, value[i] holds on [breaks[i], breaks[i+1]) with an implicit
/// final breakpoint at 1. `l1_error` is an accumulated L1 bound for the
/// piecewise-constant projection applied by density*density convolutions.
class CircleMeasure {
public:
  static CircleMeasure probability(std::vector<CircleAtom> atoms,
                                   std::vector<double> breaks, std::vector<double> values);
  static CircleMeasure dirac(double location);
  static CircleMeasure uniform();
  static CircleMeasure from_parts(std::vector<CircleAtom> atoms, std::vector<double> breaks,
                                  std::vector<double> values, double l1_error);

  const std::vector<CircleAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double l1_error() const noexcept { return l1_error_; }

  double atom_mass() const;
  double density_mass() const;
  double total_mass() const { return atom_mass() + density_mass(); }
  bool has_density() const noexcept { return !breaks_.empty(); }

  /// Density value at a point (0 when there is no density part).
  double density_at(double x) const;

private:
  std::vector<CircleAtom> atoms_;
  std::vector<double> breaks_;
  std::vector<double> values_;
  double l1_error_ = 0.0;
};

/// Exact convolution within the class. atom x atom and atom x density terms
/// are exact; density x density is piecewise linear and gets projected back
/// to piecewise constant on the refined grid (cell-midpoint values), with the
/// exact L1 projection error added to the result's l1_error.
CircleMeasure convolve(const CircleMeasure& a, const CircleMeasure& b);

/// Binary powering, k >= 1; accumulates l1_error. Throws when the refined
/// grid would exceed kMaxCircleBreaks.
CircleMeasure convolution_power(const CircleMeasure& nu, long long k);

/// Sum of |atom masses| plus the integral of |density|.
double tv_norm(const CircleMeasure& m);

/// || m - uniform ||_TV: sum of atom masses plus integral of |density - 1|.
double tv_to_uniform(const CircleMeasure& m);

/// Lebesgue decomposition inside the class: first the absolutely continuous
/// part (density), then the singular part (atoms). The class has no
/// singular-continuous members.
std::pair<CircleMeasure, CircleMeasure> lebesgue_decompose(const CircleMeasure& m);

/// Rationalizes x as p/q with q <= max_den via continued fractions; nullopt
/// when no convergent of denominator <= max_den lands within 1e-9/q^2.
std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den = 1000000);

/// Adapted within the class: any density mass, or some atom location that is
/// irrational under the rationalize() convention (all-rational atoms generate
/// a finite cyclic subgroup, which is proper).
bool is_adapted(const CircleMeasure& m);

/// Atom-free part nonzero at some convolution power; within the class this
/// happens at k = 1 or never.
bool has_abs_component(const CircleMeasure& m);

/// nu-hat(k) = integral of e^{-2 pi i k x} d nu(x); exact per atom and piece.
std::complex<double> fourier_coefficient(const CircleMeasure& m, long long freq);

/// Real observable on the circle: either a piecewise-constant table on a
/// canonical grid or a finite Fourier series sum c_n e^{2 pi i n x} with
/// hermitian coefficients.
class CircleFunction {
public:
  static CircleFunction piecewise(std::vector<double> breaks, std::vector<double> values,
                                  bool demean = false);
  /// coefficients for n = 0..W; c_{-n} = conj(c_n) is implied.
  static CircleFunction fourier_series(std::vector<std::complex<double>> coeffs_nonneg_freq,
                                       bool demean = false);

  bool is_piecewise() const noexcept { return kind_ == Kind::piecewise; }
  double value(double x) const;
  double mean() const noexcept { return mean_; }
  bool mean_zero() const noexcept { return std::abs(mean_) <= 1e-12; }
  double lp_norm(double p) const;  // exact for piecewise and for p = 2; fine-grid quadrature otherwise
  std::complex<double> fourier(long long freq) const;  // exact

  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  int series_window() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

private:
  enum class Kind { piecewise, series };
  Kind kind_ = Kind::piecewise;
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<std::complex<double>> coeffs_;  // n = 0..W
  double mean_ = 0.0;
};

/// L_p = sup_c E |f(c + X)|^p for X with law nu. The sup is estimated on a
/// 2^14-point shift grid and the inner expectation by atom enumeration plus a
/// fixed quadrature grid over the density, so the value carries the usual
/// modulus-of-continuity caveat for rough f.
double shifted_pth_moment_sup(const CircleFunction& f, const CircleMeasure& nu, double p);

/// Inverse-CDF sampler: atom branch, then piecewise-linear CDF over density.
class CircleSampler {
public:
  explicit CircleSampler(const CircleMeasure& m);
  double sample(RngStream& rng) const;

private:
  std::vector<double> atom_cum_;
  std::vector<double> atom_loc_;
  double atom_mass_ = 0.0;
  std::vector<double> dens_cum_;  // cumulative mass at each breakpoint
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace haarwalk
