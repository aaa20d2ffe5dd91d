#include "haarwalk/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace haarwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMergeEps = 1e-14;

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

std::vector<CircleAtom> normalize_atoms(std::vector<CircleAtom> atoms) {
  for (auto& a : atoms) {
    a.location = circle_reduce(a.location);
    require(a.mass >= 0.0, "atom mass must be nonnegative");
  }
  std::erase_if(atoms, [](const CircleAtom& a) { return a.mass == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const CircleAtom& a, const CircleAtom& b) { return a.location < b.location; });
  std::vector<CircleAtom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.location - merged.back().location <= kMergeEps)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  return merged;
}

// Canonical grid: sorted breakpoints starting at 0, strictly increasing, < 1.
void canonicalize_grid(std::vector<double>& breaks, std::vector<double>& values) {
  require(breaks.size() == values.size(), "breakpoints and values must have equal length");
  if (breaks.empty()) return;
  for (double b : breaks) require(b >= 0.0 && b < 1.0, "breakpoints must lie in [0,1)");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    require(breaks[i] > breaks[i - 1], "breakpoints must be strictly increasing");
  if (breaks.front() != 0.0) {
    // The wrap piece [last, first+1) carries the last value; split it at 0.
    breaks.insert(breaks.begin(), 0.0);
    values.insert(values.begin(), values.back());
  }
  // Drop zero-width slivers created by merges upstream; the merged cell takes
  // the later piece's value, which covers all but an O(eps) strip of it.
  std::vector<double> b2;
  std::vector<double> v2;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!b2.empty() && breaks[i] - b2.back() <= kMergeEps) {
      v2.back() = values[i];
      continue;
    }
    b2.push_back(breaks[i]);
    v2.push_back(values[i]);
  }
  breaks = std::move(b2);
  values = std::move(v2);
}

double piece_end(const std::vector<double>& breaks, std::size_t i) {
  return i + 1 < breaks.size() ? breaks[i + 1] : 1.0;
}

// Length of the intersection of [lo1,hi1) with the circular interval
// [lo2,hi2) (hi2 may exceed 1); both within one period.
double interval_overlap(double lo1, double hi1, double lo2, double hi2) {
  double total = 0.0;
  for (int shift = -1; shift <= 1; ++shift) {
    const double lo = std::max(lo1, lo2 + shift);
    const double hi = std::min(hi1, hi2 + shift);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

}  // namespace

CircleMeasure CircleMeasure::from_parts(std::vector<CircleAtom> atoms, std::vector<double> breaks,
                                        std::vector<double> values, double l1_error) {
  CircleMeasure m;
  m.atoms_ = normalize_atoms(std::move(atoms));
  canonicalize_grid(breaks, values);
  for (double v : values) require(v >= -1e-12, "density values must be nonnegative");
  m.breaks_ = std::move(breaks);
  m.values_ = std::move(values);
  if (m.density_mass() <= 0.0) {
    m.breaks_.clear();
    m.values_.clear();
  }
  m.l1_error_ = l1_error;
  return m;
}

CircleMeasure CircleMeasure::probability(std::vector<CircleAtom> atoms, std::vector<double> breaks,
                                         std::vector<double> values) {
  CircleMeasure m = from_parts(std::move(atoms), std::move(breaks), std::move(values), 0.0);
  require(std::abs(m.total_mass() - 1.0) <= 1e-12, "circle measure must have total mass 1");
  return m;
}

CircleMeasure CircleMeasure::dirac(double location) {
  return probability({{circle_reduce(location), 1.0}}, {}, {});
}

CircleMeasure CircleMeasure::uniform() { return probability({}, {0.0}, {1.0}); }

double CircleMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

double CircleMeasure::density_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    s += values_[i] * (piece_end(breaks_, i) - breaks_[i]);
  return s;
}

double CircleMeasure::density_at(double x) const {
  if (breaks_.empty()) return 0.0;
  x = circle_reduce(x);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
  return values_[idx == 0 ? values_.size() - 1 : idx - 1];
}

namespace {

// Exact density of (dens_a * dens_b)(z), a piecewise-linear function.
double linear_part_at(const CircleMeasure& a, const CircleMeasure& b, double z) {
  double acc = 0.0;
  const auto& ab = a.breaks();
  const auto& bb = b.breaks();
  for (std::size_t p = 0; p < ab.size(); ++p) {
    const double va = a.values()[p];
    if (va == 0.0) continue;
    const double plo = ab[p], phi = piece_end(ab, p);
    for (std::size_t q = 0; q < bb.size(); ++q) {
      const double vb = b.values()[q];
      if (vb == 0.0) continue;
      // t in [plo,phi) and z - t in piece q  <=>  t in [z - qhi, z - qlo).
      const double qlo = bb[q], qhi = piece_end(bb, q);
      double lo2 = z - qhi, hi2 = z - qlo;
      lo2 -= std::floor(lo2);
      hi2 = lo2 + (qhi - qlo);
      acc += va * vb * interval_overlap(plo, phi, lo2, hi2);
    }
  }
  return acc;
}

}  // namespace

CircleMeasure convolve(const CircleMeasure& a, const CircleMeasure& b) {
  // Atoms.
  std::vector<CircleAtom> atoms;
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) atoms.push_back({circle_compose(x.location, y.location), x.mass * y.mass});

  // Breakpoint grid of the density part.
  std::vector<double> grid;
  const bool lin = a.has_density() && b.has_density();
  for (const auto& x : a.atoms())
    for (double bb : b.breaks()) grid.push_back(circle_compose(x.location, bb));
  for (const auto& y : b.atoms())
    for (double ab : a.breaks()) grid.push_back(circle_compose(y.location, ab));
  if (lin) {
    for (double ab : a.breaks())
      for (double bb : b.breaks()) grid.push_back(circle_compose(ab, bb));
  }

  const double carried =
      a.l1_error() * tv_norm(b) + b.l1_error() * tv_norm(a) + a.l1_error() * b.l1_error();
  if (grid.empty()) return CircleMeasure::from_parts(std::move(atoms), {}, {}, carried);

  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return y - x <= kMergeEps; }),
             grid.end());
  if (grid.size() > kMaxCircleBreaks)
    throw std::runtime_error("circle convolution would exceed the breakpoint cap");

  auto full_at = [&](double z) {
    double acc = lin ? linear_part_at(a, b, z) : 0.0;
    for (const auto& x : a.atoms()) acc += x.mass * b.density_at(z - x.location + 1.0);
    for (const auto& y : b.atoms()) acc += y.mass * a.density_at(z - y.location + 1.0);
    return acc;
  };

  std::vector<double> values(grid.size());
  double proj_err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lo = grid[i];
    const double hi = i + 1 < grid.size() ? grid[i + 1] : 1.0;
    const double w = hi - lo;
    const double ha = full_at(lo + 0.25 * w);
    const double hb = full_at(lo + 0.75 * w);
    values[i] = 0.5 * (ha + hb);                      // cell mean: the exact result is linear here
    if (lin) proj_err += std::abs(hb - ha) * w * 0.5;  // |slope| w^2 / 4
  }

  return CircleMeasure::from_parts(std::move(atoms), std::move(grid), std::move(values),
                                   carried + proj_err);
}

CircleMeasure convolution_power(const CircleMeasure& nu, long long k) {
  require(k >= 1, "convolution power needs k >= 1");
  CircleMeasure acc = nu;
  CircleMeasure result = nu;
  bool have = false;
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

double tv_norm(const CircleMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s += std::abs(a.mass);
  for (std::size_t i = 0; i < m.breaks().size(); ++i)
    s += std::abs(m.values()[i]) * (piece_end(m.breaks(), i) - m.breaks()[i]);
  return s;
}

double tv_to_uniform(const CircleMeasure& m) {
  double s = m.atom_mass();
  if (!m.has_density()) return s + 1.0;  // integral of |0 - 1|
  for (std::size_t i = 0; i < m.breaks().size(); ++i)
    s += std::abs(m.values()[i] - 1.0) * (piece_end(m.breaks(), i) - m.breaks()[i]);
  return s;
}

std::pair<CircleMeasure, CircleMeasure> lebesgue_decompose(const CircleMeasure& m) {
  CircleMeasure sing = CircleMeasure::from_parts(m.atoms(), {}, {}, 0.0);
  CircleMeasure abs = CircleMeasure::from_parts({}, m.breaks(), m.values(), m.l1_error());
  return {abs, sing};
}

std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den) {
  x = circle_reduce(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(v);
    if (fl > 2e18) break;
    const long long a = static_cast<long long>(fl);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (q1 > 0 && std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <=
                      1e-9 / (static_cast<double>(q1) * static_cast<double>(q1)))
      return std::make_pair(p1, q1);
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

bool is_adapted(const CircleMeasure& m) {
  if (m.density_mass() > 0.0) return true;
  for (const auto& a : m.atoms())
    if (!rationalize(a.location)) return true;  // irrational atom generates a dense subgroup
  return false;  // all-rational atoms generate a finite cyclic subgroup
}

bool has_abs_component(const CircleMeasure& m) { return m.density_mass() > 0.0; }

std::complex<double> fourier_coefficient(const CircleMeasure& m, long long freq) {
  std::complex<double> acc{};
  for (const auto& a : m.atoms()) acc += a.mass * std::polar(1.0, -kTwoPi * freq * a.location);
  if (freq == 0) {
    acc += m.density_mass();
    return acc;
  }
  const std::complex<double> denom(0.0, kTwoPi * static_cast<double>(freq));
  for (std::size_t i = 0; i < m.breaks().size(); ++i) {
    const double lo = m.breaks()[i], hi = piece_end(m.breaks(), i);
    acc += m.values()[i] *
           (std::polar(1.0, -kTwoPi * freq * lo) - std::polar(1.0, -kTwoPi * freq * hi)) / denom;
  }
  return acc;
}

// ---------------------------------------------------------------------------

CircleFunction CircleFunction::piecewise(std::vector<double> breaks, std::vector<double> values,
                                         bool demean) {
  canonicalize_grid(breaks, values);
  require(!breaks.empty(), "piecewise function needs at least one piece");
  CircleFunction f;
  f.kind_ = Kind::piecewise;
  f.breaks_ = std::move(breaks);
  f.values_ = std::move(values);
  double mean = 0.0;
  for (std::size_t i = 0; i < f.breaks_.size(); ++i)
    mean += f.values_[i] * (piece_end(f.breaks_, i) - f.breaks_[i]);
  if (demean) {
    for (auto& v : f.values_) v -= mean;
    mean = 0.0;
  }
  f.mean_ = mean;
  return f;
}

CircleFunction CircleFunction::fourier_series(std::vector<std::complex<double>> coeffs,
                                              bool demean) {
  require(!coeffs.empty(), "fourier series needs at least the constant term");
  require(std::abs(coeffs[0].imag()) <= 1e-12, "constant term of a real series must be real");
  CircleFunction f;
  f.kind_ = Kind::series;
  f.coeffs_ = std::move(coeffs);
  if (demean) f.coeffs_[0] = 0.0;
  f.mean_ = f.coeffs_[0].real();
  return f;
}

double CircleFunction::value(double x) const {
  x = circle_reduce(x);
  if (kind_ == Kind::piecewise) {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
    return values_[idx == 0 ? values_.size() - 1 : idx - 1];
  }
  double acc = coeffs_[0].real();
  for (std::size_t n = 1; n < coeffs_.size(); ++n)
    acc += 2.0 * (coeffs_[n] * std::polar(1.0, kTwoPi * static_cast<double>(n) * x)).real();
  return acc;
}

double CircleFunction::lp_norm(double p) const {
  if (kind_ == Kind::piecewise) {
    double s = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i)
      s += std::pow(std::abs(values_[i]), p) * (piece_end(breaks_, i) - breaks_[i]);
    return std::pow(s, 1.0 / p);
  }
  if (p == 2.0) {
    double s = coeffs_[0].real() * coeffs_[0].real();
    for (std::size_t n = 1; n < coeffs_.size(); ++n) s += 2.0 * std::norm(coeffs_[n]);
    return std::sqrt(s);
  }
  // Trig polynomials: composite midpoint quadrature on a fine grid.
  const int grid = 1 << 14;
  double s = 0.0;
  for (int i = 0; i < grid; ++i) s += std::pow(std::abs(value((i + 0.5) / grid)), p);
  return std::pow(s / grid, 1.0 / p);
}

std::complex<double> CircleFunction::fourier(long long freq) const {
  if (kind_ == Kind::series) {
    const long long w = series_window();
    if (freq >= 0) return freq <= w ? coeffs_[static_cast<std::size_t>(freq)] : 0.0;
    return -freq <= w ? std::conj(coeffs_[static_cast<std::size_t>(-freq)]) : 0.0;
  }
  if (freq == 0) return mean_;
  std::complex<double> acc{};
  const std::complex<double> denom(0.0, kTwoPi * static_cast<double>(freq));
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const double lo = breaks_[i], hi = piece_end(breaks_, i);
    acc += values_[i] *
           (std::polar(1.0, -kTwoPi * freq * lo) - std::polar(1.0, -kTwoPi * freq * hi)) / denom;
  }
  return acc;
}

double shifted_pth_moment_sup(const CircleFunction& f, const CircleMeasure& nu, double p) {
  constexpr int kShifts = 1 << 14;
  constexpr int kQuad = 1 << 10;
  // Quadrature nodes and weights over the density part, shift-independent.
  std::vector<std::pair<double, double>> nodes;
  for (const auto& a : nu.atoms()) nodes.emplace_back(a.location, a.mass);
  if (nu.has_density()) {
    for (std::size_t i = 0; i < nu.breaks().size(); ++i) {
      const double lo = nu.breaks()[i], hi = piece_end(nu.breaks(), i);
      const double v = nu.values()[i];
      if (v <= 0.0) continue;
      const int cells = std::max(1, static_cast<int>((hi - lo) * kQuad));
      const double w = v * (hi - lo) / cells;
      for (int j = 0; j < cells; ++j)
        nodes.emplace_back(lo + (j + 0.5) * (hi - lo) / cells, w);
    }
  }
  double best = 0.0;
  for (int s = 0; s < kShifts; ++s) {
    const double c = static_cast<double>(s) / kShifts;
    double m = 0.0;
    for (const auto& [x, w] : nodes) m += w * std::pow(std::abs(f.value(circle_compose(c, x))), p);
    best = std::max(best, m);
  }
  return best;
}

// ---------------------------------------------------------------------------

CircleSampler::CircleSampler(const CircleMeasure& m) {
  double acc = 0.0;
  for (const auto& a : m.atoms()) {
    acc += a.mass;
    atom_cum_.push_back(acc);
    atom_loc_.push_back(a.location);
  }
  atom_mass_ = acc;
  breaks_ = m.breaks();
  values_ = m.values();
  double dacc = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    dens_cum_.push_back(dacc);
    dacc += values_[i] * (piece_end(breaks_, i) - breaks_[i]);
  }
  dens_cum_.push_back(dacc);
}

double CircleSampler::sample(RngStream& rng) const {
  const double u = rng.next_double();
  if (u < atom_mass_) {
    auto it = std::upper_bound(atom_cum_.begin(), atom_cum_.end(), u);
    std::size_t idx = std::min(static_cast<std::size_t>(it - atom_cum_.begin()), atom_loc_.size() - 1);
    return atom_loc_[idx];
  }
  if (breaks_.empty()) return atom_loc_.back();  // rounding pushed u past the atom mass
  const double target = u - atom_mass_;
  auto it = std::upper_bound(dens_cum_.begin(), dens_cum_.end(), target);
  std::size_t idx = std::min(static_cast<std::size_t>(it - dens_cum_.begin()),
                             dens_cum_.size() - 1);
  idx = idx == 0 ? 0 : idx - 1;
  const double lo = breaks_[idx];
  const double hi = piece_end(breaks_, idx);
  const double v = values_[idx];
  if (v <= 0.0) return lo;
  return circle_reduce(lo + (target - dens_cum_[idx]) / v);
}

}  // namespace haarwalk
