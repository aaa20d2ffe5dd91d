#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "haarwalk/rng.hpp"

namespace haarwalk {

/// Dense index into a finite group's Cayley table.
using Element = int;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group backed by a validated Cayley table. Elements are indices
/// 0..n-1; the identity is stored explicitly and need not be index 0, so raw
/// tables can be ingested without renumbering.
class FiniteGroup {
public:
  /// Validates and wraps a row-major Cayley table. Checks: Latin square,
  /// two-sided identity, inverses, associativity (exhaustive for n <= 256,
  /// 10^4 seeded random triples above). Throws std::invalid_argument.
  static GroupPtr from_table(std::string name, int order, std::vector<int> table_row_major,
                             std::vector<std::string> element_names = {});

  int order() const noexcept { return n_; }
  Element identity() const noexcept { return identity_; }

  Element compose(Element a, Element b) const {
    check_element(a);
    check_element(b);
    return table_[static_cast<std::size_t>(a) * n_ + b];
  }

  Element inverse(Element a) const {
    check_element(a);
    return inverses_[a];
  }

  /// g^{-1} x g
  Element conjugate(Element g, Element x) const {
    return compose(compose(inverse(g), x), g);
  }

  bool is_abelian() const;
  std::vector<std::vector<Element>> conjugacy_classes() const;
  std::vector<Element> center() const;

  const std::string& name() const noexcept { return name_; }
  const std::string& element_name(Element a) const {
    check_element(a);
    return names_[a];
  }

  /// Raw table for hot loops; entry a*n+b is a*b.
  std::span<const int> table() const noexcept { return table_; }

private:
  FiniteGroup() = default;
  void check_element(Element a) const;

  int n_ = 0;
  Element identity_ = 0;
  std::vector<int> table_;
  std::vector<int> inverses_;
  std::vector<std::string> names_;
  std::string name_;
};

struct Subgroup {
  GroupPtr parent;
  std::vector<Element> members;  // sorted
  bool is_normal = false;

  int order() const noexcept { return static_cast<int>(members.size()); }
  bool contains(Element x) const;
  bool is_whole_group() const { return order() == parent->order(); }
};

/// Smallest subgroup containing the seeds (breadth-first product closure;
/// inverses come for free in a finite group). Throws on an empty seed set.
Subgroup generated_subgroup(const GroupPtr& g, std::span<const Element> seeds);

/// Smallest normal subgroup containing the seeds (closure under product and
/// conjugation by every group element). Throws on an empty seed set.
Subgroup normal_closure(const GroupPtr& g, std::span<const Element> seeds);

/// All normal subgroups, as sorted member lists ordered by size. Brute force
/// over unions of conjugacy classes; fine for the shipped group sizes.
std::vector<std::vector<Element>> normal_subgroups(const FiniteGroup& g);

/// Uniform element index.
Element haar_sample(const FiniteGroup& g, RngStream& rng);

// ---------------------------------------------------------------------------
// The circle R/Z. Elements are doubles in [0,1); every composition reduces
// mod 1 so drift cannot accumulate.

inline double circle_reduce(double x) {
  double y = x - std::floor(x);
  return y < 1.0 ? y : 0.0;
}

inline double circle_compose(double x, double y) { return circle_reduce(x + y); }

inline double circle_inverse(double x) { return x == 0.0 ? 0.0 : 1.0 - x; }

inline double haar_sample_circle(RngStream& rng) { return rng.next_double(); }

// ---------------------------------------------------------------------------
// Built-in groups.

GroupPtr cyclic_group(int n);
GroupPtr dihedral_group(int n);  // order 2n, n >= 2
GroupPtr symmetric_group(int n); // n <= 5
GroupPtr quaternion_group();     // Q_8

}  // namespace haarwalk
