#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "haarwalk/group.hpp"

namespace haarwalk {

/// Hard cap on irreducible-representation dimension; all shipped duals are
/// far below it and the spectral code assumes small dense matrices.
inline constexpr int kMaxIrrepDim = 16;

/// One irreducible unitary representation of a finite group, as an explicit
/// matrix per element index.
struct Irrep {
  int dim = 1;
  bool trivial = false;
  std::string label;
  std::vector<Eigen::MatrixXcd> matrices;

  std::complex<double> character(Element x) const { return matrices[static_cast<std::size_t>(x)].trace(); }
};

/// A complete list of pairwise inequivalent irreps, trivial one first.
struct DualSet {
  GroupPtr group;
  std::vector<Irrep> irreps;
};

struct IrrepCheck {
  std::string label;
  bool unitary = false;
  bool homomorphism = false;
  bool irreducible = false;
  bool ok() const { return unitary && homomorphism && irreducible; }
};

struct DualReport {
  std::vector<IrrepCheck> per_irrep;
  bool trivial_first = false;
  bool pairwise_inequivalent = false;
  bool complete = false;  // sum of squared dimensions equals the order
  int sum_dim_sq = 0;
  bool pass = false;
  std::vector<std::string> failures;
};

/// Checks unitarity (1e-12), the homomorphism property (exhaustive pairs for
/// |G| <= 64, seeded random pairs above), irreducibility and pairwise
/// inequivalence via character inner products (1e-10), and completeness.
DualReport validate_dual(const DualSet& dual);

/// Built-in duals for cyclic(n), dihedral(n), symmetric(3), symmetric(4) and
/// quaternion8. `kind` names the builtin family; returns nullopt for groups
/// without a shipped table (those need a user-supplied dual file).
std::optional<DualSet> builtin_dual(const GroupPtr& group, const std::string& kind, int param);

/// A builtin group bundled with its dual when one ships.
struct BuiltinGroup {
  GroupPtr group;
  std::optional<DualSet> dual;
};

/// Parses specs like "cyclic(12)", "dihedral(4)", "symmetric(3)",
/// "quaternion8". Throws std::invalid_argument on anything else.
BuiltinGroup make_builtin(const std::string& spec);

}  // namespace haarwalk
