#include "haarwalk/dual.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace haarwalk {

namespace {

using Cplx = std::complex<double>;

Eigen::MatrixXcd unit_root_diag(double angle) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = std::polar(1.0, angle);
  return m;
}

Irrep trivial_irrep(int order) {
  Irrep r;
  r.dim = 1;
  r.trivial = true;
  r.label = "trivial";
  r.matrices.assign(static_cast<std::size_t>(order), Eigen::MatrixXcd::Ones(1, 1));
  return r;
}

DualSet cyclic_dual(const GroupPtr& g, int n) {
  DualSet d;
  d.group = g;
  d.irreps.push_back(trivial_irrep(n));
  for (int m = 1; m < n; ++m) {
    Irrep r;
    r.dim = 1;
    r.label = "chi" + std::to_string(m);
    for (int j = 0; j < n; ++j)
      r.matrices.push_back(unit_root_diag(2.0 * std::numbers::pi * m * j / n));
    d.irreps.push_back(std::move(r));
  }
  return d;
}

DualSet dihedral_dual(const GroupPtr& g, int n) {
  // Element indexing from dihedral_group: j < n is r^j, n+j is s r^j.
  const int N = 2 * n;
  DualSet d;
  d.group = g;
  d.irreps.push_back(trivial_irrep(N));

  auto one_dim = [&](int rot_sign, int refl_sign, const std::string& label) {
    Irrep r;
    r.dim = 1;
    r.label = label;
    r.matrices.reserve(N);
    for (int a = 0; a < N; ++a) {
      bool refl = a >= n;
      int j = refl ? a - n : a;
      double v = (rot_sign < 0 && (j % 2)) ? -1.0 : 1.0;
      if (refl && refl_sign < 0) v = -v;
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = v;
      r.matrices.push_back(m);
    }
    return r;
  };

  d.irreps.push_back(one_dim(+1, -1, "sign_s"));
  if (n % 2 == 0) {
    d.irreps.push_back(one_dim(-1, +1, "sign_r"));
    d.irreps.push_back(one_dim(-1, -1, "sign_rs"));
  }

  const int two_dim_count = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int h = 1; h <= two_dim_count; ++h) {
    Irrep r;
    r.dim = 2;
    r.label = "rho" + std::to_string(h);
    r.matrices.reserve(N);
    const double w = 2.0 * std::numbers::pi * h / n;
    for (int a = 0; a < N; ++a) {
      bool refl = a >= n;
      int j = refl ? a - n : a;
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
      if (!refl) {
        m(0, 0) = std::polar(1.0, w * j);
        m(1, 1) = std::polar(1.0, -w * j);
      } else {
        m(0, 1) = std::polar(1.0, -w * j);
        m(1, 0) = std::polar(1.0, w * j);
      }
      r.matrices.push_back(std::move(m));
    }
    d.irreps.push_back(std::move(r));
  }
  return d;
}

std::vector<std::vector<int>> lex_permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

int parity(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

Irrep sign_irrep(const std::vector<std::vector<int>>& perms) {
  Irrep r;
  r.dim = 1;
  r.label = "sign";
  for (const auto& p : perms) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = static_cast<double>(parity(p));
    r.matrices.push_back(m);
  }
  return r;
}

// Standard representation of S_n on the mean-zero subspace of R^n, expressed
// in a fixed orthonormal basis; real orthogonal matrices.
Irrep standard_irrep(const std::vector<std::vector<int>>& perms, int n, const std::string& label) {
  Eigen::MatrixXd basis(n, n - 1);
  for (int c = 0; c < n - 1; ++c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= c; ++i) v(i) = 1.0;
    v(c + 1) = -(c + 1);
    basis.col(c) = v / v.norm();
  }
  Irrep r;
  r.dim = n - 1;
  r.label = label;
  for (const auto& p : perms) {
    // rho(p) v has coordinates (v circ p^{-1}); permute rows accordingly.
    Eigen::MatrixXd permuted(n, n - 1);
    for (int i = 0; i < n; ++i) permuted.row(p[i]) = basis.row(i);
    Eigen::MatrixXd m = basis.transpose() * permuted;
    r.matrices.push_back(m.cast<Cplx>());
  }
  return r;
}

Irrep tensor_sign(const Irrep& r, const std::vector<std::vector<int>>& perms, const std::string& label) {
  Irrep out;
  out.dim = r.dim;
  out.label = label;
  for (std::size_t i = 0; i < perms.size(); ++i)
    out.matrices.push_back(static_cast<double>(parity(perms[i])) * r.matrices[i]);
  return out;
}

DualSet symmetric3_dual(const GroupPtr& g) {
  auto perms = lex_permutations(3);
  DualSet d;
  d.group = g;
  d.irreps.push_back(trivial_irrep(6));
  d.irreps.push_back(sign_irrep(perms));
  d.irreps.push_back(standard_irrep(perms, 3, "standard"));
  return d;
}

DualSet symmetric4_dual(const GroupPtr& g) {
  auto perms = lex_permutations(4);
  DualSet d;
  d.group = g;
  d.irreps.push_back(trivial_irrep(24));
  d.irreps.push_back(sign_irrep(perms));

  // 2-dim irrep through the quotient S_4 -> S_3 permuting the three
  // pair-partitions of {0,1,2,3}.
  auto s3 = lex_permutations(3);
  auto s3_standard = standard_irrep(s3, 3, "");
  // partitions: 0 <-> {01|23}, 1 <-> {02|13}, 2 <-> {03|12}; partner_of[q][x]
  // is the mate of x in partition q.
  static const int partner[3][4] = {{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  Irrep two;
  two.dim = 2;
  two.label = "partition2";
  for (const auto& p : perms) {
    std::vector<int> image(3);
    for (int q = 0; q < 3; ++q) {
      int a = p[0], b = p[partner[q][0]];  // image of the pair {0, partner}
      for (int t = 0; t < 3; ++t)
        if (partner[t][a] == b) image[q] = t;
    }
    int idx = -1;
    for (std::size_t i = 0; i < s3.size(); ++i)
      if (s3[i] == image) idx = static_cast<int>(i);
    two.matrices.push_back(s3_standard.matrices[static_cast<std::size_t>(idx)]);
  }
  d.irreps.push_back(std::move(two));

  Irrep std3 = standard_irrep(perms, 4, "standard");
  d.irreps.push_back(tensor_sign(std3, perms, "standard_sign"));
  d.irreps.push_back(std::move(std3));
  std::swap(d.irreps[3], d.irreps[4]);  // standard before standard_sign
  return d;
}

DualSet quaternion_dual(const GroupPtr& g) {
  // Element order: 1, -1, i, -i, j, -j, k, -k.
  DualSet d;
  d.group = g;
  d.irreps.push_back(trivial_irrep(8));

  auto one_dim = [&](int si, int sj, const std::string& label) {
    Irrep r;
    r.dim = 1;
    r.label = label;
    const double vals[8] = {1, 1, double(si), double(si), double(sj), double(sj),
                            double(si * sj), double(si * sj)};
    for (double v : vals) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = v;
      r.matrices.push_back(m);
    }
    return r;
  };
  d.irreps.push_back(one_dim(+1, -1, "chi_j"));
  d.irreps.push_back(one_dim(-1, +1, "chi_i"));
  d.irreps.push_back(one_dim(-1, -1, "chi_k"));

  Irrep two;
  two.dim = 2;
  two.label = "spin";
  const Cplx im(0, 1);
  Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd Ui(2, 2), Uj(2, 2), Uk(2, 2);
  Ui << im, 0, 0, -im;
  Uj << 0, 1, -1, 0;
  Uk << 0, im, im, 0;
  two.matrices = {I2, -I2, Ui, -Ui, Uj, -Uj, Uk, -Uk};
  d.irreps.push_back(std::move(two));
  return d;
}

}  // namespace

DualReport validate_dual(const DualSet& dual) {
  DualReport rep;
  const auto& g = *dual.group;
  const int n = g.order();
  rep.sum_dim_sq = 0;

  for (const auto& irr : dual.irreps) {
    IrrepCheck c;
    c.label = irr.label;
    bool shape_ok = irr.dim >= 1 && irr.dim <= kMaxIrrepDim &&
                    irr.matrices.size() == static_cast<std::size_t>(n);
    if (shape_ok)
      for (const auto& m : irr.matrices)
        shape_ok = shape_ok && m.rows() == irr.dim && m.cols() == irr.dim;
    if (!shape_ok) {
      rep.failures.push_back("irrep " + irr.label + ": bad shape");
      rep.per_irrep.push_back(c);
      continue;
    }

    c.unitary = true;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(irr.dim, irr.dim);
    for (const auto& m : irr.matrices)
      c.unitary = c.unitary && ((m.adjoint() * m - id).cwiseAbs().maxCoeff() <= 1e-12);

    c.homomorphism = true;
    auto check_pair = [&](Element a, Element b) {
      const auto diff = irr.matrices[static_cast<std::size_t>(g.compose(a, b))] -
                        irr.matrices[static_cast<std::size_t>(a)] * irr.matrices[static_cast<std::size_t>(b)];
      return diff.cwiseAbs().maxCoeff() <= 1e-10;
    };
    if (n <= 64) {
      for (Element a = 0; a < n && c.homomorphism; ++a)
        for (Element b = 0; b < n && c.homomorphism; ++b) c.homomorphism = check_pair(a, b);
    } else {
      RngStream rng(0xD0A1ULL, 7);
      for (int t = 0; t < 10000 && c.homomorphism; ++t)
        c.homomorphism = check_pair(static_cast<Element>(rng.next_below(n)),
                                    static_cast<Element>(rng.next_below(n)));
    }

    Cplx self{};
    for (Element x = 0; x < n; ++x) self += irr.character(x) * std::conj(irr.character(x));
    self /= static_cast<double>(n);
    c.irreducible = std::abs(self - Cplx(1.0, 0.0)) <= 1e-10;

    if (!c.unitary) rep.failures.push_back("irrep " + irr.label + ": not unitary");
    if (!c.homomorphism) rep.failures.push_back("irrep " + irr.label + ": not a homomorphism");
    if (!c.irreducible) rep.failures.push_back("irrep " + irr.label + ": reducible character");
    rep.sum_dim_sq += irr.dim * irr.dim;
    rep.per_irrep.push_back(c);
  }

  rep.trivial_first = !dual.irreps.empty() && dual.irreps[0].dim == 1;
  if (rep.trivial_first)
    for (Element x = 0; x < n; ++x)
      rep.trivial_first = rep.trivial_first &&
                          std::abs(dual.irreps[0].matrices[static_cast<std::size_t>(x)](0, 0) - Cplx(1, 0)) <= 1e-12;
  if (!rep.trivial_first) rep.failures.push_back("trivial representation missing or not first");

  rep.pairwise_inequivalent = true;
  for (std::size_t i = 0; i < dual.irreps.size(); ++i)
    for (std::size_t j = i + 1; j < dual.irreps.size(); ++j) {
      Cplx ip{};
      for (Element x = 0; x < n; ++x)
        ip += dual.irreps[i].character(x) * std::conj(dual.irreps[j].character(x));
      if (std::abs(ip) / static_cast<double>(n) > 1e-10) {
        rep.pairwise_inequivalent = false;
        rep.failures.push_back("irreps " + dual.irreps[i].label + " and " + dual.irreps[j].label +
                               " have non-orthogonal characters");
      }
    }

  rep.complete = rep.sum_dim_sq == n;
  if (!rep.complete)
    rep.failures.push_back("sum of squared dimensions is " + std::to_string(rep.sum_dim_sq) +
                           ", group order is " + std::to_string(n));

  rep.pass = rep.trivial_first && rep.pairwise_inequivalent && rep.complete;
  for (const auto& c : rep.per_irrep) rep.pass = rep.pass && c.ok();
  return rep;
}

std::optional<DualSet> builtin_dual(const GroupPtr& group, const std::string& kind, int param) {
  if (kind == "cyclic") return cyclic_dual(group, param);
  if (kind == "dihedral") return dihedral_dual(group, param);
  if (kind == "symmetric" && param == 3) return symmetric3_dual(group);
  if (kind == "symmetric" && param == 4) return symmetric4_dual(group);
  if (kind == "quaternion8") return quaternion_dual(group);
  return std::nullopt;
}

BuiltinGroup make_builtin(const std::string& spec) {
  auto open = spec.find('(');
  std::string kind = spec.substr(0, open);
  int param = 0;
  if (open != std::string::npos) {
    auto close = spec.find(')', open);
    if (close == std::string::npos) throw std::invalid_argument("malformed builtin spec: " + spec);
    param = std::stoi(spec.substr(open + 1, close - open - 1));
  }
  BuiltinGroup b;
  if (kind == "cyclic") b.group = cyclic_group(param);
  else if (kind == "dihedral") b.group = dihedral_group(param);
  else if (kind == "symmetric") b.group = symmetric_group(param);
  else if (kind == "quaternion8") b.group = quaternion_group();
  else throw std::invalid_argument("unknown builtin group: " + spec);
  b.dual = builtin_dual(b.group, kind, param);
  return b;
}

}  // namespace haarwalk
