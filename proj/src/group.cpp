#include "haarwalk/group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace haarwalk {

namespace {

std::string default_name(int i) { return std::to_string(i); }

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

void FiniteGroup::check_element(Element a) const {
  if (a < 0 || a >= n_) throw std::out_of_range("element index " + std::to_string(a) + " out of range for group of order " + std::to_string(n_));
}

GroupPtr FiniteGroup::from_table(std::string name, int order, std::vector<int> table,
                                 std::vector<std::string> element_names) {
  require(order > 0, "group order must be positive");
  const std::size_t n = static_cast<std::size_t>(order);
  require(table.size() == n * n, "Cayley table must have order^2 entries");
  for (int v : table) require(v >= 0 && v < order, "Cayley table entry out of range");

  // Latin square: every row and column is a permutation.
  std::vector<char> seen(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) seen[table[a * n + b]] = 1;
    require(std::find(seen.begin(), seen.end(), 0) == seen.end(), "Cayley table row " + std::to_string(a) + " is not a permutation");
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) seen[table[b * n + a]] = 1;
    require(std::find(seen.begin(), seen.end(), 0) == seen.end(), "Cayley table column " + std::to_string(a) + " is not a permutation");
  }

  // Two-sided identity.
  int identity = -1;
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      ok = table[e * n + x] == static_cast<int>(x) && table[x * n + e] == static_cast<int>(x);
    if (ok) {
      identity = static_cast<int>(e);
      break;
    }
  }
  require(identity >= 0, "Cayley table has no two-sided identity");

  std::vector<int> inverses(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a * n + b] == identity) {
        require(table[b * n + a] == identity, "one-sided inverse in Cayley table");
        inverses[a] = static_cast<int>(b);
        break;
      }
    }
    require(inverses[a] >= 0, "missing inverse in Cayley table");
  }

  auto prod = [&](int a, int b) { return table[static_cast<std::size_t>(a) * n + b]; };
  if (order <= 256) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          require(prod(prod(a, b), c) == prod(a, prod(b, c)), "Cayley table is not associative");
  } else {
    RngStream rng(0x8A55C1A7ULL, 0);
    for (int t = 0; t < 10000; ++t) {
      int a = static_cast<int>(rng.next_below(order));
      int b = static_cast<int>(rng.next_below(order));
      int c = static_cast<int>(rng.next_below(order));
      require(prod(prod(a, b), c) == prod(a, prod(b, c)), "Cayley table failed random associativity check");
    }
  }

  if (element_names.empty()) {
    element_names.reserve(n);
    for (int i = 0; i < order; ++i) element_names.push_back(default_name(i));
  }
  require(element_names.size() == n, "element name list has wrong length");

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = order;
  g->identity_ = identity;
  g->table_ = std::move(table);
  g->inverses_ = std::move(inverses);
  g->names_ = std::move(element_names);
  g->name_ = std::move(name);
  return g;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (compose(a, b) != compose(b, a)) return false;
  return true;
}

std::vector<std::vector<Element>> FiniteGroup::conjugacy_classes() const {
  std::vector<char> done(n_, 0);
  std::vector<std::vector<Element>> classes;
  for (int x = 0; x < n_; ++x) {
    if (done[x]) continue;
    std::set<Element> orbit;
    for (int g = 0; g < n_; ++g) orbit.insert(conjugate(g, x));
    std::vector<Element> cls(orbit.begin(), orbit.end());
    for (Element y : cls) done[y] = 1;
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<Element> FiniteGroup::center() const {
  std::vector<Element> z;
  for (int x = 0; x < n_; ++x) {
    bool central = true;
    for (int g = 0; g < n_ && central; ++g) central = compose(x, g) == compose(g, x);
    if (central) z.push_back(x);
  }
  return z;
}

bool Subgroup::contains(Element x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

namespace {

// Product closure of a seed set that already contains the identity. In a
// finite group this is automatically closed under inverses.
std::vector<Element> product_closure(const FiniteGroup& g, std::vector<Element> work) {
  std::vector<char> in(g.order(), 0);
  for (Element x : work) in[x] = 1;
  std::vector<Element> members = work;
  while (!work.empty()) {
    Element x = work.back();
    work.pop_back();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (Element p : {g.compose(x, members[i]), g.compose(members[i], x)}) {
        if (!in[p]) {
          in[p] = 1;
          members.push_back(p);
          work.push_back(p);
        }
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

bool conjugation_closed(const FiniteGroup& g, const std::vector<Element>& members) {
  std::vector<char> in(g.order(), 0);
  for (Element x : members) in[x] = 1;
  for (Element x : members)
    for (int c = 0; c < g.order(); ++c)
      if (!in[g.conjugate(c, x)]) return false;
  return true;
}

}  // namespace

Subgroup generated_subgroup(const GroupPtr& g, std::span<const Element> seeds) {
  if (seeds.empty()) throw std::invalid_argument("generated_subgroup: empty seed set");
  std::vector<Element> start{g->identity()};
  for (Element s : seeds) {
    g->inverse(s);  // range check
    start.push_back(s);
  }
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  Subgroup h;
  h.parent = g;
  h.members = product_closure(*g, std::move(start));
  h.is_normal = conjugation_closed(*g, h.members);
  return h;
}

Subgroup normal_closure(const GroupPtr& g, std::span<const Element> seeds) {
  if (seeds.empty()) throw std::invalid_argument("normal_closure: empty seed set");
  std::vector<Element> cur{g->identity()};
  for (Element s : seeds) cur.push_back(s);
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  for (;;) {
    std::set<Element> withConj(cur.begin(), cur.end());
    for (Element x : cur)
      for (int c = 0; c < g->order(); ++c) withConj.insert(g->conjugate(c, x));
    std::vector<Element> next = product_closure(*g, std::vector<Element>(withConj.begin(), withConj.end()));
    if (next == cur) break;
    cur = std::move(next);
  }
  Subgroup h;
  h.parent = g;
  h.members = std::move(cur);
  h.is_normal = true;
  return h;
}

std::vector<std::vector<Element>> normal_subgroups(const FiniteGroup& g) {
  auto classes = g.conjugacy_classes();
  // Move the identity's class up front; it must be in every candidate.
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (std::binary_search(classes[i].begin(), classes[i].end(), g.identity())) {
      std::swap(classes[0], classes[i]);
      break;
    }
  }
  const std::size_t m = classes.size() - 1;
  std::vector<std::vector<Element>> result;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<Element> members = classes[0];
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i))
        members.insert(members.end(), classes[i + 1].begin(), classes[i + 1].end());
    std::sort(members.begin(), members.end());
    std::vector<char> in(g.order(), 0);
    for (Element x : members) in[x] = 1;
    bool closed = true;
    for (std::size_t a = 0; a < members.size() && closed; ++a)
      for (std::size_t b = 0; b < members.size() && closed; ++b)
        closed = in[g.compose(members[a], members[b])];
    if (closed) result.push_back(std::move(members));
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return result;
}

Element haar_sample(const FiniteGroup& g, RngStream& rng) {
  return static_cast<Element>(rng.next_below(static_cast<std::uint32_t>(g.order())));
}

// ---------------------------------------------------------------------------
// Built-ins.

GroupPtr cyclic_group(int n) {
  require(n >= 1, "cyclic(n) needs n >= 1");
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  return FiniteGroup::from_table("cyclic(" + std::to_string(n) + ")", n, std::move(table));
}

GroupPtr dihedral_group(int n) {
  require(n >= 2, "dihedral(n) needs n >= 2");
  const int N = 2 * n;
  // Indices: j < n is the rotation r^j, n+j is the reflection s r^j.
  auto idx = [&](bool refl, int j) { return (refl ? n : 0) + ((j % n) + n) % n; };
  std::vector<int> table(static_cast<std::size_t>(N) * N);
  std::vector<std::string> names;
  for (int a = 0; a < N; ++a) {
    bool ra = a >= n;
    int ja = ra ? a - n : a;
    for (int b = 0; b < N; ++b) {
      bool rb = b >= n;
      int jb = rb ? b - n : b;
      int v;
      if (!ra && !rb) v = idx(false, ja + jb);          // r^a r^b
      else if (!ra && rb) v = idx(true, jb - ja);       // r^a (s r^b) = s r^{b-a}
      else if (ra && !rb) v = idx(true, ja + jb);       // (s r^a) r^b
      else v = idx(false, jb - ja);                     // (s r^a)(s r^b) = r^{b-a}
      table[static_cast<std::size_t>(a) * N + b] = v;
    }
  }
  for (int j = 0; j < n; ++j) names.push_back("r" + std::to_string(j));
  for (int j = 0; j < n; ++j) names.push_back("sr" + std::to_string(j));
  return FiniteGroup::from_table("dihedral(" + std::to_string(n) + ")", N, std::move(table), std::move(names));
}

namespace {

std::vector<std::vector<int>> permutations_lex(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

std::string cycle_name(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<char> seen(n, 0);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || p[i] == i) continue;
    out += '(';
    int j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = 1;
      if (!first) out += ' ';
      out += std::to_string(j + 1);  // 1-based letters
      first = false;
      j = p[j];
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

}  // namespace

GroupPtr symmetric_group(int n) {
  require(n >= 1 && n <= 5, "symmetric(n) supports 1 <= n <= 5");
  auto perms = permutations_lex(n);
  const int N = static_cast<int>(perms.size());
  std::vector<std::vector<int>> rank_of;  // lookup by flattened one-line form
  auto key = [&](const std::vector<int>& p) {
    int k = 0;
    for (int v : p) k = k * n + v;
    return k;
  };
  std::vector<int> lookup(static_cast<std::size_t>(key(perms.back())) + 1, -1);
  for (int i = 0; i < N; ++i) lookup[key(perms[i])] = i;
  std::vector<int> table(static_cast<std::size_t>(N) * N);
  std::vector<int> comp(n);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      for (int x = 0; x < n; ++x) comp[x] = perms[a][perms[b][x]];  // a after b
      table[static_cast<std::size_t>(a) * N + b] = lookup[key(comp)];
    }
  }
  std::vector<std::string> names;
  names.reserve(N);
  for (const auto& p : perms) names.push_back(cycle_name(p));
  return FiniteGroup::from_table("symmetric(" + std::to_string(n) + ")", N, std::move(table), std::move(names));
}

GroupPtr quaternion_group() {
  // Order: 1, -1, i, -i, j, -j, k, -k. Products in the (sign, axis) encoding
  // of the usual quaternion identities.
  const char* names_raw[] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  auto axis = [](int e) { return e / 2; };  // 0:unit 1:i 2:j 3:k
  auto sign = [](int e) { return e % 2 == 0 ? 1 : -1; };
  auto enc = [](int ax, int sg) { return 2 * ax + (sg > 0 ? 0 : 1); };
  // mul_axis[a][b] -> (axis, sign) for the product of unit axes.
  static const int ax_tab[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sg_tab[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<int> table(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ax = ax_tab[axis(a)][axis(b)];
      int sg = sg_tab[axis(a)][axis(b)] * sign(a) * sign(b);
      table[static_cast<std::size_t>(a) * 8 + b] = enc(ax, sg);
    }
  std::vector<std::string> names(names_raw, names_raw + 8);
  return FiniteGroup::from_table("quaternion8", 8, std::move(table), std::move(names));
}

}  // namespace haarwalk
