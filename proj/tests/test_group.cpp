#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "haarwalk/group.hpp"
#include "haarwalk/stats.hpp"

using namespace haarwalk;

namespace {

// Brute-force closure oracle, independent of the library's worklist version:
// keep multiplying the full set by itself until nothing new appears.
std::set<Element> closure_oracle(const FiniteGroup& g, std::set<Element> s, bool conjugation) {
  s.insert(g.identity());
  for (;;) {
    std::set<Element> next = s;
    for (Element a : s)
      for (Element b : s) next.insert(g.compose(a, b));
    for (Element a : s) next.insert(g.inverse(a));
    if (conjugation)
      for (Element a : s)
        for (Element c = 0; c < g.order(); ++c) next.insert(g.conjugate(c, a));
    if (next == s) return s;
    s.swap(next);
  }
}

Element element_by_name(const FiniteGroup& g, const std::string& name) {
  for (Element x = 0; x < g.order(); ++x)
    if (g.element_name(x) == name) return x;
  FAIL("no element named ", name);
  return -1;
}

}  // namespace

TEST_CASE("cyclic group composition and inverses") {
  auto z4 = cyclic_group(4);
  CHECK(z4->order() == 4);
  CHECK(z4->identity() == 0);
  CHECK(z4->compose(1, 3) == 0);  // inverse pair
  CHECK(z4->compose(2, 3) == 1);
  CHECK(z4->inverse(1) == 3);
  CHECK(z4->is_abelian());
  CHECK_THROWS_AS(z4->compose(4, 0), std::out_of_range);
}

TEST_CASE("symmetric(3) matches direct permutation multiplication") {
  auto s3 = symmetric_group(3);
  CHECK(s3->order() == 6);
  const Element t12 = element_by_name(*s3, "(1 2)");
  const Element t13 = element_by_name(*s3, "(1 3)");
  const Element c132 = element_by_name(*s3, "(1 3 2)");
  // Oracle: one-line forms, right factor acts first.
  // (12) = [1,0,2], (13) = [2,1,0]; composite x -> (12)[(13)[x]] = [2,0,1] = (132).
  CHECK(s3->compose(t12, t13) == c132);
  CHECK(!s3->is_abelian());

  // Exhaustive associativity and inverse axioms at this size.
  for (Element a = 0; a < 6; ++a) {
    CHECK(s3->compose(a, s3->inverse(a)) == s3->identity());
    for (Element b = 0; b < 6; ++b)
      for (Element c = 0; c < 6; ++c)
        CHECK(s3->compose(s3->compose(a, b), c) == s3->compose(a, s3->compose(b, c)));
  }
}

TEST_CASE("circle composition reduces mod 1") {
  CHECK(circle_compose(0.75, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(circle_compose(0.25, circle_inverse(0.25)) == doctest::Approx(0.0));
  CHECK(circle_reduce(-0.25) == doctest::Approx(0.75));
  CHECK(circle_reduce(3.5) == doctest::Approx(0.5));
}

TEST_CASE("generated subgroup agrees with the brute-force closure oracle") {
  auto s3 = symmetric_group(3);
  const Element t12 = element_by_name(*s3, "(1 2)");
  const Element c123 = element_by_name(*s3, "(1 2 3)");

  SUBCASE("an involution generates order 2") {
    auto h = generated_subgroup(s3, std::vector<Element>{t12});
    CHECK(h.order() == 2);
    auto oracle = closure_oracle(*s3, {t12}, false);
    CHECK(std::set<Element>(h.members.begin(), h.members.end()) == oracle);
  }
  SUBCASE("a transposition and a 3-cycle generate everything") {
    auto h = generated_subgroup(s3, std::vector<Element>{t12, c123});
    CHECK(h.is_whole_group());
  }
  SUBCASE("cyclic subgroups of Z4") {
    auto z4 = cyclic_group(4);
    CHECK(generated_subgroup(z4, std::vector<Element>{1}).is_whole_group());
    auto h = generated_subgroup(z4, std::vector<Element>{2});
    CHECK(h.members == std::vector<Element>{0, 2});
    auto oracle = closure_oracle(*z4, {2}, false);
    CHECK(std::set<Element>(h.members.begin(), h.members.end()) == oracle);
  }
  SUBCASE("empty seed set is rejected") {
    CHECK_THROWS_AS(generated_subgroup(s3, std::vector<Element>{}), std::invalid_argument);
  }
  SUBCASE("output is a fixed point of one more closure pass") {
    for (Element seed = 0; seed < s3->order(); ++seed) {
      auto h = generated_subgroup(s3, std::vector<Element>{seed});
      auto again = closure_oracle(*s3, {h.members.begin(), h.members.end()}, false);
      CHECK(std::set<Element>(h.members.begin(), h.members.end()) == again);
    }
  }
}

TEST_CASE("normal closure agrees with the conjugation closure oracle") {
  auto s3 = symmetric_group(3);
  const Element t12 = element_by_name(*s3, "(1 2)");
  const Element c123 = element_by_name(*s3, "(1 2 3)");

  auto a3 = normal_closure(s3, std::vector<Element>{c123});
  CHECK(a3.order() == 3);
  CHECK(a3.is_normal);
  CHECK(std::set<Element>(a3.members.begin(), a3.members.end()) ==
        closure_oracle(*s3, {c123}, true));

  // Conjugates of one transposition generate all of S3.
  CHECK(normal_closure(s3, std::vector<Element>{t12}).is_whole_group());

  // Abelian: normal closure equals the generated subgroup.
  auto z4 = cyclic_group(4);
  CHECK(normal_closure(z4, std::vector<Element>{2}).members == std::vector<Element>{0, 2});

  // Normal closure contains the generated subgroup and is conjugation-closed.
  for (Element seed = 0; seed < s3->order(); ++seed) {
    auto gen = generated_subgroup(s3, std::vector<Element>{seed});
    auto nc = normal_closure(s3, std::vector<Element>{seed});
    CHECK(std::includes(nc.members.begin(), nc.members.end(), gen.members.begin(), gen.members.end()));
    for (Element x : nc.members)
      for (Element c = 0; c < s3->order(); ++c) CHECK(nc.contains(s3->conjugate(c, x)));
  }
}

TEST_CASE("builtin groups have the expected structure") {
  CHECK(cyclic_group(4)->is_abelian());
  CHECK(symmetric_group(3)->order() == 6);
  CHECK(symmetric_group(5)->order() == 120);

  auto d4 = dihedral_group(4);
  CHECK(d4->order() == 8);
  CHECK(d4->conjugacy_classes().size() == 5);  // classical fact, recomputed by brute force
  CHECK(d4->center().size() == 2);

  auto q8 = quaternion_group();
  CHECK(q8->order() == 8);
  CHECK(q8->conjugacy_classes().size() == 5);
  CHECK(q8->center().size() == 2);
  // i * j = k in the chosen element order.
  CHECK(q8->compose(2, 4) == 6);
  CHECK(q8->compose(4, 2) == 7);  // j * i = -k

  auto subs = normal_subgroups(*symmetric_group(3));
  REQUIRE(subs.size() == 3);  // trivial, A3, S3
  CHECK(subs[0].size() == 1);
  CHECK(subs[1].size() == 3);
  CHECK(subs[2].size() == 6);
}

TEST_CASE("invalid Cayley tables are rejected") {
  CHECK_THROWS_AS(FiniteGroup::from_table("bad", 2, {0, 0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGroup::from_table("bad", 2, {0, 1, 1, 0, 0}), std::invalid_argument);
  // Latin square with no two-sided identity.
  CHECK_THROWS_AS(FiniteGroup::from_table("bad", 3, {0, 1, 2, 2, 0, 1, 1, 2, 0}),
                  std::invalid_argument);
  // Relabeled Z3 whose identity is index 2 is fine; no renumbering required.
  auto relabeled = FiniteGroup::from_table("z3", 3, {1, 2, 0, 2, 0, 1, 0, 1, 2});
  CHECK(relabeled->identity() == 2);
  CHECK(relabeled->compose(0, 0) == 1);
  // Latin square with identity but not associative: order-5 "subtraction" table
  // x*y = x - y mod 5 has right identity only.
  std::vector<int> sub5(25);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) sub5[a * 5 + b] = ((a - b) % 5 + 5) % 5;
  CHECK_THROWS_AS(FiniteGroup::from_table("bad", 5, sub5), std::invalid_argument);
}

TEST_CASE("haar sampling is uniform (chi-square at 1e-3)") {
  const int draws = 1000000;
  auto check_uniform = [&](const FiniteGroup& g, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<long long> counts(static_cast<std::size_t>(g.order()), 0);
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(haar_sample(g, rng))];
    const double expected = static_cast<double>(draws) / g.order();
    double chi2 = 0.0;
    for (long long c : counts) {
      const double d = static_cast<double>(c) - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < chi_square_quantile(0.999, g.order() - 1));
    // Cell frequencies within the 3-sigma binomial band.
    const double p = 1.0 / g.order();
    const double band = 3.0 * std::sqrt(p * (1 - p) / draws);
    for (long long c : counts)
      CHECK(std::abs(static_cast<double>(c) / draws - p) < band * 1.5);
  };
  check_uniform(*cyclic_group(2), 11);
  check_uniform(*symmetric_group(3), 12);

  // circle: ten equal cells
  RngStream rng(13, 0);
  std::vector<long long> counts(10, 0);
  for (int i = 0; i < draws; ++i)
    ++counts[std::min<std::size_t>(static_cast<std::size_t>(haar_sample_circle(rng) * 10), 9)];
  double chi2 = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - draws / 10.0;
    chi2 += d * d / (draws / 10.0);
  }
  CHECK(chi2 < chi_square_quantile(0.999, 9));
}

TEST_CASE("splitmix streams are reproducible and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
}
