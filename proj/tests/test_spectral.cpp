#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "haarwalk/spectral.hpp"

using namespace haarwalk;

namespace {

struct Z2Instance {
  BuiltinGroup b = make_builtin("cyclic(2)");
  FiniteMeasure nu = FiniteMeasure::probability(b.group, Eigen::Vector2d(0.25, 0.75));
  FiniteFunction f = FiniteFunction(b.group, Eigen::Vector2d(1.0, -1.0));
};

FiniteMeasure random_probability(const GroupPtr& g, RngStream& rng) {
  Eigen::VectorXd w(g->order());
  for (int i = 0; i < g->order(); ++i) w(i) = -std::log(1.0 - rng.next_double());
  w /= w.sum();
  return FiniteMeasure::probability(g, std::move(w));
}

FiniteFunction random_mean_zero(const GroupPtr& g, RngStream& rng) {
  Eigen::VectorXd v(g->order());
  for (int i = 0; i < g->order(); ++i) v(i) = 2.0 * rng.next_double() - 1.0;
  return FiniteFunction::demeaned(g, std::move(v));
}

BuiltinGroup s3_central_instance(FiniteMeasure* nu_out, FiniteFunction* f_out) {
  auto b = make_builtin("symmetric(3)");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd sgn(6);
  for (Element x = 0; x < 6; ++x) {
    const auto& n = b.group->element_name(x);
    if (n == "e") w(x) = 0.25;
    else if (n.size() == 5) w(x) = 0.25;  // transpositions "(a b)"
    sgn(x) = (n == "e" || n.size() == 7) ? 1.0 : -1.0;
  }
  *nu_out = FiniteMeasure::probability(b.group, std::move(w));
  *f_out = FiniteFunction(b.group, std::move(sgn));
  return b;
}

}  // namespace

TEST_CASE("TV gap to uniform decays exactly as 2^{-k} on the Z2 instance") {
  Z2Instance z;
  for (int k = 1; k <= 40; ++k)
    CHECK(std::abs(tv_to_uniform_at(z.nu, k) - std::pow(2.0, -k)) <= 1e-12);
  auto z4 = cyclic_group(4);
  auto d1 = FiniteMeasure::dirac(z4, 1);
  for (int k : {1, 2, 7}) CHECK(tv_to_uniform_at(d1, k) == doctest::Approx(1.5));
  CHECK(tv_to_uniform_at(FiniteMeasure::uniform(z.b.group), 5) == doctest::Approx(0.0));
}

TEST_CASE("convergence rate from the dual") {
  Z2Instance z;
  CHECK(convergence_rate(z.nu, *z.b.dual).q == doctest::Approx(0.5));

  FiniteMeasure nu = z.nu;
  FiniteFunction f = z.f;
  auto s3 = s3_central_instance(&nu, &f);
  CHECK(convergence_rate(nu, *s3.dual).q == doctest::Approx(0.5));

  auto z4 = make_builtin("cyclic(4)");
  CHECK(convergence_rate(FiniteMeasure::dirac(z4.group, 1), *z4.dual).q == doctest::Approx(1.0));
}

TEST_CASE("Delta series") {
  Z2Instance z;
  SUBCASE("uniform gives exactly 1") {
    auto s = tv_series(FiniteMeasure::uniform(z.b.group));
    CHECK(s.sum == doctest::Approx(1.0));
    CHECK(s.tail_bound == 0.0);
    CHECK(!s.divergent);
  }
  SUBCASE("Z2 instance sums to 3") {
    auto s = tv_series(z.nu, 1e-12);
    CHECK(std::abs(s.sum - 3.0) <= 1e-9);
    CHECK(s.tail_bound < 1e-9);
    CHECK(s.k_stop == 40);
    CHECK(s.at(1) == doctest::Approx(0.5));
    CHECK(s.at(5) == doctest::Approx(std::pow(2.0, -5)));
  }
  SUBCASE("deterministic rotation diverges") {
    auto z4 = cyclic_group(4);
    auto s = tv_series(FiniteMeasure::dirac(z4, 1), 1e-12, 500);
    CHECK(s.divergent);
  }
  SUBCASE("weighted tail dominates the variance remainder budget") {
    auto s = tv_series(z.nu, 1e-12);
    // sum of d 2^{-d} = 2 exactly.
    CHECK(tv_series_weighted(s) == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("autocovariance") {
  Z2Instance z;
  for (int k = 1; k <= 12; ++k)
    CHECK(autocovariance(z.f, z.nu, k) == doctest::Approx(std::pow(-0.5, k)).epsilon(1e-12));
  CHECK(autocovariance(z.f, FiniteMeasure::uniform(z.b.group), 3) == doctest::Approx(0.0));

  SUBCASE("|A_k| <= ||f||_2^2 Delta_k") {
    auto d4 = make_builtin("dihedral(4)");
    RngStream rng(321, 0);
    for (int t = 0; t < 10; ++t) {
      auto nu = random_probability(d4.group, rng);
      auto f = random_mean_zero(d4.group, rng);
      const double l2sq = f.lp_norm(2) * f.lp_norm(2);
      for (int k = 1; k <= 16; ++k)
        CHECK(std::abs(autocovariance(f, nu, k)) <= l2sq * tv_to_uniform_at(nu, k) + 1e-12);
    }
  }
  SUBCASE("matches the dual-side expansion sum d_pi tr(f-hat f-hat* nu-hat^k)") {
    for (const char* spec : {"quaternion8", "dihedral(4)", "symmetric(3)"}) {
      auto b = make_builtin(spec);
      RngStream rng(654, 0);
      auto nu = random_probability(b.group, rng);
      auto f = random_mean_zero(b.group, rng);
      for (int k = 1; k <= 6; ++k) {
        std::complex<double> acc{};
        for (const auto& pi : b.dual->irreps) {
          const auto fh = fourier_coefficient(f, pi);
          const auto nh = fourier_coefficient(nu, pi);
          Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(pi.dim, pi.dim);
          for (int i = 0; i < k; ++i) p *= nh;
          acc += static_cast<double>(pi.dim) * (fh * fh.adjoint() * p).trace();
        }
        CHECK(autocovariance(f, nu, k) == doctest::Approx(acc.real()).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("variance constant, series route") {
  Z2Instance z;
  auto c = variance_constant_series(z.f, z.nu);
  CHECK(c.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(!c.divergent);

  CHECK(variance_constant_series(z.f, FiniteMeasure::uniform(z.b.group)).value ==
        doctest::Approx(1.0));
  FiniteFunction zero(z.b.group, Eigen::Vector2d(0.0, 0.0));
  CHECK(variance_constant_series(zero, z.nu).value == doctest::Approx(0.0));

  auto z4 = cyclic_group(4);
  FiniteFunction f4 = FiniteFunction::demeaned(z4, Eigen::Vector4d(1, 0, 0, 0));
  CHECK(variance_constant_series(f4, FiniteMeasure::dirac(z4, 1)).divergent);
}

TEST_CASE("variance constant, Fourier route") {
  Z2Instance z;
  SUBCASE("scalar formula on Z2") {
    auto c = variance_constant_fourier(z.f, z.nu, *z.b.dual);
    CHECK(c.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    Eigen::MatrixXcd lam(1, 1);
    lam(0, 0) = -0.5;
    CHECK(b_matrix(lam)(0, 0).real() == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("uniform measure rebuilds Parseval") {
    CHECK(variance_constant_fourier(z.f, FiniteMeasure::uniform(z.b.group), *z.b.dual).value ==
          doctest::Approx(1.0));
  }
  SUBCASE("S3 central example") {
    FiniteMeasure nu = z.nu;
    FiniteFunction f = z.f;
    auto s3 = s3_central_instance(&nu, &f);
    CHECK(variance_constant_fourier(f, nu, *s3.dual).value == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("deterministic rotation reports divergence instead of inverting") {
    auto z4 = make_builtin("cyclic(4)");
    FiniteFunction f4 = FiniteFunction::demeaned(z4.group, Eigen::Vector4d(1, 0, 0, 0));
    CHECK(variance_constant_fourier(f4, FiniteMeasure::dirac(z4.group, 1), *z4.dual).divergent);
  }
  SUBCASE("B matrices are Hermitian and terms nonnegative") {
    auto q8 = make_builtin("quaternion8");
    RngStream rng(987, 0);
    for (int t = 0; t < 25; ++t) {
      auto nu = random_probability(q8.group, rng);
      auto f = random_mean_zero(q8.group, rng);
      for (const auto& pi : q8.dual->irreps) {
        if (pi.trivial) continue;
        const Eigen::MatrixXcd B = b_matrix(fourier_coefficient(nu, pi));
        CHECK((B - B.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
      }
      for (double term : variance_fourier_terms(f, nu, *q8.dual)) CHECK(term >= -1e-10);
    }
  }
}

TEST_CASE("central measures reduce the Fourier form to scalars") {
  // With nu central every nu-hat is scalar, so each term collapses to
  // tr(f-hat f-hat*) tr(B).
  auto q8 = make_builtin("quaternion8");
  RngStream rng(112, 0);
  auto classes = q8.group->conjugacy_classes();
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd w(q8.group->order());
    for (const auto& cls : classes) {
      const double v = -std::log(1.0 - rng.next_double());
      for (Element x : cls) w(x) = v;
    }
    w /= w.sum();
    auto nu = FiniteMeasure::probability(q8.group, w);
    REQUIRE(is_central(nu));
    if (convergence_rate(nu, *q8.dual).q >= 1.0 - 1e-9) continue;
    auto f = random_mean_zero(q8.group, rng);
    double scalar_form = 0.0;
    for (const auto& pi : q8.dual->irreps) {
      if (pi.trivial) continue;
      const auto fh = fourier_coefficient(f, pi);
      const auto B = b_matrix(fourier_coefficient(nu, pi));
      scalar_form += (fh * fh.adjoint()).trace().real() * B.trace().real();
    }
    CHECK(variance_constant_fourier(f, nu, *q8.dual).value ==
          doctest::Approx(scalar_form).epsilon(1e-10));
  }
}

TEST_CASE("the two variance routes agree on random instances") {
  RngStream rng(20240808, 0);
  const char* specs[] = {"cyclic(3)", "cyclic(8)", "dihedral(4)", "symmetric(3)", "quaternion8"};
  int done = 0;
  while (done < 40) {
    auto b = make_builtin(specs[done % 5]);
    auto nu = random_probability(b.group, rng);
    if (!is_adapted(nu) || !is_strictly_aperiodic(nu)) continue;
    auto f = random_mean_zero(b.group, rng);
    auto cs = variance_constant_series(f, nu);
    auto cf = variance_constant_fourier(f, nu, *b.dual);
    REQUIRE(!cs.divergent);
    REQUIRE(!cf.divergent);
    CHECK(std::abs(cs.value - cf.value) <= cs.bound + cf.bound + 1e-9);
    ++done;
  }
}

TEST_CASE("class/central bracket") {
  Z2Instance z;
  SUBCASE("Z2: bracket [1/3, 3] and C sits on the lower edge") {
    auto br = class_central_bracket(z.f, z.nu, 0.5);
    REQUIRE(br.has_value());
    CHECK(br->first == doctest::Approx(1.0 / 3.0));
    CHECK(br->second == doctest::Approx(3.0));
    CHECK(variance_constant_fourier(z.f, z.nu, *z.b.dual).value ==
          doctest::Approx(br->first).epsilon(1e-12));
  }
  SUBCASE("uniform: q = 0 collapses the bracket") {
    auto br = class_central_bracket(z.f, FiniteMeasure::uniform(z.b.group), 0.0);
    REQUIRE(br.has_value());
    CHECK(br->first == doctest::Approx(1.0));
    CHECK(br->second == doctest::Approx(1.0));
  }
  SUBCASE("S3 central example") {
    FiniteMeasure nu = z.nu;
    FiniteFunction f = z.f;
    auto s3 = s3_central_instance(&nu, &f);
    auto br = class_central_bracket(f, nu, 0.5);
    REQUIRE(br.has_value());
    CHECK(br->first == doctest::Approx(1.0 / 3.0));
    CHECK(br->second == doctest::Approx(3.0));
  }
  SUBCASE("not applicable when no hypothesis holds") {
    auto s3 = make_builtin("symmetric(3)");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    for (Element x = 0; x < 6; ++x) {
      const auto& n = s3.group->element_name(x);
      if (n == "e") w(x) = 0.2;
      if (n == "(1 2 3)") w(x) = 0.5;  // non-involution so the reversal differs
      if (n == "(1 2)") w(x) = 0.3;
    }
    auto nu = FiniteMeasure::probability(s3.group, w);
    Eigen::VectorXd v(6);
    v << 1, -1, 2, -2, 0.5, -0.5;
    auto f = FiniteFunction::demeaned(s3.group, v);
    REQUIRE(!f.is_class_function());
    REQUIRE(!is_central(nu));
    auto rev = nu.reversed();
    REQUIRE(tv_distance(convolve(nu, rev), convolve(rev, nu)) > 1e-6);
    CHECK(!class_central_bracket(f, nu, 0.5).has_value());
  }
}

TEST_CASE("exact partial-sum variance") {
  Z2Instance z;
  CHECK(stationary_sum_variance(z.f, z.nu, 1) == doctest::Approx(1.0));
  CHECK(stationary_sum_variance(z.f, z.nu, 3) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(stationary_sum_variance(z.f, FiniteMeasure::uniform(z.b.group), 7) ==
        doctest::Approx(7.0));

  SUBCASE("V(N) stays within the remainder budget of C N") {
    const double C = 1.0 / 3.0;
    auto s = tv_series(z.nu, 1e-12);
    const double budget = 2.0 * 1.0 * tv_series_weighted(s);  // ||f||_2^2 = 1
    auto v = stationary_sum_variance_prefix(z.f, z.nu, 1000);
    const double delta_total = s.sum + s.tail_bound;
    for (std::size_t n = 1; n <= v.size(); ++n) {
      CHECK(std::abs(v[n - 1] - C * static_cast<double>(n)) <= budget + 1e-9);
      CHECK(v[n - 1] <= delta_total * static_cast<double>(n) + 1e-9);
    }
  }
}

TEST_CASE("Berry-Esseen constant") {
  Z2Instance z;
  auto delta = tv_series(z.nu, 1e-12);
  SUBCASE("Z2 instance at delta = 1") {
    auto c = variance_constant_fourier(z.f, z.nu, *z.b.dual);
    auto K = berry_esseen_constant(z.f, c, delta, 1.0);
    const double expected = 3.0 * std::pow(3.0, 0.75);  // Delta (1/sqrt(1/3))^{3/2}
    CHECK(K.lo == doctest::Approx(expected).epsilon(1e-9));
    CHECK(K.hi >= K.lo);
    CHECK(K.hi == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("uniform with a normalized observable gives K = 1") {
    auto mu = FiniteMeasure::uniform(z.b.group);
    auto du = tv_series(mu);
    auto c = variance_constant_fourier(z.f, mu, *z.b.dual);
    auto K = berry_esseen_constant(z.f, c, du, 1.0);
    CHECK(K.lo == doctest::Approx(1.0));
    CHECK(K.hi == doctest::Approx(1.0));
  }
  SUBCASE("class/central case obeys K <= 2 Delta^{7/4} in the L2 variant") {
    FiniteMeasure nu = z.nu;
    FiniteFunction f = z.f;
    auto s3 = s3_central_instance(&nu, &f);
    auto d = tv_series(nu, 1e-12);
    auto c = variance_constant_fourier(f, nu, *s3.dual);
    auto K = berry_esseen_constant(f, c, d, 1.0, /*use_l2_norm=*/true);
    CHECK(K.hi <= 2.0 * std::pow(d.sum + d.tail_bound, 1.75) + 1e-9);
  }
  SUBCASE("zero variance flags degeneracy") {
    FiniteFunction zero(z.b.group, Eigen::Vector2d(0.0, 0.0));
    auto c = variance_constant_series(zero, z.nu);
    CHECK(berry_esseen_constant(zero, c, delta, 1.0).degenerate);
  }
}

TEST_CASE("iterated-logarithm normalizer") {
  const double e2 = std::exp(2.0);
  CHECK(slln_normalizer(1, 1.0, e2) == doctest::Approx(e2 * 4.0).epsilon(1e-12));
  // Direct evaluation of the m = 2 case: N log N (log log N)^{1+eps}.
  const double ee = std::exp(std::exp(1.0));
  CHECK(slln_normalizer(2, 1.0, ee) ==
        doctest::Approx(ee * std::exp(1.0) * 1.0).epsilon(1e-12));
  SUBCASE("monotone in eps") {
    double prev = 0.0;
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      const double v = slln_normalizer(1, eps, 100.0);
      CHECK(v > prev);
      prev = v;
    }
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(slln_normalizer(2, 1.0, 2.0), std::domain_error);  // log log 2 < 0
    CHECK_THROWS_AS(slln_normalizer(1, 1.0, 0.5), std::domain_error);
  }
}

TEST_CASE("rate law: Delta_k^{1/k} approaches q from above") {
  Z2Instance z;
  const double d200 = tv_to_uniform_at(z.nu, 200);
  CHECK(std::abs(std::pow(d200, 1.0 / 200.0) - 0.5) <= 1e-3);

  SUBCASE("equivalence of q < 1 with the support flags on a small sweep") {
    RngStream rng(31337, 0);
    const char* specs[] = {"cyclic(2)", "cyclic(4)", "cyclic(6)", "dihedral(3)", "symmetric(3)"};
    for (const char* spec : specs) {
      auto b = make_builtin(spec);
      for (int t = 0; t < 20; ++t) {
        // uniform measure on a random nonempty support
        Eigen::VectorXd w = Eigen::VectorXd::Zero(b.group->order());
        int nnz = 0;
        for (int i = 0; i < b.group->order(); ++i)
          if (rng.next_double() < 0.4) {
            w(i) = 1.0;
            ++nnz;
          }
        if (nnz == 0) continue;
        w /= w.sum();
        auto nu = FiniteMeasure::probability(b.group, w);
        const double q = convergence_rate(nu, *b.dual).q;
        const bool flags = is_adapted(nu) && is_strictly_aperiodic(nu) && has_abs_component(nu);
        CHECK((q < 1.0 - 1e-9) == flags);
      }
    }
  }
}

TEST_CASE("full analysis bundles the invariants") {
  Z2Instance z;
  auto report = analyze(z.b.group, *z.b.dual, z.nu, z.f, 1.0, 1e-12);
  CHECK(report.adapted);
  CHECK(report.strictly_aperiodic);
  CHECK(report.abs_component);
  CHECK(report.rate.q == doctest::Approx(0.5));
  CHECK(std::abs(report.delta.sum - 3.0) < 1e-9);
  CHECK(report.c_series.value == doctest::Approx(1.0 / 3.0));
  CHECK(report.c_fourier.value == doctest::Approx(1.0 / 3.0));
  CHECK(report.cross_consistent);
  REQUIRE(report.bracket.has_value());
  CHECK(report.bracket_ok);
  CHECK(report.warnings.empty());
  // Delta >= 1/(1-q) holds with q = 1/2 and Delta = 3 >= 2.
  CHECK(report.delta.sum + report.delta.tail_bound >= 1.0 / (1.0 - report.rate.q) - 1e-9);
}
