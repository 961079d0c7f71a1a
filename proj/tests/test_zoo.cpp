#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpq/ensemble.hpp"
#include "kpq/error.hpp"
#include "kpq/rational.hpp"
#include "kpq/zoo.hpp"

using namespace kpq;

TEST_CASE("rational arithmetic is exact") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(Rational(-4, -6) == Rational(2, 3));
  CHECK(Rational::parse("-7/2") == Rational(-7, 2));
  CHECK(Rational::parse("1.5") == Rational(3, 2));
  CHECK(Rational::approximate(2.0 / 3.0) == Rational(2, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational(INT64_MAX / 2, 1) * Rational(4, 1), Error);
}

TEST_CASE("DiffTriple requires p + q = k") {
  CHECK_NOTHROW(DiffTriple(2, Rational(4, 3), Rational(2, 3)));
  CHECK_THROWS_AS(DiffTriple(2, Rational(4, 3), Rational(1, 3)), Error);
  const auto t = triple_from_json(nlohmann::json{{"k", 4}, {"p", "7/2"}, {"q", "1/2"}});
  CHECK(t.p == Rational(7, 2));
  CHECK(triple_from_json(to_json(t)).q == t.q);
}

TEST_CASE("Groechenig-Schur type norms") {
  CHECK(groschur_norm(ComplexMatrix::identity(4), 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(groschur_norm(ComplexMatrix::identity(4), INFINITY, 2.0) == doctest::Approx(1.0));
  ComplexMatrix single(5);
  single(0, 3) = 1.0;
  CHECK(groschur_norm(single, 2.0, 1.5) == doctest::Approx(std::pow(4.0, 1.5)));
  ComplexMatrix ones(3);
  for (auto& z : ones.entries()) z = 1.0;
  CHECK(groschur_norm(ones, 1.0, 1.0) == doctest::Approx(6.0));

  CHECK(bgs_norm(ComplexMatrix::identity(4), 1.0, 3.0) == doctest::Approx(1.0));
  ComplexMatrix sup(3);
  sup(0, 1) = sup(1, 2) = 1.0;
  CHECK(bgs_norm(sup, 1.0, 0.0) == doctest::Approx(1.0));
  // diagonals k = -2..2 all have sup 1, weights 1 + |k|
  CHECK(bgs_norm(ones, 1.0, 1.0) == doctest::Approx(11.0));

  CHECK(beurling_norm(ComplexMatrix::identity(4), 1.0, 0.0) == doctest::Approx(1.0));
  ComplexMatrix far(3);
  far(0, 2) = 1.0;
  CHECK(beurling_norm(far, 1.0, 0.0) == doctest::Approx(5.0));
  CHECK(beurling_norm(ComplexMatrix(3), 1.0, 1.0) == 0.0);
}

TEST_CASE("Groechenig-Schur norm by brute force") {
  std::mt19937_64 rng(21);
  const auto a = kpq::testing::random_matrix(7, rng);
  for (double p : {1.0, 2.0}) {
    double best = 0.0;
    for (int i = 0; i < 7; ++i) {
      double row = 0.0, col = 0.0;
      for (int j = 0; j < 7; ++j) {
        const double w = std::pow(1.0 + std::abs(i - j), 1.5);
        row += std::pow(std::abs(a(i, j)) * w, p);
        col += std::pow(std::abs(a(j, i)) * w, p);
      }
      best = std::max({best, std::pow(row, 1 / p), std::pow(col, 1 / p)});
    }
    CHECK(groschur_norm(a, p, 1.5) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("exponents") {
  auto ss = shin_sun_exponent(INFINITY, 2.0);
  CHECK(ss.theta == Rational(2, 3));
  CHECK(ss.triple.p == Rational(4, 3));
  CHECK(ss.triple.q == Rational(2, 3));
  CHECK(shin_sun_exponent(1.0, 1.0).theta == Rational(2, 3));
  CHECK(shin_sun_exponent(2.0, 1.5).theta == Rational(2, 3));

  const auto f1 = fell_triple(Rational(1));
  CHECK(f1.k == 4);
  CHECK(f1.p == Rational(7, 2));
  CHECK(f1.q == Rational(1, 2));
  const auto f3 = fell_triple(Rational(3));
  CHECK(f3.p == Rational(15, 4));
  CHECK(f3.q == Rational(1, 4));
  Rational prev(1);
  for (int p = 1; p < 20; ++p) {
    const auto q = fell_triple(Rational(p)).q;
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("summability of inverse weights") {
  const auto z = GroupModel::lattice(1);
  CHECK(inverse_weight_summability(*z, Weight::polynomial(2), 1.0).convergent);
  CHECK_FALSE(inverse_weight_summability(*z, Weight::polynomial(2), 0.4).convergent);
  const auto z2 = GroupModel::lattice(2);
  CHECK_FALSE(inverse_weight_summability(*z2, Weight::polynomial(1), 1.0).convergent);
  CHECK_THROWS_AS(fell_triple_checked(*z, Weight::polynomial(2), Rational(2, 5)), Error);
}

TEST_CASE("derivation-domain and Hilbert algebra norms") {
  CHECK(deriv_domain_norm(TrigPolynomial::constant(1.0)) == doctest::Approx(1.0));
  CHECK(deriv_domain_norm(TrigPolynomial::monomial(1)) == doctest::Approx(2.0));
  const auto cosine = TrigPolynomial::monomial(1, 0.5) + TrigPolynomial::monomial(-1, 0.5);
  CHECK(deriv_domain_norm(cosine) == doctest::Approx(2.0).epsilon(1e-10));
  // dense scan at 2^16 points
  const auto f = TrigPolynomial::monomial(2, Complex(0.3, 0.1)) + TrigPolynomial::monomial(-1, 0.7) +
                 TrigPolynomial::constant(0.2);
  const auto df = f.derivative();
  double s0 = 0.0, s1 = 0.0;
  for (int j = 0; j < (1 << 16); ++j) {
    const double th = 2 * M_PI * j / 65536.0;
    s0 = std::max(s0, std::abs(f(th)));
    s1 = std::max(s1, std::abs(df(th)));
  }
  CHECK(deriv_domain_norm(f) == doctest::Approx(s0 + s1).epsilon(1e-8));

  const auto c5 = GroupModel::cyclic(5);
  CHECK(hilbert_algebra_norm(WeightedSection::delta(c5, c5->identity())) == doctest::Approx(2.0));
  WeightedSection u(c5);
  for (const auto& e : ball(*c5, 5)) u += WeightedSection::delta(c5, e, 0.2);
  CHECK(hilbert_algebra_norm(u) == doctest::Approx(1.0 / std::sqrt(5.0) + 1.0));
  CHECK(hilbert_algebra_norm(WeightedSection(c5)) == 0.0);
}

TEST_CASE("registry instances: domination, involution, declared triples") {
  const std::vector<std::string> names{"cstar",          "schatten:1",   "schatten:2",      "jaffard:2",
                                       "groschur:2:1.5", "bgs:1:1",      "beurling:2:1",    "l1w:Z:poly2",
                                       "l1w:Z2:poly3",   "l1w:F2:poly1", "l1w:Z:subexp0.5", "l2w:Z:poly2",
                                       "c1-torus",       "hilbert:cyclic:5"};
  for (const auto& name : names) {
    CAPTURE(name);
    const auto inst = make_instance(name);
    // the Jaffard norm dominates the operator norm only up to sum_k (1+|k|)^-2
    const double dom = name == "jaffard:2" ? M_PI * M_PI / 3 - 1 : 1.0;
    if (inst.declared) CHECK(inst.declared->p + inst.declared->q == Rational(inst.declared->k));
    SamplerSpec s;
    s.size = 6;
    s.support_radius = 2;
    s.degree = 6;
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto x = sample_element(inst, s, derive_seed(99, i));
      const double a = inst.a_norm(x);
      CHECK(dom * a >= inst.b_norm(x) - 1e-9 * (1.0 + a));
      CHECK(inst.a_norm(element_adjoint(x)) <= inst.involution_constant * a * (1 + 1e-12) + 1e-12);
    }
  }
  CHECK(make_instance("jaffard:2").declared->p == Rational(4, 3));
  CHECK(make_instance("l1w:Z:poly2").declared->p == Rational(7, 2));
  CHECK(*make_instance("c1-torus").forced_constant == 2.0);
  CHECK(*make_instance("schatten:1").forced_constant == 1.0);
  CHECK_THROWS_AS(make_instance("nonsense"), Error);
  CHECK_THROWS_AS(make_instance("schatten:0.5"), Error);
  CHECK_FALSE(registry_entries().empty());
}

TEST_CASE("samplers are deterministic and respect self-adjointness") {
  const auto inst = make_instance("jaffard:2");
  SamplerSpec s;
  s.size = 12;
  s.ensemble = "banded";
  s.self_adjoint = true;
  const auto a = std::get<ComplexMatrix>(sample_element(inst, s, 5));
  CHECK(a == std::get<ComplexMatrix>(sample_element(inst, s, 5)));
  CHECK_FALSE(a == std::get<ComplexMatrix>(sample_element(inst, s, 6)));
  CHECK(adjoint(a) == a);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK_THROWS_AS(sampler_from_json(nlohmann::json{{"sizee", 3}}), Error);
}
