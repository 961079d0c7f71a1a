#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kpq/audit.hpp"
#include "kpq/error.hpp"

using namespace kpq;

TEST_CASE("ratio of a 1x1 matrix in the C*-algebra is one") {
  const auto inst = make_instance("cstar");
  SamplerSpec s;
  s.ensemble = "gaussian";
  s.size = 1;
  const auto r = audit(inst, DiffTriple(2, Rational(1), Rational(1)), s, 20, 3);
  for (double v : r.ratios) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.pass);
}

TEST_CASE("audit is independent of the worker count") {
  const auto inst = make_instance("jaffard:2");
  SamplerSpec s;
  s.size = 16;
  const DiffTriple t(2, Rational(4, 3), Rational(2, 3));
  AuditOptions one, four;
  four.jobs = 4;
  const auto a = audit(inst, t, s, 40, 77, one);
  const auto b = audit(inst, t, s, 40, 77, four);
  REQUIRE(a.ratios.size() == b.ratios.size());
  for (std::size_t i = 0; i < a.ratios.size(); ++i) CHECK(a.ratios[i] == b.ratios[i]);
  CHECK(a.c_hat == b.c_hat);
  CHECK(a.mean == b.mean);
  const auto c = audit(inst, t, s, 40, 78, one);
  CHECK(c.c_hat != a.c_hat);
}

TEST_CASE("ratios are scale invariant") {
  const auto inst = make_instance("schatten:1");
  const DiffTriple t(2, Rational(1), Rational(1));
  std::mt19937_64 rng(5);
  const auto x = kpq::testing::random_matrix(6, rng);
  const double r = *kpq_sample_ratio(inst, t, x);
  for (double s : {1e-30, 1e-3, 7.0, 1e40}) CHECK(std::abs(*kpq_sample_ratio(inst, t, Complex(s) * x) / r - 1) < 1e-12);
  CHECK_FALSE(kpq_sample_ratio(inst, t, ComplexMatrix(3)).has_value());
}

TEST_CASE("forced constants hold") {
  const DiffTriple t(2, Rational(1), Rational(1));
  SamplerSpec s;
  s.ensemble = "gaussian";
  for (const char* name : {"schatten:1", "schatten:2"}) {
    const auto r = audit(make_instance(name), t, s, 100, 11);
    CHECK(r.c_hat <= 1 + 1e-9);
    CHECK(r.pass);
    CHECK(r.violations.empty());
  }
}

TEST_CASE("iterated inequality") {
  const auto inst = make_instance("cstar");
  const std::vector<double> d{0.5, -2.0, 1.5};
  const auto x = ComplexMatrix::diagonal(std::span<const double>(d));
  // in a C*-algebra ||x^{2^n}|| = ||x||^{2^n} for normal x: zero slack with C = 1
  const auto r = iterated_check(inst, DiffTriple(2, Rational(1), Rational(1)), 1.0, x, 4);
  CHECK(r.pass);
  for (const auto& row : r.rows) CHECK(std::abs(row.slack_stated) < 1e-12);
  CHECK(orbit_constant(inst, DiffTriple(2, Rational(1), Rational(1)), x, 3) == doctest::Approx(1.0));

  // huge powers stay finite through renormalization
  const std::vector<double> big{1e10, 3.0};
  const auto rb = iterated_check(inst, DiffTriple(2, Rational(1), Rational(1)), 1.0,
                                 ComplexMatrix::diagonal(std::span<const double>(big)), 6);
  for (const auto& row : rb.rows) CHECK(std::isfinite(row.log_lhs));

  // the corrected constant exponent is never smaller than n for p >= 2
  const auto z = make_instance("l1w:Z:poly2");
  const auto phi = WeightedSection::delta(z.group, GroupElement{1}) + WeightedSection::delta(z.group, GroupElement{-1});
  const DiffTriple t(4, Rational(7, 2), Rational(1, 2));
  const double c = std::max(1.0, orbit_constant(z, t, phi, 2));
  const auto rz = iterated_check(z, t, c, phi, 2);
  CHECK(rz.pass);
  for (const auto& row : rz.rows) CHECK(row.log_rhs_corrected >= row.log_rhs_stated - 1e-12);
}

TEST_CASE("size scaling on a small grid") {
  SamplerSpec s;
  const auto r = size_scaling(make_instance("jaffard:2"), DiffTriple(2, Rational(4, 3), Rational(2, 3)), s, {8, 16}, 30, 4);
  REQUIRE(r.audits.size() == 2);
  CHECK(r.audits[0].sampler.size == 8);
  CHECK(r.audits[1].sampler.size == 16);
  REQUIRE(r.successive_ratios.size() == 1);
  CHECK(r.successive_ratios[0] == doctest::Approx(r.audits[1].c_hat / r.audits[0].c_hat));
}

TEST_CASE("rapid decay on small spheres") {
  const auto r = rd_ratio_experiment(3, 2, 2, 3, 8);
  CHECK(r.pass);
  for (const auto& row : r.rows) {
    CHECK(row.rep_norm <= row.bound + 1e-9);
    // ||f||_2 <= ||lambda(f)||
    CHECK(row.rep_norm >= row.l2 - 1e-9);
  }
}
