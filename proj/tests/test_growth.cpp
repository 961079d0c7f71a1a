#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "kpq/error.hpp"
#include "kpq/growth.hpp"
#include "kpq/torus.hpp"

using namespace kpq;

namespace {

WeightedSection phi(const AlgebraInstance& inst) {
  return WeightedSection::delta(inst.group, GroupElement{1}) + WeightedSection::delta(inst.group, GroupElement{-1});
}

/// (1/2pi) int (e^{i t 2cos th} - 1) e^{-i n th} d th by the midpoint rule.
Complex fourier_coefficient(double t, int n) {
  const int m = 4096;
  Complex s = 0.0;
  for (int j = 0; j < m; ++j) {
    const double th = 2 * std::numbers::pi * (j + 0.5) / m;
    s += (std::polar(1.0, 2 * t * std::cos(th)) - 1.0) * std::polar(1.0, -n * th);
  }
  return s / static_cast<double>(m);
}

double max_coeff(const WeightedSection& f) {
  double m = 0.0;
  for (const auto& t : f.terms()) m = std::max(m, std::abs(t.value));
  return m;
}

}  // namespace

TEST_CASE("u_of basic cases") {
  const auto op = make_instance("cstar");
  CHECK(max_abs_entry(std::get<ComplexMatrix>(u_of(ComplexMatrix(2), op, 3.0))) == 0.0);
  const auto u = std::get<ComplexMatrix>(u_of(ComplexMatrix{{std::numbers::pi}}, op, 1.0));
  CHECK(std::abs(u(0, 0) + 2.0) < 1e-15);
  CHECK_THROWS_AS(u_of(ComplexMatrix{{0, 1}, {0, 0}}, op, 1.0), Error);

  const auto inst = make_instance("l1w:Z:subexp0.5");
  const auto f = std::get<WeightedSection>(u_of(phi(inst), inst, 1.0));
  for (int n = -6; n <= 6; ++n) CHECK(std::abs(f.at(GroupElement{n}) - fourier_coefficient(1.0, n)) < 1e-13);
  CHECK(std::get<WeightedSection>(u_of(WeightedSection(inst.group), inst, 2.0)).is_zero());
}

TEST_CASE("Bessel route and torus route agree") {
  const auto inst = make_instance("l1w:Z:poly2");
  const auto z = inst.group;
  const auto x = phi(inst) + WeightedSection::delta(z, GroupElement{0}, 0.3);
  // shifting one coefficient by 1e-300 keeps the value but blocks the Bessel route
  const auto y = x + WeightedSection::delta(z, GroupElement{2}, 1e-300) + WeightedSection::delta(z, GroupElement{-2}, 1e-300);
  for (double t : {0.5, 4.0, -7.5}) {
    const auto a = std::get<WeightedSection>(u_of(x, inst, t));
    const auto b = std::get<WeightedSection>(u_of(y, inst, t));
    CHECK(max_coeff(a - b) < 1e-10);
  }
}

TEST_CASE("cocycle identity") {
  std::mt19937_64 rng(41);
  const auto op = make_instance("cstar");
  const auto h = kpq::testing::random_hermitian(5, rng);
  const auto inst = make_instance("l1w:Z:subexp0.5");
  const Element sec = phi(inst);
  for (auto [s, t] : {std::pair{0.3, 1.1}, std::pair{-2.0, 3.5}}) {
    for (const auto& [x, in] : {std::pair<Element, const AlgebraInstance*>{h, &op}, {sec, &inst}}) {
      const auto us = u_of(x, *in, s);
      const auto ut = u_of(x, *in, t);
      const auto lhs = u_of(x, *in, s + t);
      const auto rhs = add(add(multiply(us, ut), us), ut);
      CHECK(in->a_norm(subtract(lhs, rhs)) <= 1e-8);
    }
  }
}

TEST_CASE("trig carrier exponential") {
  const auto inst = make_instance("c1-torus");
  const auto cosine = TrigPolynomial::monomial(1) + TrigPolynomial::monomial(-1);
  const auto u = std::get<TrigPolynomial>(u_of(cosine, inst, 1.0));
  for (int n = -5; n <= 5; ++n) CHECK(std::abs(u.coefficient(n) - fourier_coefficient(1.0, n)) < 1e-12);
}

TEST_CASE("growth trace and tau bound") {
  CHECK(tau_bound(DiffTriple(2, Rational(1), Rational(1))) == 0.0);
  CHECK(tau_bound(DiffTriple(4, Rational(7, 2), Rational(1, 2))) == doctest::Approx(std::log(3.5) / std::log(4.0)));
  const auto inst = make_instance("l1w:Z:subexp0.5");
  const auto g = growth_trace(phi(inst), inst, *inst.declared, 30.0, 16);
  CHECK(std::is_sorted(g.t_grid.begin(), g.t_grid.end()));
  for (double v : g.norms) CHECK(v >= 0.0);
  CHECK(g.reliable);
  CHECK(g.tau_fit <= 1.0);
  CHECK(growth_prefactor(g, g.tau_bound) > 0.0);
  // the A-norm of u(t phi) against std::cyl_bessel_j
  for (std::size_t i = 0; i < g.t_grid.size(); i += 5) {
    const double t = g.t_grid[i];
    double s = std::abs(std::cyl_bessel_j(0.0, 2 * t) - 1.0);
    for (int n = 1; n < 200; ++n) s += 2 * std::exp(std::sqrt(n)) * std::abs(std::cyl_bessel_j(n, 2 * t));
    CHECK(g.norms[i] == doctest::Approx(s).epsilon(1e-6));
  }
}

TEST_CASE("asymp_check") {
  const auto ones = asymp_check([](int) { return 1.0; }, 2, 1.5, 64);
  CHECK(ones.pass);
  CHECK(ones.max_ratio <= 1.0);
  const auto sub = asymp_check([](int n) { return std::exp(std::pow(n, 0.58)); }, 2, 1.5, 128);
  CHECK_FALSE(sub.violation);
  CHECK(sub.pass);
  // a_n = e^n violates a_{2n} <= a_n^{1.5}
  const auto bad = asymp_check([](int n) { return std::exp(static_cast<double>(n)); }, 2, 1.5, 32);
  REQUIRE(bad.violation);
  CHECK_FALSE(bad.pass);
  CHECK_THROWS_AS(asymp_check([](int) { return 1.0; }, 2, 2.5, 8), Error);
}

TEST_CASE("combinatorial identity by direct binomial sums") {
  CHECK(comb_identity(2) == std::pair<std::uint64_t, std::uint64_t>{2, 2});
  CHECK(comb_identity(3) == std::pair<std::uint64_t, std::uint64_t>{6, 6});
  CHECK(comb_identity(4) == std::pair<std::uint64_t, std::uint64_t>{14, 14});
  for (int k = 2; k <= 60; ++k) {
    const auto [lhs, rhs] = comb_identity(k);
    CHECK(lhs == rhs);
    CHECK(rhs == (std::uint64_t{1} << k) - 2);
  }
  CHECK_THROWS_AS(comb_identity(61), Error);
}

TEST_CASE("d_constant") {
  CHECK(d_constant(2, 1.0, 2.0, 1.0) == doctest::Approx(5.0));
  CHECK(d_constant(2, 1.0, 2.0, 1e-12) == doctest::Approx(4.0));
  CHECK(d_constant(4, 0.5, 3.5, 1.0) == doctest::Approx(std::pow(std::sqrt(2.0) + 15.0, 0.4)));
}

TEST_CASE("polynomial expansion of u(knx)") {
  const auto op = make_instance("cstar");
  CHECK(polynomial_expansion_check(ComplexMatrix(3), op, 2, 1) == 0.0);
  std::mt19937_64 rng(42);
  CHECK(polynomial_expansion_check(kpq::testing::random_hermitian(4, rng), op, 2, 1) <= 1e-10);
  const auto inst = make_instance("l1w:Z:poly2");
  CHECK(polynomial_expansion_check(phi(inst), inst, 4, 2) <= 1e-8);
}

TEST_CASE("orbit sequence satisfies the asymptotic bound") {
  const auto inst = make_instance("l1w:Z:subexp0.5");
  const auto o = orbit_sequence(phi(inst), inst, *inst.declared, 64);
  CHECK(o.gamma == doctest::Approx(1.5));
  CHECK(o.d >= 1.0);
  const auto r = asymp_check([&](int n) { return o.a[static_cast<std::size_t>(n - 1)]; }, 2, o.gamma, 64);
  CHECK(r.pass);
}
