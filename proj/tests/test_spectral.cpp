#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "kpq/spectral.hpp"
#include "kpq/error.hpp"

using namespace kpq;

TEST_CASE("gelfand radius of simple matrices") {
  const auto op = make_instance("cstar");
  const ComplexMatrix jordan{{0, 1}, {0, 0}};
  const auto r0 = gelfand_radius(jordan, op, 6);
  CHECK(r0.exact_zero);
  CHECK(r0.extrapolated == 0.0);
  const std::vector<double> d{2, -1};
  const auto diag = ComplexMatrix::diagonal(std::span<const double>(d));
  for (const char* name : {"cstar", "schatten:1", "jaffard:2"}) {
    CAPTURE(name);
    const auto r = gelfand_radius(diag, make_instance(name), 14);
    CHECK(r.extrapolated == doctest::Approx(2.0).epsilon(1e-3));
    for (const auto& s : r.sequence) CHECK(std::isfinite(s.value));
  }
}

TEST_CASE("gelfand radius in a weighted group algebra meets the Fourier sup") {
  const auto inst = make_instance("l1w:Z:poly2");
  const auto z = inst.group;
  const auto phi = WeightedSection::delta(z, GroupElement{1}) + WeightedSection::delta(z, GroupElement{-1});
  const auto r = gelfand_radius(phi, inst, 14);
  REQUIRE(r.oracle);
  CHECK(*r.oracle == doctest::Approx(2.0));
  CHECK(std::abs(r.extrapolated - 2.0) <= 1e-2);
  CHECK(r.extrapolated >= 0.0);
}

TEST_CASE("spectrum_b") {
  const auto s = spectrum_b(ComplexMatrix{{0, 1}, {1, 0}});
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] + 1.0) < 1e-14);
  CHECK(std::abs(s[1] - 1.0) < 1e-14);
  const std::vector<Complex> d{Complex(0, 1), Complex(0, -1)};
  const auto t = spectrum_b(ComplexMatrix::diagonal(std::span<const Complex>(d)));
  CHECK(std::abs(t[0] - Complex(0, -1)) < 1e-14);
  CHECK(std::abs(t[1] - Complex(0, 1)) < 1e-14);
  std::mt19937_64 rng(31);
  const auto h = kpq::testing::random_hermitian(6, rng);
  const auto e = hermitian_eig(h).eigenvalues;
  const auto sb = spectrum_b(h);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(sb[i] - e[i]) < 1e-12);
  CHECK_THROWS_AS(spectrum_b(ComplexMatrix{{0, 1}, {0, 0}}), Error);
  // a normal, non-Hermitian matrix: a unitary rotation
  const double c = std::cos(0.3), sn = std::sin(0.3);
  const auto rot = spectrum_b(ComplexMatrix{{c, -sn}, {sn, c}});
  CHECK(std::abs(rot[0] - std::polar(1.0, -0.3)) < 1e-12);
  CHECK(std::abs(rot[1] - std::polar(1.0, 0.3)) < 1e-12);
}

TEST_CASE("radius equality experiments") {
  RadiusExperimentOptions o;
  o.m_max = 20;
  o.sampler.size = 8;
  o.sampler.ensemble = "gaussian";
  o.tolerance = 1e-6;
  const auto s2 = radius_equality_experiment(make_instance("schatten:2"), 20, 3, o);
  CHECK(s2.pass);
  CHECK(s2.max_gap <= 1e-6);

  RadiusExperimentOptions j;
  j.m_max = 16;
  j.sampler.size = 32;
  j.sampler.ensemble = "banded";
  j.tolerance = 1e-3;
  const auto jf = radius_equality_experiment(make_instance("jaffard:2"), 10, 4, j);
  CHECK(jf.pass);
  CHECK(jf.max_gap <= 1e-3);
}

TEST_CASE("zero element has zero gap") {
  const auto inst = make_instance("l1w:Z:poly2");
  const auto r = gelfand_radius(WeightedSection(inst.group), inst, 10);
  CHECK(r.extrapolated == 0.0);
  REQUIRE(r.gap);
  CHECK(*r.gap == 0.0);
}
