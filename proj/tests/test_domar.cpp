#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "kpq/domar.hpp"
#include "kpq/error.hpp"
#include "kpq/profile.hpp"

using namespace kpq;

namespace {

constexpr double pi = std::numbers::pi;

/// Composite Simpson on [-L, L].
template <class F>
double simpson(F&& g, double L, int n) {
  const double h = 2 * L / n;
  double s = g(-L) + g(L);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(-L + i * h);
  return s * h / 3;
}

ComplexMatrix oracle(const FourierProfile& f, const ComplexMatrix& x) {
  return apply_spectral(hermitian_eig(x), [&](double l) { return f.f(l); });
}

}  // namespace

TEST_CASE("domar norms") {
  // box: int_{-2}^{2} e^{|t|^0.5} dt has a closed form
  const double closed = 2 * 2 * (std::exp(std::sqrt(2.0)) * (std::sqrt(2.0) - 1) + 1);
  CHECK(domar_norm(FourierProfile::box(2.0), 0.5) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(domar_norm(FourierProfile::box(1.0), 1e-9) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-6));
  const auto g = FourierProfile::gaussian(1.5);
  // t = u^2 removes the cusp at the origin
  const double sim = 2 * simpson([](double u) { return u < 0 ? 0.0 : 2 * u * std::exp(-std::pow(u, 4) / 2.25 + u); }, 5.0, 40000);
  CHECK(domar_norm(g, 0.5) == doctest::Approx(sim).epsilon(1e-9));
  CHECK(domar_norm(FourierProfile(), 0.5) == 0.0);
  CHECK_THROWS_AS(domar_norm(g, 1.5), Error);
}

TEST_CASE("profile closed forms against quadrature") {
  const auto g = FourierProfile::gaussian(2.0);
  const auto h = FourierProfile::hat(3.0);
  for (double x : {0.0, 0.4, -1.7, 3.2}) {
    CAPTURE(x);
    const double fg = simpson([&](double t) { return std::exp(-t * t / 4.0) * std::cos(t * x); }, 20.0, 20000) / (2 * pi);
    CHECK(std::abs(g.f(x) - fg) < 1e-12);
    const double fh = simpson([&](double t) { return std::max(0.0, 1 - std::abs(t) / 3.0) * std::cos(t * x); }, 3.0, 30000) / (2 * pi);
    CHECK(std::abs(h.f(x) - fh) < 1e-10);
  }
  CHECK(std::abs(g.f(0.0) - 1.0 / std::sqrt(pi)) < 1e-15);
}

TEST_CASE("products are pointwise products of f") {
  const auto g1 = FourierProfile::gaussian(1.0);
  const auto g2 = FourierProfile::gaussian(2.0, 0.5);
  const auto b = FourierProfile::box(1.5);
  const auto h = FourierProfile::hat(2.0);
  for (const auto& [f, g] : {std::pair{g1, g2}, std::pair{g1, b}, std::pair{h, b}, std::pair{h, h}}) {
    const auto fg = FourierProfile::product(f, g);
    for (double x : {0.0, 0.3, -1.1, 2.5}) {
      CAPTURE(x);
      CHECK(std::abs(fg.f(x) - f.f(x) * g.f(x)) < 1e-10);
    }
  }
}

TEST_CASE("tail functional") {
  const auto g = FourierProfile::gaussian(1.0);
  double prev = INFINITY;
  for (double T : {1.0, 2.0, 4.0, 8.0}) {
    const double t = g.tail(T, 1.0);
    CHECK(t < prev);
    prev = t;
  }
  // direct integral for the gaussian
  const double direct = 2 * simpson([](double t) { return std::exp(-(t + 7) * (t + 7) + t + 7); }, 5.0, 40000);
  CHECK(g.tail(2.0, 1.0) >= direct * (1 - 1e-9));
  CHECK(g.tail(2.0, 1.0) <= direct * (1 + 1e-6));
  CHECK(FourierProfile::box(1.0).tail(1.0, 5.0) == 0.0);
  CHECK_THROWS_AS(FourierProfile::tabulated({-1, 0, 1}, {0.5, 1, 0.5}, std::nullopt), Error);
  const auto tab = FourierProfile::tabulated({-1, 0, 1}, {0.5, 1, 0.5}, TailSpec{0.5, 2.0});
  CHECK(std::isinf(tab.tail(1.0, 3.0)));
  CHECK(std::isfinite(tab.tail(1.0, 1.0)));
}

TEST_CASE("profile json round trip") {
  const auto p = FourierProfile::product(FourierProfile::gaussian(1.0), FourierProfile::box(2.0));
  const auto q = FourierProfile::from_json(p.to_json());
  for (double x : {0.0, 0.7}) CHECK(std::abs(p.f(x) - q.f(x)) < 1e-14);
  CHECK_THROWS_AS(FourierProfile::from_json(nlohmann::json{{"kind", "gaussian"}, {"sigma", 1}, {"extra", 1}}), Error);
}

TEST_CASE("functional calculus on matrices") {
  const auto inst = make_instance("cstar");
  const auto g = FourierProfile::gaussian(1.0);
  const auto zero = func_calc(g, ComplexMatrix(3), inst, 1e-9);
  const auto& m0 = std::get<ComplexMatrix>(zero.value);
  CHECK(std::abs(m0(1, 1) - 1.0 / (2 * std::sqrt(pi))) < 1e-9);
  CHECK(std::abs(m0(0, 1)) < 1e-12);
  CHECK(zero.certified);

  const std::vector<double> d{-1.0, 0.0, 2.5};
  const auto diag = ComplexMatrix::diagonal(std::span<const double>(d));
  const auto h = FourierProfile::hat(2.0);
  const auto r = func_calc(h, diag, inst, 1e-8);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(std::get<ComplexMatrix>(r.value)(i, i) - h.f(d[i])) < 1e-8);

  const ComplexMatrix sx{{0, 1}, {1, 0}};
  const auto rs = func_calc(g, sx, inst, 1e-9);
  const double even = (g.f(1.0) + g.f(-1.0)).real() / 2;
  const double odd = (g.f(1.0) - g.f(-1.0)).real() / 2;
  CHECK(std::abs(std::get<ComplexMatrix>(rs.value)(0, 0) - even) < 1e-9);
  CHECK(std::abs(std::get<ComplexMatrix>(rs.value)(0, 1) - odd) < 1e-9);

  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = kpq::testing::random_hermitian(2 + 3 * trial, rng);
    for (const auto& f : {g, h}) {
      const auto res = func_calc(f, x, inst, 1e-7);
      CHECK(operator_norm(std::get<ComplexMatrix>(res.value) - oracle(f, x)) <= 1e-7 + 1e-9);
      REQUIRE(res.commutator);
      CHECK(*res.commutator < 1e-6);
      CHECK(spectral_mapping_check(f, x, 1e-8) <= 1e-6);
    }
    CHECK(homomorphism_check(g, h, x, 1e-8) <= 1e-6);
  }
  CHECK_THROWS_AS(func_calc(g, ComplexMatrix{{0, 1}, {0, 0}}, inst, 1e-6), Error);
}

TEST_CASE("functional calculus with Richardson and on sections") {
  const auto inst = make_instance("cstar");
  std::mt19937_64 rng(92);
  const auto x = kpq::testing::random_hermitian(4, rng);
  const auto numeric = FourierProfile::product(FourierProfile::hat(1.0), FourierProfile::hat(1.5));
  FuncCalcOptions o;
  o.richardson = true;
  const auto r = func_calc(numeric, x, inst, 1e-7, o);
  CHECK(operator_norm(std::get<ComplexMatrix>(r.value) - oracle(numeric, x)) < 1e-6);
  REQUIRE(r.richardson_delta);

  const auto z = make_instance("l1w:Z:poly2");
  const auto phi = WeightedSection::delta(z.group, GroupElement{1}) + WeightedSection::delta(z.group, GroupElement{-1});
  const auto g = FourierProfile::gaussian(1.0);
  const auto fs = std::get<WeightedSection>(func_calc(g, phi, z, 1e-9).value);
  // f(2 cos th) has Fourier coefficients (1/2pi) int f(2 cos th) e^{-i n th} dth
  for (int n = 0; n <= 3; ++n) {
    const double c = simpson([&](double th) { return (g.f(2 * std::cos(th)) * std::cos(n * th)).real(); }, pi, 4000) / (2 * pi);
    CHECK(std::abs(fs.at(GroupElement{n}) - c) < 1e-9);
  }
}

TEST_CASE("approximate identity") {
  const auto inst = make_instance("jaffard:2");
  const auto f = FourierProfile::unit_at_one(4.0);
  CHECK(std::abs(f.f(0.0)) < 1e-12);
  CHECK(std::abs(f.f(1.0) - 1.0) < 1e-12);
  ComplexMatrix a(16);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) a(i, j) = 1.0 / (1.0 + static_cast<double>(i + j));
  const auto rep = approx_identity_experiment(inst, f, a, {2, 4, 8, 16});
  CHECK(rep.support_radius == 5);
  CHECK(rep.pass);
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i) {
    CHECK(rep.deviations[i] <= 1e-6);
    if (rep.n_grid[i] >= 5) CHECK(rep.residuals[i] <= 1e-6);
  }
  const auto zero = approx_identity_experiment(inst, f, ComplexMatrix(16), {4, 8});
  for (double v : zero.residuals) CHECK(v == 0.0);
  CHECK_THROWS_AS(approx_identity_experiment(inst, FourierProfile::gaussian(1.0), a, {4}), Error);
}
