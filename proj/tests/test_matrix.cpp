#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "kpq/error.hpp"
#include "kpq/io.hpp"

using namespace kpq;
using kpq::testing::max_dev;

namespace {

/// det(a - lambda I) by Gaussian elimination with partial pivoting.
Complex char_poly(const ComplexMatrix& a, double lambda) {
  const std::size_t n = a.dim();
  ComplexMatrix m = a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= lambda;
  Complex det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == Complex(0.0)) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Largest singular value by power iteration on a*a.
double power_iteration_norm(const ComplexMatrix& a) {
  const auto g = mat_mul(adjoint(a), a);
  const std::size_t n = a.dim();
  std::vector<Complex> v(n, 1.0), w(n);
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) w[i] += g(i, j) * v[j];
    }
    double norm = 0.0;
    for (const auto& z : w) norm += std::norm(z);
    norm = std::sqrt(norm);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(w[i] - lambda * v[i]));
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    if (residual < 1e-12 * norm && it > 10) break;
    lambda = norm;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("mat_mul identity, nilpotent and triple-loop agreement") {
  std::mt19937_64 rng(1);
  const auto x = kpq::testing::random_matrix(2, rng);
  CHECK(max_dev(mat_mul(ComplexMatrix::identity(2), x), x) == 0.0);
  const ComplexMatrix n{{0, 1}, {0, 0}};
  CHECK(max_abs_entry(mat_mul(n, n)) == 0.0);
  const auto a = kpq::testing::random_matrix(4, rng);
  const auto b = kpq::testing::random_matrix(4, rng);
  CHECK(max_dev(mat_mul(a, b), kpq::testing::naive_mul(a, b)) <= 1e-12);
  const auto big_a = kpq::testing::random_matrix(37, rng);
  const auto big_b = kpq::testing::random_matrix(37, rng);
  CHECK(max_dev(mat_mul(big_a, big_b), kpq::testing::naive_mul(big_a, big_b)) <= 1e-11);
}

TEST_CASE("mat_mul rejects mismatched dimensions") {
  CHECK_THROWS_AS(mat_mul(ComplexMatrix(2), ComplexMatrix(3)), Error);
}

TEST_CASE("adjoint") {
  const ComplexMatrix n{{0, 1}, {0, 0}};
  CHECK(adjoint(n) == ComplexMatrix{{0, 0}, {1, 0}});
  std::mt19937_64 rng(2);
  const auto h = kpq::testing::random_hermitian(3, rng);
  CHECK(max_dev(adjoint(h), h) == 0.0);
  const auto a = kpq::testing::random_matrix(3, rng);
  const auto b = kpq::testing::random_matrix(3, rng);
  CHECK(max_dev(adjoint(mat_mul(a, b)), mat_mul(adjoint(b), adjoint(a))) <= 1e-12);
}

TEST_CASE("hermitian_eig small cases") {
  const std::vector<double> d{3, 1, 2};
  const auto e = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(d)));
  CHECK(e.eigenvalues == std::vector<double>{1, 2, 3});
  const auto s = hermitian_eig(ComplexMatrix{{0, 1}, {1, 0}});
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix{{0, 1}, {0, 0}}), Error);
}

TEST_CASE("hermitian_eig brackets roots of the characteristic polynomial") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = kpq::testing::random_hermitian(8, rng);
    const auto e = hermitian_eig(a);
    for (std::size_t i = 0; i + 1 < e.eigenvalues.size(); ++i) REQUIRE(e.eigenvalues[i + 1] - e.eigenvalues[i] > 1e-5);
    for (double l : e.eigenvalues) {
      const double lo = char_poly(a, l - 1e-7).real();
      const double hi = char_poly(a, l + 1e-7).real();
      CHECK(lo * hi < 0.0);
    }
    // reconstruction and orthonormality
    const auto rec = apply_spectral(e, [](double x) { return Complex(x); });
    CHECK(operator_norm(rec - a) <= 1e-10 * (1.0 + operator_norm(a)));
    const auto vv = mat_mul(adjoint(e.vectors), e.vectors);
    CHECK(operator_norm(vv - ComplexMatrix::identity(8)) <= 1e-10);
  }
}

TEST_CASE("operator_norm against power iteration") {
  CHECK(operator_norm(ComplexMatrix::identity(5)) == doctest::Approx(1.0));
  const std::vector<Complex> d{2.0, Complex(0, -3)};
  CHECK(operator_norm(ComplexMatrix::diagonal(std::span<const Complex>(d))) == doctest::Approx(3.0));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = kpq::testing::random_matrix(6, rng);
    CHECK(operator_norm(a) == doctest::Approx(power_iteration_norm(a)).epsilon(1e-9));
  }
}

TEST_CASE("schatten_norm") {
  CHECK(schatten_norm(ComplexMatrix::identity(2), 2.0) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> d{3, 4};
  CHECK(schatten_norm(ComplexMatrix::diagonal(std::span<const double>(d)), 1.0) == doctest::Approx(7.0));
  std::mt19937_64 rng(5);
  const auto a = kpq::testing::random_matrix(5, rng);
  // eigenvalues of (a*a)^{3/2}
  const auto e = hermitian_eig(mat_mul(adjoint(a), a));
  double s = 0.0;
  for (double l : e.eigenvalues) s += std::pow(std::max(l, 0.0), 1.5);
  CHECK(schatten_norm(a, 3.0) == doctest::Approx(std::cbrt(s)).epsilon(1e-12));
  // p = 2 equals the Frobenius norm
  CHECK(schatten_norm(a, 2.0) == doctest::Approx(frobenius_norm(a)).epsilon(1e-12));
}

TEST_CASE("mat_exp_hermitian against a Taylor series") {
  for (double t : {0.0, 1.5, -3.0}) CHECK(max_dev(mat_exp_hermitian(ComplexMatrix(3), t), ComplexMatrix::identity(3)) == 0.0);
  const ComplexMatrix pi{{std::numbers::pi}};
  CHECK(std::abs(mat_exp_hermitian(pi, 1.0)(0, 0) + 1.0) <= 1e-15);
  std::mt19937_64 rng(6);
  const auto a = kpq::testing::random_hermitian(6, rng);
  const double t = 0.7;
  ComplexMatrix term = ComplexMatrix::identity(6);
  ComplexMatrix sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = mat_mul(term, a);
    term *= Complex(0, t / k);
    sum += term;
  }
  // remainder: (t ||a||)^41 / 41! is negligible for ||a|| < 8
  REQUIRE(operator_norm(a) * t < 8.0);
  CHECK(operator_norm(mat_exp_hermitian(a, t) - sum) <= 1e-12);
}

TEST_CASE("matrix JSON round trip and strictness") {
  std::mt19937_64 rng(7);
  const auto a = kpq::testing::random_matrix(3, rng);
  CHECK(matrix_from_json(to_json(a)) == a);
  auto j = to_json(a);
  j["extra"] = 1;
  CHECK_THROWS_AS(matrix_from_json(j), Error);
}
