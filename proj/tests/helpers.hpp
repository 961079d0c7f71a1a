#pragma once

#include <complex>
#include <random>

#include "kpq/matrix.hpp"

namespace kpq::testing {

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexMatrix a(n);
  for (auto& z : a.entries()) {
    const double re = d(rng);
    const double im = d(rng);
    z = Complex(re, im);
  }
  return a;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const auto a = random_matrix(n, rng);
  ComplexMatrix h = a + adjoint(a);
  h *= 0.5;
  return h;
}

inline double max_dev(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs_entry(a - b); }

/// Naive triple loop.
inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace kpq::testing
