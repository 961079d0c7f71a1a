#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace kpq {

using Complex = std::complex<double>;

/// Dense square complex matrix stored row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix diagonal(std::span<const double> values);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
  [[nodiscard]] std::span<Complex> entries() noexcept { return entries_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

/// Eigen-decomposition of a Hermitian matrix: a = V diag(eigenvalues) V*.
/// Eigenvalues ascending, eigenvectors are the columns of `vectors`.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix vectors;
};

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);

[[nodiscard]] double max_abs_entry(const ComplexMatrix& a);
[[nodiscard]] double frobenius_norm(const ComplexMatrix& a);
[[nodiscard]] bool all_finite(const ComplexMatrix& a);

/// Operator norm of a - a*, bounded cheaply through the Frobenius norm and
/// computed exactly only when the cheap bounds are inconclusive.
[[nodiscard]] bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Cyclic Jacobi eigensolver. Inputs within the hermiticity tolerance are
/// symmetrized as (a + a*)/2 first; anything else throws not_hermitian.
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Largest singular value, i.e. sqrt of the top eigenvalue of a*a.
[[nodiscard]] double operator_norm(const ComplexMatrix& a);

/// Singular values in descending order (square roots of the clamped
/// eigenvalues of a*a).
std::vector<double> singular_values(const ComplexMatrix& a);

/// (sum sigma_i^p)^(1/p); p = +inf gives the operator norm.
[[nodiscard]] double schatten_norm(const ComplexMatrix& a, double p);

/// V g(Lambda) V* for a precomputed Hermitian decomposition.
ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<Complex(double)>& g);

/// exp(i t a) for Hermitian a.
ComplexMatrix mat_exp_hermitian(const ComplexMatrix& a, double t);

/// Operator norm of a*a - a a*; zero iff a is normal.
[[nodiscard]] double normality_defect(const ComplexMatrix& a);

}  // namespace kpq
