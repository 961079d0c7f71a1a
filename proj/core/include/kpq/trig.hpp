#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "kpq/matrix.hpp"
#include "kpq/torus.hpp"

namespace kpq {

/// Trigonometric polynomial f(theta) = sum_n c_n e^{i n theta} on the circle.
/// Zero coefficients are pruned.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::map<std::int64_t, Complex> coefficients);

  static TrigPolynomial constant(Complex c);
  static TrigPolynomial monomial(std::int64_t n, Complex c = 1.0);

  [[nodiscard]] const std::map<std::int64_t, Complex>& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] Complex coefficient(std::int64_t n) const;
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  [[nodiscard]] std::int64_t degree() const;

  [[nodiscard]] Complex operator()(double theta) const;

  /// f' has coefficients i n c_n.
  [[nodiscard]] TrigPolynomial derivative() const;
  /// Pointwise conjugate: coefficients conj(c_{-n}).
  [[nodiscard]] TrigPolynomial adjoint() const;
  [[nodiscard]] torus::LatticePoly lattice() const;

  TrigPolynomial& operator+=(const TrigPolynomial& o);
  TrigPolynomial& operator-=(const TrigPolynomial& o);
  TrigPolynomial& operator*=(Complex s);

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  void prune();
  std::map<std::int64_t, Complex> coeffs_;
};

TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b);
TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b);
TrigPolynomial operator*(Complex s, TrigPolynomial a);
/// Pointwise product (convolution of coefficients).
TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

/// sup |f| over the circle on a grid of at least `samples` points with
/// degree-aware refinement.
[[nodiscard]] double sup_norm(const TrigPolynomial& f, std::size_t samples = 4096);

}  // namespace kpq
