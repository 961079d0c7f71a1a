#include "kpq/trig.hpp"

#include <algorithm>
#include <cmath>

namespace kpq {

TrigPolynomial::TrigPolynomial(std::map<std::int64_t, Complex> coefficients) : coeffs_(std::move(coefficients)) {
  prune();
}

void TrigPolynomial::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == Complex{}; });
}

TrigPolynomial TrigPolynomial::constant(Complex c) { return TrigPolynomial({{0, c}}); }

TrigPolynomial TrigPolynomial::monomial(std::int64_t n, Complex c) { return TrigPolynomial({{n, c}}); }

Complex TrigPolynomial::coefficient(std::int64_t n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex{} : it->second;
}

std::int64_t TrigPolynomial::degree() const {
  std::int64_t d = 0;
  for (const auto& [n, c] : coeffs_) d = std::max(d, n < 0 ? -n : n);
  return d;
}

Complex TrigPolynomial::operator()(double theta) const {
  Complex s{};
  for (const auto& [n, c] : coeffs_) s += c * std::polar(1.0, static_cast<double>(n) * theta);
  return s;
}

TrigPolynomial TrigPolynomial::derivative() const {
  std::map<std::int64_t, Complex> d;
  for (const auto& [n, c] : coeffs_) d[n] = Complex(0.0, static_cast<double>(n)) * c;
  return TrigPolynomial(std::move(d));
}

TrigPolynomial TrigPolynomial::adjoint() const {
  std::map<std::int64_t, Complex> d;
  for (const auto& [n, c] : coeffs_) d[-n] = std::conj(c);
  return TrigPolynomial(std::move(d));
}

torus::LatticePoly TrigPolynomial::lattice() const {
  torus::LatticePoly p{1, {}};
  p.terms.reserve(coeffs_.size());
  for (const auto& [n, c] : coeffs_) p.terms.push_back({{n, 0}, c});
  return p;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& o) {
  for (const auto& [n, c] : o.coeffs_) coeffs_[n] += c;
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& o) {
  for (const auto& [n, c] : o.coeffs_) coeffs_[n] -= c;
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(Complex s) {
  for (auto& [n, c] : coeffs_) c *= s;
  prune();
  return *this;
}

TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
TrigPolynomial operator*(Complex s, TrigPolynomial a) { return a *= s; }

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  std::map<std::int64_t, Complex> out;
  for (const auto& [n, c] : a.coefficients()) {
    for (const auto& [m, d] : b.coefficients()) out[n + m] += c * d;
  }
  return TrigPolynomial(std::move(out));
}

double sup_norm(const TrigPolynomial& f, std::size_t samples) {
  std::size_t grid = 1;
  while (grid < samples) grid <<= 1;
  return torus::sup_abs(f.lattice(), grid);
}

}  // namespace kpq
