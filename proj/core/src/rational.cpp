#include "kpq/rational.hpp"

#include <cmath>
#include <numeric>

#include "kpq/error.hpp"

namespace kpq {

namespace {

__extension__ using i128 = __int128;

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < -INT64_MAX) throw Error(ErrorKind::overflow, "rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

Rational reduce(i128 num, i128 den) {
  if (den == 0) throw Error(ErrorKind::domain, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(checked(num), checked(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::domain, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw Error(ErrorKind::domain, "cannot represent a non-finite value as a fraction");
  const bool neg = x < 0;
  double r = std::abs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const i128 p2 = static_cast<i128>(ai) * p1 + p0;
    const i128 q2 = static_cast<i128>(ai) * q1 + q0;
    if (q2 > max_den || p2 > INT64_MAX) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<std::int64_t>(p2);
    q1 = static_cast<std::int64_t>(q2);
    const double frac = r - a;
    if (frac < 1e-15 || std::abs(static_cast<double>(p1) / static_cast<double>(q1) - std::abs(x)) <= 1e-15 * std::abs(x))
      break;
    r = 1.0 / frac;
  }
  if (q1 == 0) throw Error(ErrorKind::overflow, "value too large for a fraction");
  return Rational(neg ? -p1 : p1, q1);
}

Rational Rational::parse(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const long long n = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw Error(ErrorKind::parse, "bad fraction '" + text + "'");
      const std::string rest = text.substr(slash + 1);
      const long long d = std::stoll(rest, &used);
      if (used != rest.size()) throw Error(ErrorKind::parse, "bad fraction '" + text + "'");
      return Rational(n, d);
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw Error(ErrorKind::parse, "bad number '" + text + "'");
    return approximate(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::parse, "bad number '" + text + "'");
  }
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return reduce(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return reduce(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return reduce(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return reduce(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 l = static_cast<i128>(a.num_) * b.den_;
  const i128 r = static_cast<i128>(b.num_) * a.den_;
  return l <=> r;
}

}  // namespace kpq
