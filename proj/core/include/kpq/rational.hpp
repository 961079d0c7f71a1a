#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace kpq {

/// Exact fraction num/den with den > 0 and gcd(num, den) = 1. Arithmetic
/// throws overflow rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Closest fraction with denominator <= max_den (continued fractions).
  /// Exact for decimal-looking inputs such as 0.5 or 1.25.
  static Rational approximate(double x, std::int64_t max_den = 1'000'000);
  /// Parses "3", "-7/2" or a decimal such as "1.5".
  static Rational parse(const std::string& text);

  [[nodiscard]] std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] std::int64_t den() const noexcept { return den_; }
  [[nodiscard]] double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  [[nodiscard]] std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace kpq
