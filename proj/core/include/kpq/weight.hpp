#pragma once

#include <string>

#include "kpq/section.hpp"

namespace kpq {

/// Length-radial weight nu(x) = phi(l(x)) with l the word length:
///   constant        nu = 1
///   polynomial      nu = (1 + l)^s, s >= 0
///   subexponential  nu = D e^{l^alpha0}, D >= 1, 0 < alpha0 < 1
class Weight {
 public:
  enum class Kind { constant, polynomial, subexponential };

  static Weight constant() { return Weight(Kind::constant, 0.0, 1.0); }
  static Weight polynomial(double s);
  static Weight subexponential(double alpha0, double scale = 1.0);

  /// "one", "poly<s>", "subexp<alpha0>" or "subexp<alpha0>x<D>".
  static Weight from_name(const std::string& name);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double exponent() const noexcept { return exponent_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] std::string name() const;

  [[nodiscard]] double at_length(double length) const;
  [[nodiscard]] double operator()(const GroupModel& g, const GroupElement& x) const {
    return at_length(g.word_length(x));
  }

  /// Constant C of nu(xy) <= C (nu(x) + nu(y)) for polynomial weights (2^s).
  [[nodiscard]] double polynomial_constant() const;

 private:
  Weight(Kind kind, double exponent, double scale) : kind_(kind), exponent_(exponent), scale_(scale) {}

  Kind kind_;
  double exponent_;
  double scale_;
};

/// (sum nu(x)^p |f(x)|^p)^{1/p}.
[[nodiscard]] double weighted_lp_norm(const WeightedSection& f, const Weight& nu, double p);

}  // namespace kpq
