#include "kpq/weight.hpp"

#include <cmath>
#include <sstream>

#include "kpq/error.hpp"

namespace kpq {

Weight Weight::polynomial(double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::domain, "polynomial weight: exponent must be >= 0");
  return Weight(Kind::polynomial, s, 1.0);
}

Weight Weight::subexponential(double alpha0, double scale) {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) {
    throw Error(ErrorKind::domain, "subexponential weight: alpha0 must lie in (0,1)");
  }
  if (!(scale >= 1.0)) throw Error(ErrorKind::domain, "subexponential weight: D must be >= 1");
  return Weight(Kind::subexponential, alpha0, scale);
}

Weight Weight::from_name(const std::string& name) {
  auto number = [&](const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorKind::parse, "weight: bad number in '" + name + "'");
    return v;
  };
  if (name == "one" || name == "1") return constant();
  if (name.rfind("poly", 0) == 0) return polynomial(number(name.substr(4)));
  if (name.rfind("subexp", 0) == 0) {
    const std::string rest = name.substr(6);
    const auto x = rest.find('x');
    if (x == std::string::npos) return subexponential(number(rest));
    return subexponential(number(rest.substr(0, x)), number(rest.substr(x + 1)));
  }
  throw Error(ErrorKind::parse, "unknown weight '" + name + "'");
}

std::string Weight::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      return "one";
    case Kind::polynomial:
      os << "poly" << exponent_;
      return os.str();
    case Kind::subexponential:
      os << "subexp" << exponent_;
      if (scale_ != 1.0) os << 'x' << scale_;
      return os.str();
  }
  return "?";
}

double Weight::at_length(double length) const {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::polynomial:
      return std::pow(1.0 + length, exponent_);
    case Kind::subexponential:
      return scale_ * std::exp(std::pow(length, exponent_));
  }
  return 1.0;
}

double Weight::polynomial_constant() const {
  if (kind_ == Kind::subexponential) {
    throw Error(ErrorKind::domain, "subexponential weights are not polynomial");
  }
  return std::pow(2.0, exponent_);
}

double weighted_lp_norm(const WeightedSection& f, const Weight& nu, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, "weighted_lp_norm: p must be >= 1");
  if (f.is_zero()) return 0.0;
  const GroupModel& g = *f.group();
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& t : f.terms()) m = std::max(m, nu(g, t.element) * std::abs(t.value));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& t : f.terms()) s += nu(g, t.element) * std::abs(t.value);
    return s;
  }
  double top = 0.0;
  std::vector<double> w;
  w.reserve(f.size());
  for (const auto& t : f.terms()) {
    w.push_back(nu(g, t.element) * std::abs(t.value));
    top = std::max(top, w.back());
  }
  double s = 0.0;
  for (double x : w) s += std::pow(x / top, p);
  return top * std::pow(s, 1.0 / p);
}

}  // namespace kpq
