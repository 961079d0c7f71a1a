#include "kpq/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kpq/error.hpp"

namespace kpq {

DiffTriple::DiffTriple(int k_, Rational p_, Rational q_, std::optional<double> c)
    : k(k_), p(p_), q(q_), c_estimate(c) {
  if (k < 2) throw Error(ErrorKind::domain, "triple: k must be >= 2");
  if (p <= Rational(0) || q <= Rational(0)) throw Error(ErrorKind::domain, "triple: p and q must be positive");
  if (p + q != Rational(k))
    throw Error(ErrorKind::domain, "triple: p + q = " + (p + q).str() + " differs from k = " + std::to_string(k));
}

std::string DiffTriple::str() const { return "(" + std::to_string(k) + ", " + p.str() + ", " + q.str() + ")"; }

nlohmann::json to_json(const DiffTriple& t) {
  nlohmann::json j{{"k", t.k}, {"p", t.p.str()}, {"q", t.q.str()}};
  if (t.c_estimate) j["c_estimate"] = *t.c_estimate;
  return j;
}

DiffTriple triple_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::config, "triple must be an object {k, p, q}");
  for (const auto& [key, v] : j.items()) {
    if (key != "k" && key != "p" && key != "q" && key != "c_estimate")
      throw Error(ErrorKind::config, "unknown key '" + key + "' in triple");
  }
  auto rat = [&](const char* key) {
    const auto& v = j.at(key);
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return Rational::approximate(v.get<double>());
    throw Error(ErrorKind::config, std::string("triple field '") + key + "' must be a number or fraction string");
  };
  if (!j.contains("k") || !j.contains("p") || !j.contains("q"))
    throw Error(ErrorKind::config, "triple needs k, p and q");
  std::optional<double> c;
  if (j.contains("c_estimate")) c = j.at("c_estimate").get<double>();
  return DiffTriple(j.at("k").get<int>(), rat("p"), rat("q"), c);
}

namespace {

void check_p(double p, const char* who) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, std::string(who) + ": p must be >= 1");
}

double poly_weight(std::size_t d, double alpha) {
  return alpha == 0.0 ? 1.0 : std::pow(1.0 + static_cast<double>(d), alpha);
}

/// Running l^p accumulator; p = inf keeps the max.
class LpSum {
 public:
  explicit LpSum(double p) : p_(p) {}
  void add(double v) {
    if (std::isinf(p_)) {
      acc_ = std::max(acc_, v);
    } else if (p_ == 1.0) {
      acc_ += v;
    } else if (v > 0.0) {
      acc_ += std::pow(v, p_);
    }
  }
  [[nodiscard]] double value() const {
    if (std::isinf(p_) || p_ == 1.0) return acc_;
    return std::pow(acc_, 1.0 / p_);
  }

 private:
  double p_;
  double acc_ = 0.0;
};

std::size_t absdiff(std::size_t i, std::size_t j) { return i > j ? i - j : j - i; }

}  // namespace

double groschur_norm(const ComplexMatrix& a, double p, double alpha) {
  check_p(p, "groschur_norm");
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    LpSum row(p), col(p);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = poly_weight(absdiff(i, j), alpha);
      row.add(std::abs(a(i, j)) * w);
      col.add(std::abs(a(j, i)) * w);
    }
    best = std::max({best, row.value(), col.value()});
  }
  return best;
}

namespace {

/// diag[k + n - 1] = max_{i-j=k} |a(i,j)| for k in -(n-1)..(n-1).
std::vector<double> diagonal_sups(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> diag(n == 0 ? 0 : 2 * n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = i + (n - 1) - j;
      diag[idx] = std::max(diag[idx], std::abs(a(i, j)));
    }
  return diag;
}

}  // namespace

double bgs_norm(const ComplexMatrix& a, double p, double alpha) {
  check_p(p, "bgs_norm");
  const std::size_t n = a.dim();
  const auto diag = diagonal_sups(a);
  LpSum sum(p);
  for (std::size_t idx = 0; idx < diag.size(); ++idx) sum.add(diag[idx] * poly_weight(absdiff(idx, n - 1), alpha));
  return sum.value();
}

double beurling_norm(const ComplexMatrix& a, double p, double alpha) {
  check_p(p, "beurling_norm");
  const std::size_t n = a.dim();
  if (n == 0) return 0.0;
  const auto diag = diagonal_sups(a);
  // tail[d] = sup over |i-j| >= d of the weighted entries.
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t d = n; d-- > 0;) {
    const double w = poly_weight(d, alpha);
    const double here = std::max(diag[n - 1 + d], diag[n - 1 - d]) * w;
    tail[d] = std::max(tail[d + 1], here);
  }
  LpSum sum(p);
  sum.add(tail[0]);
  for (std::size_t d = 1; d < n; ++d) {
    sum.add(tail[d]);
    sum.add(tail[d]);
  }
  return sum.value();
}

ShinSun shin_sun_exponent(double p, double alpha) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, "shin_sun_exponent: p must be in [1, inf]");
  const Rational inv_p = std::isinf(p) ? Rational(0) : Rational(1) / Rational::approximate(p);
  const Rational a = Rational::approximate(alpha);
  const Rational num = a + inv_p - Rational(1);
  if (num <= Rational(0))
    throw Error(ErrorKind::domain, "shin_sun_exponent: requires alpha > 1 - 1/p (alpha = " + a.str() +
                                       ", 1 - 1/p = " + (Rational(1) - inv_p).str() + ")");
  const Rational theta = num / (a + inv_p - Rational(1, 2));
  return {theta, DiffTriple(2, Rational(2) - theta, theta)};
}

DiffTriple fell_triple(Rational p) {
  if (p <= Rational(0)) throw Error(ErrorKind::domain, "fell_triple: p must be positive");
  const Rational d = p + Rational(1);
  return DiffTriple(4, (Rational(4) * p + Rational(3)) / d, Rational(1) / d);
}

SummabilityReport inverse_weight_summability(const GroupModel& g, const Weight& nu, double p) {
  constexpr std::size_t kCap = 300'000;
  constexpr int kMaxRadius = 512;
  SummabilityReport rep;
  if (g.is_finite()) {
    rep.convergent = true;
    return rep;
  }
  // Sphere counts by breadth-first layers, stopped at the cap or radius.
  std::vector<double> counts;
  {
    std::vector<GroupElement> layer{g.identity()};
    std::unordered_map<GroupElement, int, GroupElementHash> seen{{g.identity(), 0}};
    counts.push_back(1.0);
    for (int r = 1; r <= kMaxRadius; ++r) {
      std::vector<GroupElement> next;
      for (const auto& x : layer)
        for (const auto& s : g.generators()) {
          auto y = g.multiply(x, s);
          if (seen.emplace(y, r).second) next.push_back(std::move(y));
        }
      if (seen.size() > kCap) break;
      counts.push_back(static_cast<double>(next.size()));
      layer = std::move(next);
    }
  }
  rep.radius = static_cast<int>(counts.size()) - 1;
  for (int lo = 1; 2 * lo - 1 <= rep.radius; lo *= 2) {
    double s = 0.0;
    for (int n = lo; n < 2 * lo; ++n) s += counts[n] * std::pow(nu.at_length(n), -p);
    rep.shell_sums.push_back(s);
  }
  const auto& sh = rep.shell_sums;
  if (sh.size() < 4) {
    rep.convergent = false;
    return rep;
  }
  const double r1 = sh[sh.size() - 1] / sh[sh.size() - 2];
  const double r2 = sh[sh.size() - 2] / sh[sh.size() - 3];
  rep.convergent = r1 <= 0.9 && r2 <= 0.9;
  return rep;
}

DiffTriple fell_triple_checked(const GroupModel& g, const Weight& nu, Rational p) {
  if (nu.kind() != Weight::Kind::polynomial)
    throw Error(ErrorKind::domain, "fell_triple: the weight must be polynomial");
  const auto rep = inverse_weight_summability(g, nu, p.value());
  if (!rep.convergent)
    throw Error(ErrorKind::domain, "fell_triple: sum of nu^-p appears divergent on " + g.name() + " for p = " + p.str());
  return fell_triple(p);
}

double deriv_domain_norm(const TrigPolynomial& f) { return sup_norm(f) + sup_norm(f.derivative()); }

namespace {

/// max_j |sum_r f(r) e^{-2 pi i r j / n}| for a section on Z/n.
double cyclic_fourier_sup(const WeightedSection& f) {
  const int n = f.group()->parameter();
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    Complex s = 0.0;
    for (const auto& t : f.terms()) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((static_cast<std::int64_t>(t.element[0]) * j) % n) / n;
      s += t.value * Complex(std::cos(ang), std::sin(ang));
    }
    best = std::max(best, std::abs(s));
  }
  return best;
}

}  // namespace

double hilbert_algebra_norm(const WeightedSection& f) {
  if (!f.group() || !f.group()->is_finite())
    throw Error(ErrorKind::unsupported, "hilbert_algebra_norm: requires a finite group model");
  if (f.is_zero()) return 0.0;
  return l2_norm(f) + operator_norm(left_convolution_matrix(f));
}

double group_cstar_norm(const WeightedSection& f, int extra_radius) {
  if (f.is_zero()) return 0.0;
  const auto& g = *f.group();
  if (g.family() == GroupFamily::cyclic) return cyclic_fourier_sup(f);
  if (g.family() == GroupFamily::lattice && g.parameter() <= 2) return cstar_norm_abelian(f);
  return regular_rep_norm(f, f.support_radius() + extra_radius);
}

std::optional<double> group_cstar_radius(const WeightedSection& f) {
  if (f.is_zero()) return 0.0;
  const auto& g = *f.group();
  if (g.family() == GroupFamily::cyclic) return cyclic_fourier_sup(f);
  if (g.family() == GroupFamily::lattice && g.parameter() <= 2) return cstar_norm_abelian(f);
  return std::nullopt;
}

void AlgebraInstance::check(const Element& x) const {
  if (carrier_of(x) != carrier)
    throw Error(ErrorKind::dimension_mismatch, name + ": element is a " + carrier_name(carrier_of(x)) +
                                                   ", instance expects a " + carrier_name(carrier));
  if (const auto* s = std::get_if<WeightedSection>(&x)) {
    if (!s->group() || !group || !(*s->group() == *group))
      throw Error(ErrorKind::dimension_mismatch, name + ": section lives on a different group");
  }
}

}  // namespace kpq
