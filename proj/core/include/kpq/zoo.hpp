#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/element.hpp"
#include "kpq/rational.hpp"
#include "kpq/weight.hpp"

namespace kpq {

/// Parameters of ||a^k||_A <= C ||a||_A^p ||a||_B^q with p + q = k exactly.
struct DiffTriple {
  int k = 2;
  Rational p{1};
  Rational q{1};
  std::optional<double> c_estimate;

  DiffTriple() = default;
  DiffTriple(int k, Rational p, Rational q, std::optional<double> c = std::nullopt);

  [[nodiscard]] std::string str() const;
};

nlohmann::json to_json(const DiffTriple& t);
DiffTriple triple_from_json(const nlohmann::json& j);

// ---- matrix families on the index window {0, ..., n-1} ----------------------

/// max of the sup over rows and over columns of the l^p norm of
/// |a(i,j)| (1+|i-j|)^alpha. p = inf gives the Jaffard norm.
[[nodiscard]] double groschur_norm(const ComplexMatrix& a, double p, double alpha);

/// l^p norm over diagonals k of (1+|k|)^alpha max_{i-j=k} |a(i,j)|.
[[nodiscard]] double bgs_norm(const ComplexMatrix& a, double p, double alpha);

/// l^p norm over k in {-(n-1), ..., n-1} of sup_{|i-j| >= |k|} |a(i,j)| (1+|i-j|)^alpha.
[[nodiscard]] double beurling_norm(const ComplexMatrix& a, double p, double alpha);

struct ShinSun {
  Rational theta;
  DiffTriple triple;
};

/// theta = (alpha + 1/p - 1)/(alpha + 1/p - 1/2) and the triple (2, 2-theta, theta).
/// p may be +inf. Computed exactly on the rational approximations of p and alpha.
ShinSun shin_sun_exponent(double p, double alpha);

/// (4, (4p+3)/(p+1), 1/(p+1)).
DiffTriple fell_triple(Rational p);

/// Numerical summability test of sum nu(x)^{-p} over G via dyadic shell sums
/// of the sphere counts; a final shell ratio above 0.9 counts as divergent.
struct SummabilityReport {
  bool convergent = false;
  std::vector<double> shell_sums;
  int radius = 0;
};
SummabilityReport inverse_weight_summability(const GroupModel& g, const Weight& nu, double p);

/// fell_triple with the summability precondition enforced (throws domain).
DiffTriple fell_triple_checked(const GroupModel& g, const Weight& nu, Rational p);

/// sup |f| + sup |f'|.
[[nodiscard]] double deriv_domain_norm(const TrigPolynomial& f);

/// ||f||_2 + ||L_f|| on l^2(K), counting measure, K finite.
[[nodiscard]] double hilbert_algebra_norm(const WeightedSection& f);

/// Operator norm of f in the (reduced) group C*-algebra, exact for finite
/// and abelian lattice models; for the remaining models a compressed
/// regular-representation lower bound at radius supp + `extra_radius`.
[[nodiscard]] double group_cstar_norm(const WeightedSection& f, int extra_radius = 4);

/// Spectral radius in the group C*-algebra when an exact evaluator exists.
[[nodiscard]] std::optional<double> group_cstar_radius(const WeightedSection& f);

// ---- instances --------------------------------------------------------------

struct AlgebraInstance {
  std::string name;
  Carrier carrier = Carrier::matrix;
  std::function<double(const Element&)> a_norm;
  std::function<double(const Element&)> b_norm;
  /// Spectral radius in B when exactly computable for the element.
  std::function<std::optional<double>(const Element&)> b_radius;
  std::optional<DiffTriple> declared;
  /// Constant C forced by an explicit inequality (1 for normable ideals, 2
  /// for C^1(T)); absent when only existence is known.
  std::optional<double> forced_constant;
  double involution_constant = 1.0;
  GroupPtr group;
  std::optional<Weight> weight;
  /// Window notes, normalization conventions, caveats on declared triples.
  nlohmann::json metadata = nlohmann::json::object();

  /// Throws dimension_mismatch when x is not in this instance's carrier.
  void check(const Element& x) const;
};

/// Builds an instance from a registry name, e.g. "schatten:2", "jaffard:2",
/// "groschur:1:1", "l1w:Z:poly2", "l2w:F2:poly3", "c1-torus",
/// "hilbert:cyclic:5", "cstar".
AlgebraInstance make_instance(const std::string& name);

struct RegistryEntry {
  std::string pattern;
  std::string description;
};
const std::vector<RegistryEntry>& registry_entries();

}  // namespace kpq
