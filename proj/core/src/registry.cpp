#include <cmath>
#include <limits>
#include <sstream>

#include "kpq/error.hpp"
#include "kpq/zoo.hpp"

namespace kpq {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return std::numeric_limits<double>::infinity();
  return Rational::parse(text).value();
}

const ComplexMatrix& as_matrix(const Element& x) { return std::get<ComplexMatrix>(x); }
const WeightedSection& as_section(const Element& x) { return std::get<WeightedSection>(x); }

/// rho = ||a|| for normal matrices; otherwise no exact evaluator here.
std::optional<double> normal_radius(const Element& x) {
  const auto& a = as_matrix(x);
  const double n = operator_norm(a);
  if (normality_defect(a) <= 1e-10 * (1.0 + n * n)) return n;
  return std::nullopt;
}

AlgebraInstance matrix_instance(std::string name, std::function<double(const ComplexMatrix&)> norm) {
  AlgebraInstance inst;
  inst.name = std::move(name);
  inst.carrier = Carrier::matrix;
  inst.a_norm = [norm = std::move(norm)](const Element& x) { return norm(as_matrix(x)); };
  inst.b_norm = [](const Element& x) { return operator_norm(as_matrix(x)); };
  inst.b_radius = normal_radius;
  inst.metadata["window"] = "index window {0..n-1} of Z, n = matrix dimension";
  return inst;
}

AlgebraInstance decay_family(const std::string& name, const std::string& family, double p, double alpha) {
  std::function<double(const ComplexMatrix&)> norm;
  if (family == "groschur" || family == "jaffard") {
    norm = [p, alpha](const ComplexMatrix& a) { return groschur_norm(a, p, alpha); };
  } else if (family == "bgs") {
    norm = [p, alpha](const ComplexMatrix& a) { return bgs_norm(a, p, alpha); };
  } else {
    norm = [p, alpha](const ComplexMatrix& a) { return beurling_norm(a, p, alpha); };
  }
  auto inst = matrix_instance(name, std::move(norm));
  inst.metadata["p"] = std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
  inst.metadata["alpha"] = alpha;
  if (alpha > 1.0 - (std::isinf(p) ? 0.0 : 1.0 / p)) {
    const auto ss = shin_sun_exponent(p, alpha);
    inst.declared = ss.triple;
    inst.metadata["theta"] = ss.theta.str();
  } else {
    inst.metadata["note"] = "alpha <= 1 - 1/p: no differential triple is asserted";
  }
  return inst;
}

AlgebraInstance weighted_group(const std::string& name, int lp, const std::string& group_name,
                               const std::string& weight_name) {
  auto g = GroupModel::from_name(group_name);
  const Weight nu = Weight::from_name(weight_name);
  AlgebraInstance inst;
  inst.name = name;
  inst.carrier = Carrier::section;
  inst.group = g;
  inst.weight = nu;
  const double pp = lp;
  inst.a_norm = [nu, pp](const Element& x) { return weighted_lp_norm(as_section(x), nu, pp); };
  inst.b_norm = [](const Element& x) { return group_cstar_norm(as_section(x)); };
  inst.b_radius = [](const Element& x) { return group_cstar_radius(as_section(x)); };
  inst.metadata["group"] = g->name();
  inst.metadata["weight"] = nu.name();
  const bool exact_b = g->is_finite() || (g->family() == GroupFamily::lattice && g->parameter() <= 2);
  inst.metadata["b_norm"] =
      exact_b ? "exact (Fourier sup)" : "compressed regular representation at radius supp+4 (lower bound)";
  const bool subexp_growth = g->family() != GroupFamily::free || g->parameter() == 1;

  if (lp == 1 && nu.kind() == Weight::Kind::polynomial) {
    // least integer p with p * s > growth degree; verified numerically.
    const int degree = g->family() == GroupFamily::lattice ? g->parameter()
                       : g->family() == GroupFamily::heisenberg ? 4
                                                                 : 0;
    if (g->family() != GroupFamily::free && nu.exponent() > 0.0) {
      const auto p = Rational(static_cast<std::int64_t>(std::floor(degree / nu.exponent())) + 1);
      try {
        inst.declared = fell_triple_checked(*g, nu, p);
        inst.metadata["fell_p"] = p.str();
      } catch (const Error&) {
        inst.metadata["note"] = "nu^-p not summable for the tried p; no triple asserted";
      }
    }
  } else if (nu.kind() == Weight::Kind::subexponential && subexp_growth) {
    // Only existence of theta in (0,1) is known; 1/2 is a working assumption.
    inst.declared = DiffTriple(2, Rational(3, 2), Rational(1, 2));
    inst.metadata["theta"] = "1/2 (assumed; only existence is known)";
  } else if (lp == 2 && nu.kind() == Weight::Kind::polynomial) {
    inst.declared = DiffTriple(2, Rational(1), Rational(1));
    inst.metadata["note"] = "(2,1,1) holds for s large enough; s is a user parameter and is not certified";
  }
  return inst;
}

}  // namespace

AlgebraInstance make_instance(const std::string& name) {
  const auto parts = split(name, ':');
  if (parts.empty()) throw Error(ErrorKind::config, "empty instance name");
  const std::string& head = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw Error(ErrorKind::config, "instance '" + name + "' expects " + std::to_string(n - 1) + " parameter(s)");
  };
  try {
    if (head == "cstar") {
      need(1);
      auto inst = matrix_instance(name, [](const ComplexMatrix& a) { return operator_norm(a); });
      inst.declared = DiffTriple(2, Rational(1), Rational(1));
      inst.forced_constant = 1.0;
      return inst;
    }
    if (head == "schatten") {
      need(2);
      const double p = parse_real(parts[1]);
      if (!(p >= 1.0)) throw Error(ErrorKind::config, "schatten: p must be >= 1");
      auto inst = matrix_instance(name, [p](const ComplexMatrix& a) { return schatten_norm(a, p); });
      inst.declared = DiffTriple(2, Rational(1), Rational(1));
      inst.forced_constant = 1.0;
      inst.metadata["p"] = std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
      return inst;
    }
    if (head == "jaffard") {
      need(2);
      return decay_family(name, "jaffard", std::numeric_limits<double>::infinity(), parse_real(parts[1]));
    }
    if (head == "groschur" || head == "bgs" || head == "beurling") {
      need(3);
      const double p = parse_real(parts[1]);
      if (!(p >= 1.0)) throw Error(ErrorKind::config, head + ": p must be >= 1");
      const double alpha = parse_real(parts[2]);
      if (!(alpha >= 0.0) || std::isinf(alpha)) throw Error(ErrorKind::config, head + ": alpha must be finite and >= 0");
      return decay_family(name, head, p, alpha);
    }
    if (head == "l1w" || head == "l2w") {
      need(3);
      return weighted_group(name, head == "l1w" ? 1 : 2, parts[1], parts[2]);
    }
    if (head == "c1-torus") {
      need(1);
      AlgebraInstance inst;
      inst.name = name;
      inst.carrier = Carrier::trig;
      inst.a_norm = [](const Element& x) { return deriv_domain_norm(std::get<TrigPolynomial>(x)); };
      inst.b_norm = [](const Element& x) { return sup_norm(std::get<TrigPolynomial>(x)); };
      inst.b_radius = [](const Element& x) -> std::optional<double> { return sup_norm(std::get<TrigPolynomial>(x)); };
      inst.declared = DiffTriple(2, Rational(1), Rational(1));
      inst.forced_constant = 2.0;
      inst.metadata["derivation"] = "d/dtheta on C(T)";
      return inst;
    }
    if (head == "hilbert") {
      need(3);
      if (parts[1] != "cyclic") throw Error(ErrorKind::config, "hilbert: only the cyclic family is available");
      const auto n = Rational::parse(parts[2]);
      if (n.den() != 1 || n.num() < 1) throw Error(ErrorKind::config, "hilbert: order must be a positive integer");
      AlgebraInstance inst;
      inst.name = name;
      inst.carrier = Carrier::section;
      inst.group = GroupModel::cyclic(static_cast<int>(n.num()));
      inst.a_norm = [](const Element& x) { return hilbert_algebra_norm(as_section(x)); };
      inst.b_norm = [](const Element& x) { return group_cstar_norm(as_section(x)); };
      inst.b_radius = [](const Element& x) { return group_cstar_radius(as_section(x)); };
      inst.declared = DiffTriple(2, Rational(1), Rational(1));
      inst.forced_constant = 1.0;
      inst.metadata["measure"] = "counting measure on Z/n (delta_e has l2 norm 1)";
      return inst;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, "instance '" + name + "': " + e.what());
  }
  throw Error(ErrorKind::config, "unknown instance '" + name + "'");
}

const std::vector<RegistryEntry>& registry_entries() {
  static const std::vector<RegistryEntry> entries{
      {"cstar", "matrices with the operator norm (A = B)"},
      {"schatten:<p>", "Schatten p-class, p >= 1, inside B(l^2)"},
      {"jaffard:<alpha>", "Jaffard algebra sup |a(i,j)| (1+|i-j|)^alpha"},
      {"groschur:<p>:<alpha>", "Groechenig-Schur row/column l^p norm"},
      {"bgs:<p>:<alpha>", "Baskakov-Gohberg-Sjoestrand diagonal l^p norm"},
      {"beurling:<p>:<alpha>", "Beurling tail-sup l^p norm"},
      {"l1w:<group>:<weight>", "weighted l^1 group algebra in C*(G); group Z|Z2|F2|H3|C<n>, weight one|poly<s>|subexp<a>[x<D>]"},
      {"l2w:<group>:<weight>", "weighted l^2 group algebra in C*_r(G)"},
      {"c1-torus", "C^1(T) trig polynomials, ||f||_inf + ||f'||_inf"},
      {"hilbert:cyclic:<n>", "l^2(Z/n) with ||f||_2 + ||L_f||"},
  };
  return entries;
}

}  // namespace kpq
