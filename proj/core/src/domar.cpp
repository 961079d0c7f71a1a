#include "kpq/domar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kpq/error.hpp"
#include "kpq/group.hpp"
#include "kpq/spectral.hpp"
#include "kpq/torus.hpp"

namespace kpq {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double kGLx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Bernstein ellipse with rho = 4 around each panel: semi-axes (rho +- 1/rho)/2.
constexpr double kRho = 4.0;
constexpr double kSemiMajor = 0.5 * (kRho + 1.0 / kRho);
constexpr double kSemiMinor = 0.5 * (kRho - 1.0 / kRho);
// (64/15) rho^{-32} / (rho^2 - 1)
const double kGLConstant = 64.0 / 15.0 * std::pow(kRho, -32.0) / (kRho * kRho - 1.0);

/// Cuts [-T, T] at the profile's kinks.
std::vector<double> interval_cuts(const FourierProfile& f, double lo, double hi, bool with_zero) {
  std::vector<double> cuts{lo, hi};
  if (with_zero && lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  for (double b : f.breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

struct Rule {
  std::vector<double> t;
  std::vector<Complex> wf;  ///< weight * fhat(t) / 2pi
  double cutoff = 0.0;
  double width = 0.0;
  std::optional<double> disc;

  [[nodiscard]] Complex q(double lambda) const {
    Complex s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) s += wf[k] * std::polar(1.0, t[k] * lambda);
    return s;
  }
};

Rule make_rule(const FourierProfile& f, double cutoff, double width, double r, double unit, std::size_t cap) {
  Rule rule;
  rule.cutoff = cutoff;
  rule.width = width;
  const auto cuts = interval_cuts(f, -cutoff, cutoff, false);
  std::size_t panels = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    panels += static_cast<std::size_t>(std::ceil((cuts[i + 1] - cuts[i]) / width));
  if (panels * 16 > cap) throw Error(ErrorKind::cap_exceeded, "func_calc: quadrature node cap exceeded");
  rule.t.reserve(panels * 16);
  rule.wf.reserve(panels * 16);
  double err = 0.0;
  bool bounded = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const auto n = static_cast<std::size_t>(std::ceil(len / width));
    for (std::size_t k = 0; k < n; ++k) {
      const double a = cuts[i] + len * static_cast<double>(k) / static_cast<double>(n);
      const double b = cuts[i] + len * static_cast<double>(k + 1) / static_cast<double>(n);
      const double c = 0.5 * (a + b);
      const double hw = 0.5 * (b - a);
      for (int j = 0; j < 8; ++j)
        for (double sgn : {-1.0, 1.0}) {
          const double t = c + sgn * hw * kGLx[j];
          rule.t.push_back(t);
          rule.wf.push_back(kGLw[j] * hw * f.fhat(t) / kTwoPi);
        }
      if (!bounded) continue;
      const double lo = c - kSemiMajor * hw;
      const double hi = c + kSemiMajor * hw;
      const double bim = kSemiMinor * hw;
      const auto pb = f.piece_bound(lo, hi, bim);
      if (!pb) {
        bounded = false;
        continue;
      }
      if (*pb == 0.0) continue;
      const double reach = std::max(std::abs(lo), std::abs(hi)) + bim;
      err += kGLConstant * hw * *pb * unit * std::exp(reach * r);
    }
  }
  if (bounded) rule.disc = err / kTwoPi;
  return rule;
}

double tail_norm(const FourierProfile& f, double cutoff, double r, double unit) {
  return f.tail(cutoff, r) * unit / kTwoPi;
}

/// Smallest (to bisection accuracy) T with tail(T, R) small enough.
double choose_cutoff(const FourierProfile& f, double r, double unit, double target) {
  const double sup = f.support();
  if (std::isfinite(sup)) return std::max(sup, 1e-300);
  double hi = 1.0;
  for (;;) {
    const double tn = tail_norm(f, hi, r, unit);
    if (tn <= target) break;
    if (hi > 1e7) {
      if (std::isinf(tn))
        throw Error(ErrorKind::domain, "func_calc: profile is not integrable against e^{R|t|} for R = ||x||_A");
      throw Error(ErrorKind::cap_exceeded, "func_calc: truncation cutoff cap exceeded");
    }
    hi *= 2.0;
  }
  double lo = hi / 2.0;
  if (tail_norm(f, lo, r, unit) <= target) return lo;
  for (int i = 0; i < 50 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_norm(f, mid, r, unit) <= target ? hi : lo) = mid;
  }
  return hi;
}

/// Applies the quadrature rule to a fixed self-adjoint element.
class Applier {
 public:
  Applier(const Element& x, double grid_tol) : x_(x), grid_tol_(grid_tol) {
    if (const auto* a = std::get_if<ComplexMatrix>(&x)) {
      eig_ = hermitian_eig(*a);
      return;
    }
    if (const auto* tp = std::get_if<TrigPolynomial>(&x)) {
      poly_ = tp->lattice();
      return;
    }
    const auto& f = std::get<WeightedSection>(x);
    const auto& g = *f.group();
    if (g.is_finite()) {
      eig_ = hermitian_eig(left_convolution_matrix(f));
      return;
    }
    if (g.family() != GroupFamily::lattice || g.parameter() > 2)
      throw Error(ErrorKind::unsupported, "func_calc: no functional calculus for sections on " + g.name());
    torus::LatticePoly p{g.parameter(), {}};
    for (const auto& term : f.terms()) {
      torus::LatticeTerm lt;
      lt.index[0] = term.element[0];
      if (g.parameter() == 2) lt.index[1] = term.element[1];
      lt.value = term.value;
      p.terms.push_back(lt);
    }
    poly_ = std::move(p);
  }

  Element apply(const Rule& rule, std::optional<double>& grid_delta) const {
    auto q = [&](double lambda) { return rule.q(lambda); };
    if (const auto* a = std::get_if<ComplexMatrix>(&x_)) {
      (void)a;
      return apply_spectral(*eig_, q);
    }
    if (std::holds_alternative<TrigPolynomial>(x_)) {
      std::map<std::int64_t, Complex> coeffs;
      for (const auto& term : on_torus(q, grid_delta)) coeffs[term.index[0]] = term.value;
      return TrigPolynomial(std::move(coeffs));
    }
    const auto& f = std::get<WeightedSection>(x_);
    const auto& g = *f.group();
    if (g.is_finite()) {
      const auto m = apply_spectral(*eig_, q);
      const auto elems = ball(g, g.parameter());
      std::vector<SectionTerm> terms;
      for (std::size_t i = 0; i < elems.size(); ++i) terms.push_back({elems[i], m(i, 0)});
      return WeightedSection(f.group(), std::move(terms));
    }
    std::vector<SectionTerm> terms;
    for (const auto& term : on_torus(q, grid_delta)) {
      GroupElement e;
      e.push_back(static_cast<std::int32_t>(term.index[0]));
      if (g.parameter() == 2) e.push_back(static_cast<std::int32_t>(term.index[1]));
      terms.push_back({e, term.value});
    }
    return WeightedSection(f.group(), std::move(terms));
  }

 private:
  template <class Q>
  std::vector<torus::LatticeTerm> on_torus(const Q& q, std::optional<double>& grid_delta) const {
    const auto& p = *poly_;
    std::int64_t span = 0;
    for (const auto& t : p.terms) span = std::max({span, std::abs(t.index[0]), std::abs(t.index[1])});
    const std::size_t cap = p.dim == 1 ? (std::size_t{1} << 18) : (std::size_t{1} << 10);
    std::size_t m = p.dim == 1 ? 256 : 64;
    while (m < 8 * static_cast<std::size_t>(span + 1)) m *= 2;
    auto compute = [&](std::size_t grid) {
      auto samples = torus::sample_grid(p, grid);
      for (auto& s : samples) s = q(s.real());
      return torus::coefficients(samples, p.dim, grid, static_cast<std::int64_t>(grid / 4));
    };
    auto coarse = compute(m);
    for (;;) {
      if (2 * m > cap) throw Error(ErrorKind::cap_exceeded, "func_calc: torus grid cap reached");
      auto fine = compute(2 * m);
      const auto rc = static_cast<std::int64_t>(m / 4);
      const auto side = static_cast<std::size_t>(2 * rc + 1);
      double diff = 0.0;
      double top = 0.0;
      for (const auto& term : fine) {
        top = std::max(top, std::abs(term.value));
        const bool inside = std::abs(term.index[0]) <= rc && (p.dim == 1 || std::abs(term.index[1]) <= rc);
        if (!inside) {
          diff = std::max(diff, std::abs(term.value));
          continue;
        }
        const std::size_t idx = p.dim == 1 ? static_cast<std::size_t>(term.index[0] + rc)
                                           : static_cast<std::size_t>(term.index[0] + rc) * side +
                                                 static_cast<std::size_t>(term.index[1] + rc);
        diff = std::max(diff, std::abs(term.value - coarse[idx].value));
      }
      if (diff <= grid_tol_) {
        grid_delta = diff;
        std::vector<torus::LatticeTerm> kept;
        for (const auto& term : fine)
          if (std::abs(term.value) > 1e-16 * std::max(top, 1e-300)) kept.push_back(term);
        return kept;
      }
      coarse = std::move(fine);
      m *= 2;
    }
  }

  const Element& x_;
  double grid_tol_;
  std::optional<EigenDecomposition> eig_;
  std::optional<torus::LatticePoly> poly_;
};

void require_self_adjoint(const Element& x) {
  if (const auto* a = std::get_if<ComplexMatrix>(&x)) {
    if (!is_hermitian(*a)) throw Error(ErrorKind::not_self_adjoint, "func_calc: input is not Hermitian");
    return;
  }
  const double scale = std::max(1.0, max_coefficient(x));
  if (self_adjoint_defect(x) > 1e-12 * scale)
    throw Error(ErrorKind::not_self_adjoint, "func_calc: input is not self-adjoint");
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto directed = [](const std::vector<Complex>& u, const std::vector<Complex>& v) {
    double worst = 0.0;
    for (const auto& p : u) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : v) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

double domar_norm(const FourierProfile& f, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::domain, "domar_norm: tau must lie in (0, 1)");
  // For |t| >= L >= 1, concavity gives |t|^tau <= (1 - tau) L^tau + tau L^{tau-1} |t|.
  auto tail_bound = [&](double l) {
    return std::exp((1.0 - tau) * std::pow(l, tau)) * f.tail(l, tau * std::pow(l, tau - 1.0));
  };
  double l = 1.0;
  const double sup = f.support();
  if (std::isfinite(sup)) {
    l = sup;
  } else {
    while (!(tail_bound(l) <= 1e-12)) {
      if (l > 1e7) throw Error(ErrorKind::domain, "domar_norm: profile is not integrable against e^{|t|^tau}");
      l *= 2.0;
    }
  }
  if (l == 0.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [&](double t) { return std::abs(f.fhat(t)) * std::exp(std::pow(std::abs(t), tau)); };
  const auto cuts = interval_cuts(f, -l, l, true);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int chunks = std::max(1, static_cast<int>(std::ceil(len / 2.0)));
    for (int c = 0; c < chunks; ++c) {
      const double a = cuts[i] + len * c / chunks;
      const double b = cuts[i] + len * (c + 1) / chunks;
      total += integrator.integrate(integrand, a, b, 1e-13);
    }
  }
  return total;
}

json to_json(const FuncCalcResult& r) {
  json j{{"cutoff", r.cutoff},
         {"panel_width", r.panel_width},
         {"nodes", r.nodes},
         {"tail_bound", r.tail_bound},
         {"certified", r.certified},
         {"f0", complex_json(r.f0)},
         {"f1", complex_json(r.f1)},
         {"non_unital", r.non_unital}};
  j["discretization_bound"] = r.discretization_bound ? json(*r.discretization_bound) : json(nullptr);
  if (r.richardson_delta) j["richardson_delta"] = *r.richardson_delta;
  if (r.grid_delta) j["grid_delta"] = *r.grid_delta;
  if (r.commutator) j["commutator"] = *r.commutator;
  return j;
}

FuncCalcResult func_calc(const FourierProfile& f, const Element& x, const AlgebraInstance& inst, double tol,
                         const FuncCalcOptions& opts) {
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "func_calc: tol must be positive");
  inst.check(x);
  require_self_adjoint(x);
  const double r = inst.a_norm(x);
  const double unit = std::max(1.0, inst.a_norm(unit_like(x)));
  const Applier applier(x, tol / 4.0);

  FuncCalcResult out;
  const double cutoff = choose_cutoff(f, r, unit, tol / 2.0);
  out.cutoff = cutoff;
  out.tail_bound = tail_norm(f, cutoff, r, unit);

  double width = std::min(1.0, r > 0.0 ? 1.0 / r : 1.0);
  Rule rule = make_rule(f, cutoff, width, r, unit, opts.node_cap);
  std::optional<double> grid_delta;
  if (rule.disc) {
    while (*rule.disc > tol / 2.0) {
      width /= 2.0;
      rule = make_rule(f, cutoff, width, r, unit, opts.node_cap);
    }
    out.value = applier.apply(rule, grid_delta);
  } else {
    // no analytic bound: halve panels until the A-norm change is below tol/2
    Element v = applier.apply(rule, grid_delta);
    for (;;) {
      Rule finer = make_rule(f, cutoff, width / 2.0, r, unit, opts.node_cap);
      Element w = applier.apply(finer, grid_delta);
      const double delta = inst.a_norm(subtract(w, v));
      rule = std::move(finer);
      width /= 2.0;
      v = std::move(w);
      if (delta <= tol / 2.0) {
        out.richardson_delta = delta;
        break;
      }
    }
    out.value = std::move(v);
  }
  out.panel_width = width;
  out.nodes = rule.t.size();
  out.discretization_bound = rule.disc;
  out.f0 = rule.q(0.0);
  out.f1 = rule.q(1.0);
  out.non_unital = std::abs(out.f0) <= 1e-12;

  if (opts.richardson) {
    const double c2 = std::min(2.0 * cutoff, std::isfinite(f.support()) ? f.support() : 2.0 * cutoff);
    Rule check = make_rule(f, c2, width / 2.0, r, unit, opts.node_cap);
    std::optional<double> gd;
    out.richardson_delta = inst.a_norm(subtract(applier.apply(check, gd), out.value));
  }
  if (const auto* a = std::get_if<ComplexMatrix>(&x)) {
    const auto& fx = std::get<ComplexMatrix>(out.value);
    out.commutator = operator_norm(mat_mul(fx, *a) - mat_mul(*a, fx));
  }
  out.grid_delta = grid_delta;
  const bool grid_ok = !grid_delta || *grid_delta <= tol / 4.0;
  out.certified = rule.disc && out.tail_bound + *rule.disc <= tol && grid_ok;
  return out;
}

double spectral_mapping_check(const FourierProfile& f, const ComplexMatrix& x, double tol) {
  const auto inst = make_instance("cstar");
  const auto r = func_calc(f, x, inst, tol);
  const auto lhs = spectrum_b(std::get<ComplexMatrix>(r.value));
  std::vector<Complex> rhs;
  for (double lambda : hermitian_eig(x).eigenvalues) rhs.push_back(f.f(lambda));
  return hausdorff(lhs, rhs);
}

double homomorphism_check(const FourierProfile& f, const FourierProfile& g, const ComplexMatrix& x, double tol) {
  const auto inst = make_instance("cstar");
  const auto fg = FourierProfile::product(f, g);
  const auto a = std::get<ComplexMatrix>(func_calc(fg, x, inst, tol).value);
  const auto b = std::get<ComplexMatrix>(func_calc(f, x, inst, tol).value);
  const auto c = std::get<ComplexMatrix>(func_calc(g, x, inst, tol).value);
  return operator_norm(a - mat_mul(b, c));
}

json to_json(const ApproxIdentityReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.n_grid.size(); ++i)
    rows.push_back({{"N", r.n_grid[i]}, {"residual", r.residuals[i]}, {"deviation", r.deviations[i]}});
  return {{"table", rows},
          {"support_radius", r.support_radius},
          {"f0", complex_json(r.f0)},
          {"f1", complex_json(r.f1)},
          {"tol", r.tol},
          {"monotone", r.monotone},
          {"pass", r.pass}};
}

ApproxIdentityReport approx_identity_experiment(const AlgebraInstance& inst, const FourierProfile& f,
                                                const ComplexMatrix& a, const std::vector<int>& n_grid, double tol) {
  constexpr double kInternalTol = 1e-12;
  ApproxIdentityReport rep;
  rep.n_grid = n_grid;
  rep.tol = tol;
  const std::size_t dim = a.dim();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (a(i, j) != Complex(0.0)) rep.support_radius = std::max(rep.support_radius, static_cast<int>(std::max(i, j)) + 1);

  bool checked = false;
  double last = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int n : n_grid) {
    if (n < 0 || static_cast<std::size_t>(n) > dim)
      throw Error(ErrorKind::domain, "approx_identity_experiment: N outside the window");
    std::vector<double> diag(dim, 0.0);
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = 1.0;
    const auto b = ComplexMatrix::diagonal(std::span<const double>(diag));
    const auto r = func_calc(f, b, inst, kInternalTol);
    if (!checked) {
      rep.f0 = r.f0;
      rep.f1 = r.f1;
      if (std::abs(r.f0) > 1e-10 || std::abs(r.f1 - 1.0) > 1e-10)
        throw Error(ErrorKind::domain, "approx_identity_experiment: profile needs f(0) = 0 and f(1) = 1");
      checked = true;
    }
    const auto& fb = std::get<ComplexMatrix>(r.value);
    const double res = inst.a_norm(mat_mul(fb, a) - a);
    const double dev = inst.a_norm(fb - b);
    rep.residuals.push_back(res);
    rep.deviations.push_back(dev);
    if (n >= rep.support_radius) {
      if (res > last + 1e-15) rep.monotone = false;
      last = res;
      ok = ok && res <= tol;
    }
    ok = ok && dev <= tol;
  }
  rep.pass = ok && rep.monotone;
  return rep;
}

}  // namespace kpq
