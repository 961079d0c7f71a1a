#include "kpq/growth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpq/bessel.hpp"
#include "kpq/error.hpp"
#include "kpq/parallel.hpp"

namespace kpq {

using nlohmann::json;

namespace {

double log_weight_fn(const AlgebraInstance& inst, int n) {
  return inst.weight ? std::log(inst.weight->at_length(n)) : 0.0;
}

void require_self_adjoint(const Element& x, const std::string& who) {
  const double scale = std::max(1.0, max_coefficient(x));
  if (const auto* a = std::get_if<ComplexMatrix>(&x)) {
    if (!is_hermitian(*a)) throw Error(ErrorKind::not_self_adjoint, who + ": input is not Hermitian");
    return;
  }
  if (self_adjoint_defect(x) > 1e-12 * scale) throw Error(ErrorKind::not_self_adjoint, who + ": input is not self-adjoint");
}

/// Z-section supported on {-1, 0, 1}: e^{it(c0 + c e^{i theta} + conj(c) e^{-i theta})}
/// = e^{itc0} sum_n i^n J_n(2|c|t) e^{in(theta + phi)}.
WeightedSection u_bessel(const WeightedSection& f, const AlgebraInstance& inst, double t, double tail_tol) {
  const auto& g = f.group();
  const double c0 = f.at(GroupElement{0}).real();
  const Complex c = f.at(GroupElement{1});
  const double x = 2.0 * std::abs(c) * std::abs(t);
  const double phi = std::arg(c) + (t < 0 ? std::numbers::pi : 0.0);
  const Complex phase0 = std::polar(1.0, t * c0);
  if (x == 0.0) {
    if (phase0 == Complex(1.0)) return WeightedSection(g);
    return WeightedSection::delta(g, GroupElement{0}, phase0 - 1.0);
  }
  const int n_max = bessel_tail_cutoff(x, tail_tol, [&](int n) { return log_weight_fn(inst, n); });
  const auto j = bessel_j_sequence(x, n_max);
  std::vector<SectionTerm> terms;
  terms.reserve(2 * n_max + 1);
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int n = -n_max; n <= n_max; ++n) {
    const int an = std::abs(n);
    Complex v = phase0 * kIPow[an % 4] * j[an] * std::polar(1.0, n * phi);
    if (n == 0) v -= 1.0;
    if (v != Complex(0.0)) terms.push_back({GroupElement{n}, v});
  }
  return WeightedSection(g, std::move(terms));
}

/// Coefficients of e^{it sigma} - 1 by sampling on an M^d grid, M doubled until
/// two successive grids agree to richardson_tol.
std::vector<torus::LatticeTerm> u_torus(const torus::LatticePoly& p, double t, const UOptions& opts) {
  const std::size_t cap = p.dim == 1 ? (1u << 20) : (1u << 11);
  std::size_t m = opts.torus_grid ? opts.torus_grid : (p.dim == 1 ? 4096 : 256);
  auto compute = [&](std::size_t grid) {
    auto samples = torus::sample_grid(p, grid);
    // sigma is real for self-adjoint input; e^{iv} - 1 without cancellation
    for (auto& s : samples) {
      const double v = t * s.real();
      const double h = std::sin(0.5 * v);
      s = Complex(-2.0 * h * h, std::sin(v));
    }
    return torus::coefficients(samples, p.dim, grid, static_cast<std::int64_t>(grid / 4));
  };
  auto coarse = compute(m);
  for (;;) {
    if (2 * m > cap)
      throw Error(ErrorKind::cap_exceeded, "u_of: torus grid cap reached before the coefficients stabilized");
    auto fine = compute(2 * m);
    // compare on the coarse index box
    const auto r_c = static_cast<std::int64_t>(m / 4);
    double diff = 0.0;
    double top = 0.0;
    for (const auto& term : fine) {
      top = std::max(top, std::abs(term.value));
      const bool inside = std::abs(term.index[0]) <= r_c && (p.dim == 1 || std::abs(term.index[1]) <= r_c);
      if (!inside) {
        diff = std::max(diff, std::abs(term.value));
        continue;
      }
      const std::size_t side = static_cast<std::size_t>(2 * r_c + 1);
      const std::size_t idx = p.dim == 1 ? static_cast<std::size_t>(term.index[0] + r_c)
                                         : static_cast<std::size_t>(term.index[0] + r_c) * side +
                                               static_cast<std::size_t>(term.index[1] + r_c);
      diff = std::max(diff, std::abs(term.value - coarse[idx].value));
    }
    if (diff <= opts.richardson_tol) {
      std::vector<torus::LatticeTerm> kept;
      for (const auto& term : fine)
        if (std::abs(term.value) > 1e-15 * std::max(top, 1e-300)) kept.push_back(term);
      return kept;
    }
    coarse = std::move(fine);
    m *= 2;
  }
}

}  // namespace

Element u_of(const Element& x, const AlgebraInstance& inst, double t, const UOptions& opts) {
  inst.check(x);
  require_self_adjoint(x, "u_of");
  if (const auto* a = std::get_if<ComplexMatrix>(&x)) {
    ComplexMatrix e = mat_exp_hermitian(*a, t);
    e -= ComplexMatrix::identity(a->dim());
    return e;
  }
  if (const auto* tp = std::get_if<TrigPolynomial>(&x)) {
    auto lattice = tp->lattice();
    std::map<std::int64_t, Complex> coeffs;
    for (const auto& term : u_torus(lattice, t, opts)) coeffs[term.index[0]] = term.value;
    return TrigPolynomial(std::move(coeffs));
  }
  const auto& f = std::get<WeightedSection>(x);
  if (f.is_zero()) return WeightedSection(f.group());
  const auto& g = *f.group();
  if (g.is_finite()) {
    const auto m = left_convolution_matrix(f);
    ComplexMatrix e = mat_exp_hermitian(m, t);
    const auto elems = ball(g, g.parameter());
    std::vector<SectionTerm> terms;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      Complex v = e(i, 0);
      if (i == 0) v -= 1.0;
      terms.push_back({elems[i], v});
    }
    return WeightedSection(f.group(), std::move(terms));
  }
  if (g.family() == GroupFamily::lattice && g.parameter() == 1 && f.support_radius() <= 1)
    return u_bessel(f, inst, t, opts.tail_tol);
  if (g.family() == GroupFamily::lattice && g.parameter() <= 2) {
    torus::LatticePoly p{g.parameter(), {}};
    for (const auto& term : f.terms()) {
      torus::LatticeTerm lt;
      lt.index[0] = term.element[0];
      if (g.parameter() == 2) lt.index[1] = term.element[1];
      lt.value = term.value;
      p.terms.push_back(lt);
    }
    std::vector<SectionTerm> terms;
    for (const auto& term : u_torus(p, t, opts)) {
      GroupElement e;
      e.push_back(static_cast<std::int32_t>(term.index[0]));
      if (g.parameter() == 2) e.push_back(static_cast<std::int32_t>(term.index[1]));
      terms.push_back({e, term.value});
    }
    return WeightedSection(f.group(), std::move(terms));
  }
  throw Error(ErrorKind::unsupported, "u_of: no exponential available for sections on " + g.name());
}

double tau_bound(const DiffTriple& t) {
  const double base = std::max(static_cast<double>(t.k - 1), t.p.value());
  return std::log(base) / std::log(static_cast<double>(t.k));
}

json to_json(const GrowthTrace& g) {
  json j{{"t", g.t_grid},
         {"norm_A", g.norms},
         {"triple", to_json(g.triple)},
         {"tau_bound", g.tau_bound},
         {"tau_fit", g.tau_fit},
         {"fit_quality", g.fit_quality},
         {"fit", g.reliable ? "RELIABLE" : "UNRELIABLE"},
         {"bounded", g.bounded},
         {"slack", g.slack},
         {"pass", g.pass}};
  if (!g.oracle_norms.empty()) j["norm_oracle"] = g.oracle_norms;
  return j;
}

GrowthTrace growth_trace(const Element& x, const AlgebraInstance& inst, const DiffTriple& triple, double t_max,
                         int points, const GrowthOptions& opts) {
  if (!(t_max > 0.0)) throw Error(ErrorKind::domain, "growth_trace: t_max must be positive");
  if (points < 4) throw Error(ErrorKind::domain, "growth_trace: need at least 4 grid points");
  GrowthTrace g;
  g.triple = triple;
  g.slack = opts.slack;
  g.tau_bound = tau_bound(triple);
  const double t_min = opts.t_min.value_or(t_max / 100.0);
  if (!(t_min > 0.0 && t_min < t_max)) throw Error(ErrorKind::domain, "growth_trace: need 0 < t_min < t_max");
  const double lr = std::log(t_max / t_min);
  for (int i = 0; i < points; ++i) g.t_grid.push_back(t_min * std::exp(lr * i / (points - 1)));
  g.t_grid.back() = t_max;
  g.norms.assign(points, 0.0);
  if (opts.oracle) g.oracle_norms.assign(points, 0.0);
  parallel_for(static_cast<std::size_t>(points), opts.jobs, [&](std::size_t i) {
    g.norms[i] = inst.a_norm(u_of(x, inst, g.t_grid[i], opts.u));
    if (opts.oracle) g.oracle_norms[i] = opts.oracle(g.t_grid[i]);
  });

  // least squares on the upper half
  const int lo = points / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = points - lo;
  double hi_norm = 0.0;
  double lo_norm = INFINITY;
  for (int i = lo; i < points; ++i) {
    const double xv = std::log(g.t_grid[i]);
    const double yv = std::log(std::log(g.norms[i] + std::numbers::e));
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    syy += yv * yv;
    hi_norm = std::max(hi_norm, g.norms[i]);
    lo_norm = std::min(lo_norm, g.norms[i]);
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  g.tau_fit = vx > 0 ? cxy / vx : 0.0;
  g.fit_quality = (vx > 0 && vy > 0) ? (cxy * cxy) / (vx * vy) : 1.0;
  g.reliable = g.fit_quality >= 0.98;
  g.bounded = hi_norm <= 2.0 * std::max(lo_norm, 1e-300) || hi_norm <= 2.0;
  g.pass = g.tau_fit <= g.tau_bound + g.slack || g.bounded;
  return g;
}

double growth_prefactor(const GrowthTrace& g, double tau) {
  double b = 0.0;
  for (std::size_t i = 0; i < g.t_grid.size(); ++i)
    b = std::max(b, g.norms[i] / std::exp(std::pow(g.t_grid[i], tau)));
  return b;
}

json to_json(const AsympReport& r) {
  json j{{"k", r.k},
         {"gamma", r.gamma},
         {"n_max", r.n_max},
         {"sequence", r.sequence},
         {"max_ratio", r.max_ratio},
         {"worst_n", r.worst_n},
         {"failures", r.failures},
         {"pass", r.pass}};
  if (r.violation) {
    j["violation"] = {{"condition", r.violation->condition},
                      {"n", r.violation->n},
                      {"m", r.violation->m},
                      {"lhs", r.violation->lhs},
                      {"rhs", r.violation->rhs}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

AsympReport asymp_check(const std::function<double(int)>& a, int k, double gamma, int n_max) {
  if (k < 2) throw Error(ErrorKind::domain, "asymp_check: k must be >= 2");
  if (!(gamma > 1.0 && gamma < k)) throw Error(ErrorKind::domain, "asymp_check: gamma must lie in (1, k)");
  if (n_max < 1) throw Error(ErrorKind::domain, "asymp_check: n_max must be >= 1");
  AsympReport rep;
  rep.k = k;
  rep.gamma = gamma;
  rep.n_max = n_max;
  rep.sequence.resize(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    const double v = a(n);
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, "asymp_check: a_n must be finite and >= 0");
    rep.sequence[n] = v;
  }
  const auto& s = rep.sequence;
  constexpr double kSlack = 1e-12;
  for (int n = 1; n <= n_max && !rep.violation; ++n)
    for (int m = n; n + m <= n_max; ++m)
      if (s[n + m] > s[n] * s[m] * (1.0 + kSlack)) {
        rep.violation = HypothesisViolation{"a(n+m) <= a(n) a(m)", n, m, s[n + m], s[n] * s[m]};
        break;
      }
  for (int n = 1; !rep.violation && static_cast<long long>(k) * n <= n_max; ++n) {
    const double rhs = std::pow(s[n], gamma);
    if (s[k * n] > rhs * (1.0 + kSlack)) rep.violation = HypothesisViolation{"a(kn) <= a(n)^gamma", n, k, s[k * n], rhs};
  }
  rep.sequence.erase(rep.sequence.begin());
  if (rep.violation) return rep;

  const double big_a = std::log(s[1]);
  const double lk = std::log(static_cast<double>(k));
  for (int n = 1; n <= n_max; ++n) {
    const double logn_k = std::log(static_cast<double>(n)) / lk;
    const double exponent = big_a * (k - 1) * (2.0 + logn_k) * k * std::pow(static_cast<double>(n), std::log(gamma) / lk);
    const double ratio = s[n] == 0.0 ? 0.0 : std::exp(std::log(s[n]) - exponent);
    if (n == 1 || ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_n = n;
    }
    if (ratio > 1.0 + kSlack) rep.failures.push_back(n);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

std::pair<std::uint64_t, std::uint64_t> comb_identity(int k) {
  if (k < 2 || k > 60) throw Error(ErrorKind::overflow, "comb_identity: k must lie in [2, 60]");
  // Pascal rows 0..k-1
  std::vector<std::vector<std::uint64_t>> c(k);
  for (int n = 0; n < k; ++n) {
    c[n].assign(n + 1, 1);
    for (int j = 1; j < n; ++j) c[n][j] = c[n - 1][j - 1] + c[n - 1][j];
  }
  std::uint64_t lhs = 0;
  for (int b = 0; b <= k - 2; ++b) lhs += c[k - 1][b];
  for (int a = 0; a <= k - 2; ++a)
    for (int b = 0; b <= a; ++b) lhs += c[a][b];
  return {lhs, (std::uint64_t{1} << k) - 2};
}

double d_constant(int k, double q, double gamma, double c) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::domain, "d_constant: gamma must exceed 1");
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "d_constant: c must be positive");
  if (k < 2) throw Error(ErrorKind::domain, "d_constant: k must be >= 2");
  const double two_k = std::ldexp(1.0, k);
  const double base = std::max(two_k, std::pow(2.0, q) * c + two_k - 1.0);
  return std::max(1.0, std::pow(base, 1.0 / (gamma - 1.0)));
}

double polynomial_expansion_check(const Element& x, const AlgebraInstance& inst, int k, int n, const UOptions& opts) {
  if (k < 2) throw Error(ErrorKind::domain, "polynomial_expansion_check: k must be >= 2");
  const Element z = u_of(x, inst, static_cast<double>(n), opts);
  const Element lhs = u_of(x, inst, static_cast<double>(k) * n, opts);
  // coefficient of z^{j}, j = 1..k
  std::vector<double> coef(k + 1, 0.0);
  coef[k] = 1.0;
  std::vector<std::vector<double>> c(k);
  for (int r = 0; r < k; ++r) {
    c[r].assign(r + 1, 1.0);
    for (int j = 1; j < r; ++j) c[r][j] = c[r - 1][j - 1] + c[r - 1][j];
  }
  for (int b = 0; b <= k - 2; ++b) coef[b + 1] += c[k - 1][b];
  for (int a = 0; a <= k - 2; ++a)
    for (int b = 0; b <= a; ++b) coef[b + 1] += c[a][b];
  Element rhs = scale(coef[1], z);
  Element pw = z;
  for (int j = 2; j <= k; ++j) {
    pw = multiply(pw, z);
    rhs = add(rhs, scale(coef[j], pw));
  }
  return inst.a_norm(subtract(lhs, rhs));
}

double kpq_ratio(const Element& z, const AlgebraInstance& inst, const DiffTriple& t) {
  const double na = inst.a_norm(z);
  const double nb = inst.b_norm(z);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double nk = inst.a_norm(power(z, t.k));
  return std::exp(std::log(nk) - t.p.value() * std::log(na) - t.q.value() * std::log(nb));
}

OrbitSequence orbit_sequence(const Element& x, const AlgebraInstance& inst, const DiffTriple& t, int n_max,
                             std::optional<double> gamma, const UOptions& opts, unsigned jobs) {
  if (n_max < 1) throw Error(ErrorKind::domain, "orbit_sequence: n_max must be >= 1");
  OrbitSequence o;
  o.gamma = gamma.value_or(std::max(static_cast<double>(t.k - 1), t.p.value()));
  o.u_norms.assign(n_max, 0.0);
  std::vector<double> ratios(n_max, 0.0);
  parallel_for(static_cast<std::size_t>(n_max), jobs, [&](std::size_t i) {
    const Element z = u_of(x, inst, static_cast<double>(i + 1), opts);
    o.u_norms[i] = inst.a_norm(z);
    ratios[i] = kpq_ratio(z, inst, t);
  });
  for (double r : ratios) o.c = std::max(o.c, r);
  o.d = d_constant(t.k, t.q.value(), o.gamma, std::max(o.c, 1e-300));
  for (double u : o.u_norms) o.a.push_back(o.d * (u + 1.0));
  return o;
}

}  // namespace kpq
