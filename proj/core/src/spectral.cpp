#include "kpq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpq/error.hpp"
#include "kpq/parallel.hpp"

namespace kpq {

using nlohmann::json;

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void prune(Element& x) {
  if (auto* s = std::get_if<WeightedSection>(&x)) s->prune_relative(1e-30);
}

/// Least squares r + c 2^-m through (m_i, v_i).
double fit_limit(const std::vector<std::pair<int, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [m, v] : pts) {
    const double x = std::ldexp(1.0, -m);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  const double n = static_cast<double>(pts.size());
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return sy / n;
  return (sxx * sy - sx * sxy) / det;
}

}  // namespace

double default_radius_tolerance(int m_max) { return std::pow(10.0, -std::floor(m_max / 5.0)); }

json to_json(const RadiusReport& r) {
  json seq = json::array();
  for (const auto& s : r.sequence) seq.push_back({{"m", s.m}, {"n", s.n}, {"value", s.value}});
  json j{{"sequence", seq},          {"extrapolated", r.extrapolated}, {"gelfand_tail", r.tail},
         {"tolerance", r.tolerance}, {"exact_zero", r.exact_zero},     {"extrapolation", "heuristic r + c*2^-m fit"}};
  j["oracle"] = r.oracle ? json(*r.oracle) : json(nullptr);
  j["gap"] = r.gap ? json(*r.gap) : json(nullptr);
  return j;
}

RadiusReport gelfand_radius(const Element& x, const AlgebraInstance& inst, int m_max, std::optional<double> tolerance) {
  inst.check(x);
  if (m_max < 0 || m_max > 24) throw Error(ErrorKind::domain, "gelfand_radius: m_max must be in [0, 24]");
  RadiusReport rep;
  rep.tolerance = tolerance.value_or(default_radius_tolerance(m_max));
  if (inst.b_radius) rep.oracle = inst.b_radius(x);

  const double n0 = inst.a_norm(x);
  if (!std::isfinite(n0)) throw Error(ErrorKind::overflow, "gelfand_radius: non-finite A-norm");
  if (n0 == 0.0) {
    rep.exact_zero = true;
    for (int m = 0; m <= m_max; ++m) rep.sequence.push_back({m, std::ldexp(1.0, m), 0.0});
  } else {
    Kahan s;
    s.add(std::log(n0));
    rep.sequence.push_back({0, 1.0, n0});
    Element y = scale(1.0 / n0, x);
    for (int m = 1; m <= m_max; ++m) {
      Element z = multiply(y, y);
      prune(z);
      const double nz = inst.a_norm(z);
      if (!std::isfinite(nz)) throw Error(ErrorKind::overflow, "gelfand_radius: non-finite norm after renormalization");
      if (nz == 0.0) {
        rep.exact_zero = true;
        for (int k = m; k <= m_max; ++k) rep.sequence.push_back({k, std::ldexp(1.0, k), 0.0});
        break;
      }
      s.add(std::ldexp(std::log(nz), -m));
      rep.sequence.push_back({m, std::ldexp(1.0, m), std::exp(s.sum)});
      y = scale(1.0 / nz, z);
    }
  }
  rep.tail = rep.sequence.back().value;
  if (rep.exact_zero) {
    rep.extrapolated = 0.0;
  } else {
    // raw samples: A-norms that are only submultiplicative up to a constant
    // dip below the radius early, so a running minimum would be biased
    std::vector<std::pair<int, double>> env;
    for (const auto& smp : rep.sequence) env.emplace_back(smp.m, smp.value);
    if (env.size() > 3) env.erase(env.begin(), env.end() - 3);
    rep.extrapolated = std::max(0.0, env.size() >= 2 ? fit_limit(env) : env.back().second);
  }
  if (rep.oracle) rep.gap = std::abs(rep.extrapolated - *rep.oracle);
  return rep;
}

std::vector<Complex> spectrum_b(const ComplexMatrix& a) {
  std::vector<Complex> out;
  if (is_hermitian(a)) {
    for (double l : hermitian_eig(a).eigenvalues) out.emplace_back(l, 0.0);
    return out;
  }
  const double n = operator_norm(a);
  if (normality_defect(a) > 1e-10 * (1.0 + n * n))
    throw Error(ErrorKind::not_normal, "spectrum_b: input is neither Hermitian nor normal");
  // Real and imaginary parts commute; a generic real combination shares their
  // eigenvectors, and the Rayleigh quotients of a recover the eigenvalues.
  ComplexMatrix re = a + adjoint(a);
  re *= 0.5;
  ComplexMatrix im = a - adjoint(a);
  im *= Complex(0.0, -0.5);
  ComplexMatrix mix = im;
  mix *= 1.0 / std::numbers::e;
  mix += re;
  const auto eig = hermitian_eig(mix);
  const auto va = mat_mul(mat_mul(adjoint(eig.vectors), a), eig.vectors);
  for (std::size_t i = 0; i < a.dim(); ++i) out.push_back(va(i, i));
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return out;
}

json to_json(const RadiusExperimentReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(to_json(s));
  return {{"instance", r.instance},
          {"seed", r.seed},
          {"samples", samples},
          {"max_gap", r.max_gap},
          {"tolerance", r.tolerance},
          {"containment_failures", r.containment_failures},
          {"gap_failures", r.gap_failures},
          {"pass", r.pass}};
}

RadiusExperimentReport radius_equality_experiment(const AlgebraInstance& inst, int samples, std::uint64_t seed,
                                                  RadiusExperimentOptions opts) {
  if (!inst.b_radius) throw Error(ErrorKind::unsupported, inst.name + ": no B-side radius oracle");
  RadiusExperimentReport rep;
  rep.instance = inst.name;
  rep.seed = seed;
  rep.tolerance = opts.tolerance.value_or(default_radius_tolerance(opts.m_max));
  opts.sampler.self_adjoint = true;
  rep.samples.resize(static_cast<std::size_t>(std::max(samples, 0)));
  parallel_for(rep.samples.size(), opts.jobs, [&](std::size_t i) {
    const Element x = sample_element(inst, opts.sampler, derive_seed(seed, i));
    rep.samples[i] = gelfand_radius(x, inst, opts.m_max, rep.tolerance);
  });
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    if (!s.oracle) {
      rep.gap_failures.push_back(i);
      continue;
    }
    rep.max_gap = std::max(rep.max_gap, *s.gap);
    if (*s.gap > rep.tolerance) rep.gap_failures.push_back(i);
    if (s.extrapolated < *s.oracle - rep.tolerance) rep.containment_failures.push_back(i);
  }
  rep.pass = rep.gap_failures.empty() && rep.containment_failures.empty();
  return rep;
}

}  // namespace kpq
