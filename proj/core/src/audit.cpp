#include "kpq/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "kpq/error.hpp"
#include "kpq/group.hpp"
#include "kpq/parallel.hpp"
#include "kpq/section.hpp"

namespace kpq {

using nlohmann::json;

namespace {

/// Pairwise summation; the tree shape depends only on the length.
double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::optional<double> kpq_sample_ratio(const AlgebraInstance& inst, const DiffTriple& triple, const Element& a) {
  const double na = inst.a_norm(a);
  const double nb = inst.b_norm(a);
  if (!(na > 0.0) || !(nb > 0.0)) return std::nullopt;
  const double nk = inst.a_norm(power(a, triple.k));
  if (nk == 0.0) return 0.0;
  return std::exp(std::log(nk) - triple.p.value() * std::log(na) - triple.q.value() * std::log(nb));
}

json to_json(const AuditReport& r) {
  json ratios = json::array();
  for (double v : r.ratios) ratios.push_back(nullable(v));
  json j{{"instance", r.instance},
         {"triple", to_json(r.triple)},
         {"sampler", to_json(r.sampler)},
         {"seed", r.seed},
         {"samples", r.samples},
         {"skipped_zero", r.skipped_zero},
         {"c_hat", r.c_hat},
         {"argmax", r.argmax},
         {"argmax_seed", derive_seed(r.seed, r.argmax)},
         {"mean", nullable(r.mean)},
         {"quantiles", {{"0.5", nullable(r.q50)}, {"0.9", nullable(r.q90)}, {"0.99", nullable(r.q99)}}},
         {"per_size", json::array({{{"size", r.sampler.size}, {"samples", r.samples}, {"c_hat", r.c_hat}}})},
         {"violations", r.violations},
         {"ratios", ratios},
         {"pass", r.pass}};
  j["forced_constant"] = r.forced_constant ? json(*r.forced_constant) : json(nullptr);
  return j;
}

AuditReport audit(const AlgebraInstance& inst, const DiffTriple& triple, const SamplerSpec& sampler, int n_samples,
                  std::uint64_t seed, const AuditOptions& opts) {
  if (n_samples < 1) throw Error(ErrorKind::domain, "audit: need at least one sample");
  if (triple.p + triple.q != Rational(triple.k)) throw Error(ErrorKind::domain, "audit: triple violates p + q = k");
  AuditReport rep;
  rep.instance = inst.name;
  rep.triple = triple;
  rep.sampler = sampler;
  rep.seed = seed;
  rep.samples = n_samples;
  rep.forced_constant = inst.forced_constant;
  rep.ratios.assign(static_cast<std::size_t>(n_samples), std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(n_samples), opts.jobs, [&](std::size_t i) {
    const auto a = sample_element(inst, sampler, derive_seed(seed, i));
    if (const auto r = kpq_sample_ratio(inst, triple, a)) rep.ratios[i] = *r;
  });

  std::vector<double> valid;
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    const double v = rep.ratios[i];
    if (std::isnan(v)) {
      ++rep.skipped_zero;
      continue;
    }
    if (valid.empty() || v > rep.c_hat) {
      rep.c_hat = v;
      rep.argmax = i;
    }
    valid.push_back(v);
  }
  bool finite = true;
  for (double v : valid) finite = finite && std::isfinite(v) && v >= 0.0;
  rep.mean = valid.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : pairwise_sum(valid.data(), valid.size()) / static_cast<double>(valid.size());
  std::sort(valid.begin(), valid.end());
  rep.q50 = quantile(valid, 0.5);
  rep.q90 = quantile(valid, 0.9);
  rep.q99 = quantile(valid, 0.99);
  if (rep.forced_constant) {
    const double limit = *rep.forced_constant * (1.0 + opts.forced_tol);
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
      if (rep.ratios[i] > limit) rep.violations.push_back(i);
  }
  rep.pass = finite && !valid.empty() && rep.violations.empty();
  return rep;
}

json to_json(const IteratedReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"log_lhs", row.log_lhs},
                    {"log_rhs_stated", row.log_rhs_stated},
                    {"log_rhs_corrected", row.log_rhs_corrected},
                    {"slack_stated", row.slack_stated},
                    {"slack_corrected", row.slack_corrected}});
  return {{"triple", to_json(r.triple)},
          {"c", r.c},
          {"rows", rows},
          {"pass", r.pass},
          {"pass_corrected", r.pass_corrected}};
}

IteratedReport iterated_check(const AlgebraInstance& inst, const DiffTriple& triple, double c, const Element& x,
                              int n_max) {
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "iterated_check: c must be positive");
  if (n_max < 1) throw Error(ErrorKind::domain, "iterated_check: n_max must be >= 1");
  const double la = std::log(inst.a_norm(x));
  const double lb = std::log(inst.b_norm(x));
  if (!std::isfinite(la) || !std::isfinite(lb)) throw Error(ErrorKind::domain, "iterated_check: x has a zero norm");
  IteratedReport rep;
  rep.triple = triple;
  rep.c = c;
  const double k = triple.k;
  const double p = triple.p.value();
  const double lc = std::log(c);

  // y * e^{scale} = x^{k^n}
  Element y = scale(1.0 / inst.a_norm(x), x);
  double log_scale = la;
  rep.pass = rep.pass_corrected = true;
  for (int n = 1; n <= n_max; ++n) {
    y = power(y, triple.k);
    log_scale *= k;
    const double ny = inst.a_norm(y);
    if (ny == 0.0 || !std::isfinite(ny)) throw Error(ErrorKind::overflow, "iterated_check: power left the representable range");
    log_scale += std::log(ny);
    y = scale(1.0 / ny, y);

    IteratedRow row;
    row.n = n;
    row.log_lhs = log_scale;
    const double kn = std::pow(k, n);
    const double pn = std::pow(p, n);
    const double base = pn * la + (kn - pn) * lb;
    const double geometric = p == 1.0 ? static_cast<double>(n) : (pn - 1.0) / (p - 1.0);
    row.log_rhs_stated = n * lc + base;
    row.log_rhs_corrected = geometric * lc + base;
    row.slack_stated = row.log_rhs_stated - row.log_lhs;
    row.slack_corrected = row.log_rhs_corrected - row.log_lhs;
    const double eps = 1e-12 * std::max(1.0, std::abs(row.log_lhs));
    rep.pass = rep.pass && row.slack_stated >= -eps;
    rep.pass_corrected = rep.pass_corrected && row.slack_corrected >= -eps;
    rep.rows.push_back(row);
  }
  return rep;
}

double orbit_constant(const AlgebraInstance& inst, const DiffTriple& triple, const Element& x, int n_max) {
  const double nx = inst.a_norm(x);
  if (!(nx > 0.0)) throw Error(ErrorKind::domain, "orbit_constant: x has a zero norm");
  Element y = scale(1.0 / nx, x);
  double best = 0.0;
  for (int j = 0; j < n_max; ++j) {
    if (const auto r = kpq_sample_ratio(inst, triple, y)) best = std::max(best, *r);
    y = power(y, triple.k);
    const double ny = inst.a_norm(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    y = scale(1.0 / ny, y);
  }
  return best;
}

json to_json(const SizeScalingReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.sizes.size(); ++i)
    rows.push_back({{"size", r.sizes[i]}, {"c_hat", r.audits[i].c_hat}, {"samples", r.audits[i].samples}});
  json audits = json::array();
  for (const auto& a : r.audits) audits.push_back(to_json(a));
  return {{"per_size", rows},
          {"successive_ratios", r.successive_ratios},
          {"max_ratio_allowed", r.max_ratio_allowed},
          {"audits", audits},
          {"pass", r.pass}};
}

SizeScalingReport size_scaling(const AlgebraInstance& inst, const DiffTriple& triple, SamplerSpec sampler,
                               const std::vector<std::size_t>& sizes, int per_size, std::uint64_t seed,
                               const AuditOptions& opts) {
  if (sizes.empty() || !std::is_sorted(sizes.begin(), sizes.end()))
    throw Error(ErrorKind::domain, "size_scaling: sizes must be nonempty and ascending");
  SizeScalingReport rep;
  rep.sizes = sizes;
  bool ok = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sampler.size = sizes[i];
    rep.audits.push_back(audit(inst, triple, sampler, per_size, derive_seed(seed, 1000 + i), opts));
    ok = ok && rep.audits.back().pass;
    if (i > 0) {
      const double prev = rep.audits[i - 1].c_hat;
      const double ratio = rep.audits[i].c_hat / prev;
      rep.successive_ratios.push_back(ratio);
      ok = ok && ratio <= rep.max_ratio_allowed;
    }
  }
  rep.pass = ok;
  return rep;
}

json to_json(const RdReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"r", row.r},
                    {"sample", row.sample},
                    {"support", row.support},
                    {"l2", row.l2},
                    {"regular_rep_norm", row.rep_norm},
                    {"bound", row.bound},
                    {"ok", row.ok}});
  return {{"seed", r.seed}, {"extra_radius", r.extra_radius}, {"rows", rows}, {"pass", r.pass}};
}

RdReport rd_ratio_experiment(std::uint64_t seed, int r_max, int samples_per_radius, int extra_radius, int support_cap,
                             unsigned jobs) {
  if (r_max < 1 || samples_per_radius < 1 || extra_radius < 0 || support_cap < 1)
    throw Error(ErrorKind::domain, "rd_ratio_experiment: invalid parameters");
  const auto g = GroupModel::free_group(2);
  RdReport rep;
  rep.seed = seed;
  rep.extra_radius = extra_radius;
  std::vector<std::vector<GroupElement>> spheres;
  for (int r = 1; r <= r_max; ++r) spheres.push_back(sphere(*g, r));
  rep.rows.resize(static_cast<std::size_t>(r_max * samples_per_radius));
  parallel_for(rep.rows.size(), jobs, [&](std::size_t idx) {
    const int r = static_cast<int>(idx) / samples_per_radius + 1;
    const int s = static_cast<int>(idx) % samples_per_radius;
    std::mt19937_64 rng(derive_seed(seed, idx));
    std::normal_distribution<double> normal;
    auto pts = spheres[static_cast<std::size_t>(r - 1)];
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(std::min<std::size_t>(pts.size(), static_cast<std::size_t>(support_cap)));
    std::vector<SectionTerm> terms;
    for (const auto& e : pts) {
      const double re = normal(rng);
      const double im = normal(rng);
      terms.push_back({e, Complex(re, im)});
    }
    const WeightedSection f(g, std::move(terms));
    RdRow row;
    row.r = r;
    row.sample = s;
    row.support = static_cast<int>(f.terms().size());
    row.l2 = l2_norm(f);
    row.rep_norm = regular_rep_norm(f, r + extra_radius);
    row.bound = (r + 1) * row.l2;
    row.ok = row.rep_norm <= row.bound + 1e-9;
    rep.rows[idx] = row;
  });
  rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const RdRow& row) { return row.ok; });
  return rep;
}

}  // namespace kpq
