#include "kpq/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "kpq/audit.hpp"
#include "kpq/domar.hpp"
#include "kpq/error.hpp"
#include "kpq/growth.hpp"
#include "kpq/io.hpp"
#include "kpq/spectral.hpp"

namespace kpq {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kExperiments = {"audit",           "iterate",  "radius", "growth", "calculus",
                                               "approx-identity", "rd-ratio", "norms",  "comb"};

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::config, where + ": object expected");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw Error(ErrorKind::config, where + ": unknown key '" + k + "'");
  }
}

template <class T>
T param(const json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct Csv {
  std::ostringstream out;
  explicit Csv(const std::string& header) { out << header << '\n'; }
  template <class... A>
  void row(const A&... cells) {
    bool first = true;
    ((out << (first ? "" : ",") << cell(cells), first = false), ...);
    out << '\n';
  }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
};

DiffTriple triple_for(const json& p, const AlgebraInstance& inst) {
  if (p.contains("triple")) return triple_from_json(p.at("triple"));
  if (!inst.declared) throw Error(ErrorKind::config, "instance " + inst.name + " declares no triple; give parameters.triple");
  return *inst.declared;
}

SamplerSpec sampler_for(const json& p) { return p.contains("sampler") ? sampler_from_json(p.at("sampler")) : SamplerSpec{}; }

std::uint64_t need_seed(const ExperimentConfig& c) {
  if (!c.seed) throw Error(ErrorKind::config, "experiment " + c.experiment + " needs a seed");
  return *c.seed;
}

// ---------------------------------------------------------------- experiments

Outcome run_audit(const ExperimentConfig& c, unsigned jobs) {
  const auto& p = c.parameters;
  only_keys(p, {"triple", "sampler", "samples", "sizes", "forced_tol", "max_ratio"}, "audit parameters");
  const auto inst = make_instance(c.instance);
  const auto triple = triple_for(p, inst);
  const auto sampler = sampler_for(p);
  const int samples = param(p, "samples", 200);
  AuditOptions opts;
  opts.jobs = jobs;
  opts.forced_tol = param(p, "forced_tol", 1e-9);
  Outcome o;
  o.tolerances = {{"forced_tol", opts.forced_tol}};
  if (p.contains("sizes")) {
    const auto sizes = p.at("sizes").get<std::vector<std::size_t>>();
    const auto rep = size_scaling(inst, triple, sampler, sizes, samples, need_seed(c), opts);
    o.payload = to_json(rep);
    o.tolerances["max_ratio"] = rep.max_ratio_allowed;
    o.pass = rep.pass;
    Csv csv("size,sample,ratio");
    for (const auto& a : rep.audits)
      for (std::size_t i = 0; i < a.ratios.size(); ++i) csv.row(a.sampler.size, i, a.ratios[i]);
    o.csv = csv.out.str();
    return o;
  }
  const auto rep = audit(inst, triple, sampler, samples, need_seed(c), opts);
  o.payload = to_json(rep);
  o.pass = rep.pass;
  Csv csv("sample,ratio");
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) csv.row(i, rep.ratios[i]);
  o.csv = csv.out.str();
  return o;
}

Outcome run_iterate(const ExperimentConfig& c, unsigned jobs) {
  const auto& p = c.parameters;
  only_keys(p, {"triple", "x", "sampler", "c", "n_max", "audit_samples"}, "iterate parameters");
  const auto inst = make_instance(c.instance);
  const auto triple = triple_for(p, inst);
  const auto sampler = sampler_for(p);
  const Element x = p.contains("x") ? element_from_json(p.at("x")) : sample_element(inst, sampler, need_seed(c));
  const auto self = kpq_sample_ratio(inst, triple, x);
  if (!self) throw Error(ErrorKind::config, "iterate: x has a vanishing norm");
  double cval = *self;
  std::string c_source = "self";
  json audit_json = nullptr;
  const int n_max = param(p, "n_max", 3);
  const json cspec = p.contains("c") ? p.at("c") : json("orbit");
  if (cspec.is_number()) {
    cval = cspec.get<double>();
    c_source = "given";
  } else if (cspec == "audit" || cspec == "orbit") {
    if (cspec == "orbit") cval = std::max(cval, orbit_constant(inst, triple, x, n_max));
    if (!p.contains("x") || cspec == "audit") {
      const auto rep = audit(inst, triple, sampler, param(p, "audit_samples", 200), derive_seed(need_seed(c), 77),
                             AuditOptions{jobs, 1e-9});
      cval = std::max(cval, rep.c_hat);
      audit_json = {{"c_hat", rep.c_hat}, {"samples", rep.samples}, {"argmax", rep.argmax}};
    }
    c_source = cspec.get<std::string>();
  } else if (cspec != "self") {
    throw Error(ErrorKind::config, "iterate: c must be a number, \"self\", \"orbit\" or \"audit\"");
  }
  const auto rep = iterated_check(inst, triple, cval, x, n_max);
  Outcome o;
  o.payload = to_json(rep);
  o.payload["c_source"] = c_source;
  o.payload["x_ratio"] = *self;
  o.payload["audit"] = audit_json;
  o.tolerances = {{"slack_floor", "-1e-12 relative"}};
  o.pass = rep.pass;
  Csv csv("n,log_lhs,log_rhs_stated,log_rhs_corrected,slack_stated,slack_corrected");
  for (const auto& r : rep.rows)
    csv.row(r.n, r.log_lhs, r.log_rhs_stated, r.log_rhs_corrected, r.slack_stated, r.slack_corrected);
  o.csv = csv.out.str();
  return o;
}

Outcome run_radius(const ExperimentConfig& c, unsigned jobs) {
  const auto& p = c.parameters;
  only_keys(p, {"samples", "m_max", "tolerance", "sampler"}, "radius parameters");
  const auto inst = make_instance(c.instance);
  RadiusExperimentOptions opts;
  opts.m_max = param(p, "m_max", 14);
  if (p.contains("tolerance")) opts.tolerance = p.at("tolerance").get<double>();
  opts.sampler = sampler_for(p);
  opts.jobs = jobs;
  const auto rep = radius_equality_experiment(inst, param(p, "samples", 25), need_seed(c), opts);
  Outcome o;
  o.payload = to_json(rep);
  o.tolerances = {{"gap", rep.tolerance}};
  o.pass = rep.pass;
  Csv csv("sample,m,value,extrapolated,oracle,gap");
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    for (const auto& q : s.sequence)
      csv.row(i, q.m, q.value, s.extrapolated, s.oracle.value_or(NAN), s.gap.value_or(NAN));
  }
  o.csv = csv.out.str();
  return o;
}

/// sum_n nu(n) |u(t x)_n| for x = c0 delta_0 + c delta_1 + conj(c) delta_{-1} on Z.
double bessel_oracle(const WeightedSection& f, const AlgebraInstance& inst, double t) {
  const double c0 = f.at(GroupElement{0}).real();
  const double x = 2.0 * std::abs(f.at(GroupElement{1})) * std::abs(t);
  double s = std::abs(std::polar(1.0, t * c0) * std::cyl_bessel_j(0.0, x) - 1.0);
  for (int n = 1;; ++n) {
    const double term = 2.0 * inst.weight->at_length(n) * std::abs(std::cyl_bessel_j(static_cast<double>(n), x));
    s += term;
    if (n > x + 20 && term < 1e-18 * s) break;
  }
  return s;
}

Outcome run_growth(const ExperimentConfig& c, unsigned jobs) {
  const auto& p = c.parameters;
  only_keys(p, {"triple", "x", "t_max", "points", "slack", "oracle", "oracle_tol", "asymp_n_max", "gamma"},
            "growth parameters");
  const auto inst = make_instance(c.instance);
  const auto triple = triple_for(p, inst);
  Element x;
  if (p.contains("x")) {
    x = element_from_json(p.at("x"));
  } else {
    if (!inst.group || inst.group->family() != GroupFamily::lattice || inst.group->parameter() != 1)
      throw Error(ErrorKind::config, "growth: parameters.x is required off l^1(Z)");
    x = WeightedSection(inst.group, {{GroupElement{1}, 1.0}, {GroupElement{-1}, 1.0}});
  }
  GrowthOptions opts;
  opts.slack = param(p, "slack", 0.1);
  opts.jobs = jobs;
  const double oracle_tol = param(p, "oracle_tol", 1e-6);
  const auto* sec = std::get_if<WeightedSection>(&x);
  const bool bessel_ok = sec && inst.weight && sec->group()->family() == GroupFamily::lattice &&
                         sec->group()->parameter() == 1 && sec->support_radius() <= 1;
  const bool want_oracle = param(p, "oracle", bessel_ok);
  if (want_oracle) {
    if (!bessel_ok) throw Error(ErrorKind::config, "growth: the Bessel oracle needs a Z-section supported on {-1,0,1}");
    opts.oracle = [&](double t) { return bessel_oracle(*sec, inst, t); };
  }
  const auto trace = growth_trace(x, inst, triple, param(p, "t_max", 30.0), param(p, "points", 24), opts);
  Outcome o;
  o.payload = {{"trace", to_json(trace)}};
  o.tolerances = {{"slack", opts.slack}, {"fit_r2", 0.98}};
  bool ok = trace.pass && trace.reliable;
  if (want_oracle) {
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.norms.size(); ++i)
      worst = std::max(worst, std::abs(trace.norms[i] - trace.oracle_norms[i]) / trace.oracle_norms[i]);
    o.payload["oracle_rel_error"] = worst;
    o.tolerances["oracle_rel"] = oracle_tol;
    ok = ok && worst <= oracle_tol;
  }
  const int n_max = param(p, "asymp_n_max", 256);
  if (n_max > 0) {
    std::optional<double> gamma;
    if (p.contains("gamma")) gamma = p.at("gamma").get<double>();
    const auto orbit = orbit_sequence(x, inst, triple, n_max, gamma, opts.u, jobs);
    const auto asymp = asymp_check([&](int n) { return orbit.a[static_cast<std::size_t>(n - 1)]; }, triple.k,
                                   orbit.gamma, n_max);
    o.payload["orbit"] = {{"c", orbit.c}, {"gamma", orbit.gamma}, {"D", orbit.d}, {"u_norms", orbit.u_norms}};
    o.payload["asymp"] = to_json(asymp);
    ok = ok && asymp.pass;
  }
  o.pass = ok;
  Csv csv("t,norm_A,log_norm_A,oracle");
  for (std::size_t i = 0; i < trace.t_grid.size(); ++i)
    csv.row(trace.t_grid[i], trace.norms[i], std::log(trace.norms[i]),
            trace.oracle_norms.empty() ? NAN : trace.oracle_norms[i]);
  o.csv = csv.out.str();
  return o;
}

std::vector<FourierProfile> profiles_from(const json& p, const char* key, std::vector<FourierProfile> fallback) {
  if (!p.contains(key)) return fallback;
  std::vector<FourierProfile> out;
  for (const auto& j : p.at(key)) out.push_back(FourierProfile::from_json(j));
  return out;
}

Outcome run_calculus(const ExperimentConfig& c, unsigned) {
  const auto& p = c.parameters;
  only_keys(p, {"profiles", "x", "tol", "samples", "dim_min", "dim_max", "hausdorff_tol", "richardson"},
            "calculus parameters");
  const auto inst = make_instance(c.instance.empty() ? "cstar" : c.instance);
  const auto profiles = profiles_from(p, "profiles", {FourierProfile::gaussian(1.0), FourierProfile::hat(2.0)});
  const double tol = param(p, "tol", 1e-7);
  const double htol = param(p, "hausdorff_tol", 1e-6);
  FuncCalcOptions fopts;
  fopts.richardson = param(p, "richardson", false);

  std::vector<Element> xs;
  if (p.contains("x")) {
    xs.push_back(element_from_json(p.at("x")));
  } else {
    const std::uint64_t seed = need_seed(c);
    const int samples = param(p, "samples", 50);
    const int dmin = param(p, "dim_min", 2);
    const int dmax = param(p, "dim_max", 16);
    if (dmin < 1 || dmax < dmin) throw Error(ErrorKind::config, "calculus: need 1 <= dim_min <= dim_max");
    for (int i = 0; i < samples; ++i) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      SamplerSpec s;
      s.ensemble = "gaussian";
      s.self_adjoint = true;
      s.size = static_cast<std::size_t>(dmin + static_cast<int>(rng() % static_cast<std::uint64_t>(dmax - dmin + 1)));
      xs.push_back(sample_element(inst, s, rng()));
    }
  }

  Outcome o;
  o.tolerances = {{"tol", tol}, {"oracle", tol + 1e-9}, {"hausdorff", htol}, {"hermitian", 1e-9}};
  json cases = json::array();
  Csv csv("case,profile,dim,oracle_diff,hausdorff,nodes,cutoff,certified");
  bool ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      const auto& f = profiles[k];
      const auto r = func_calc(f, xs[i], inst, tol, fopts);
      json cj = to_json(r);
      cj["case"] = i;
      cj["profile"] = f.to_json();
      bool case_ok = r.certified;
      double oracle = NAN, haus = NAN;
      std::size_t dim = 0;
      if (const auto* a = std::get_if<ComplexMatrix>(&xs[i])) {
        dim = a->dim();
        const auto& fx = std::get<ComplexMatrix>(r.value);
        const auto eig = hermitian_eig(*a);
        oracle = operator_norm(fx - apply_spectral(eig, [&](double l) { return f.f(l); }));
        std::vector<Complex> lhs = spectrum_b(fx);
        double h = 0.0;
        for (double l : eig.eigenvalues) {
          double best = INFINITY;
          for (const auto& z : lhs) best = std::min(best, std::abs(z - f.f(l)));
          h = std::max(h, best);
        }
        for (const auto& z : lhs) {
          double best = INFINITY;
          for (double l : eig.eigenvalues) best = std::min(best, std::abs(z - f.f(l)));
          h = std::max(h, best);
        }
        haus = h;
        cj["oracle_diff"] = oracle;
        cj["hausdorff"] = haus;
        case_ok = case_ok && oracle <= tol + 1e-9 && haus <= htol;
        if (f.is_real_valued()) {
          const double herm = operator_norm(fx - adjoint(fx));
          cj["hermitian_defect"] = herm;
          case_ok = case_ok && herm <= 1e-9;
        }
      }
      cj["pass"] = case_ok;
      ok = ok && case_ok;
      cases.push_back(cj);
      csv.row(i, f.kind_name(), dim, oracle, haus, r.nodes, r.cutoff, r.certified);
    }
  }
  o.payload = {{"cases", cases}};
  o.pass = ok;
  o.csv = csv.out.str();
  return o;
}

Outcome run_approx_identity(const ExperimentConfig& c, unsigned) {
  const auto& p = c.parameters;
  only_keys(p, {"profile", "a", "window", "support", "n_grid", "tol"}, "approx-identity parameters");
  const auto inst = make_instance(c.instance.empty() ? "jaffard:2" : c.instance);
  const auto f = p.contains("profile") ? FourierProfile::from_json(p.at("profile")) : FourierProfile::unit_at_one(4.0);
  ComplexMatrix a;
  if (p.contains("a")) {
    a = matrix_from_json(p.at("a"));
  } else {
    const int window = param(p, "window", 32);
    const int support = param(p, "support", 8);
    if (window < 1 || support < 0 || support > window)
      throw Error(ErrorKind::config, "approx-identity: need 0 <= support <= window");
    std::mt19937_64 rng(derive_seed(need_seed(c), 0));
    std::normal_distribution<double> normal;
    a = ComplexMatrix(static_cast<std::size_t>(window));
    for (int i = 0; i < support; ++i)
      for (int j = 0; j < support; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Complex(re, im) / std::pow(1.0 + std::abs(i - j), 3.0);
      }
  }
  const auto grid = param(p, "n_grid", std::vector<int>{4, 8, 16, 32});
  const double tol = param(p, "tol", 1e-6);
  const auto rep = approx_identity_experiment(inst, f, a, grid, tol);
  Outcome o;
  o.payload = to_json(rep);
  o.payload["profile"] = f.to_json();
  o.tolerances = {{"tol", tol}, {"f0_f1", 1e-10}};
  o.pass = rep.pass;
  Csv csv("N,residual,deviation");
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i) csv.row(rep.n_grid[i], rep.residuals[i], rep.deviations[i]);
  o.csv = csv.out.str();
  return o;
}

Outcome run_rd(const ExperimentConfig& c, unsigned jobs) {
  const auto& p = c.parameters;
  only_keys(p, {"r_max", "samples_per_radius", "extra_radius", "support_cap"}, "rd-ratio parameters");
  const auto rep = rd_ratio_experiment(need_seed(c), param(p, "r_max", 5), param(p, "samples_per_radius", 3),
                                       param(p, "extra_radius", 6), param(p, "support_cap", 24), jobs);
  Outcome o;
  o.payload = to_json(rep);
  o.tolerances = {{"absolute", 1e-9}};
  o.pass = rep.pass;
  Csv csv("r,sample,support,l2,regular_rep_norm,bound");
  for (const auto& r : rep.rows) csv.row(r.r, r.sample, r.support, r.l2, r.rep_norm, r.bound);
  o.csv = csv.out.str();
  return o;
}

Outcome run_norms(const ExperimentConfig& c, unsigned) {
  const auto& p = c.parameters;
  only_keys(p, {"x", "triple"}, "norms parameters");
  if (!p.contains("x")) throw Error(ErrorKind::config, "norms: parameters.x is required");
  const auto inst = make_instance(c.instance);
  const auto x = element_from_json(p.at("x"));
  inst.check(x);
  Outcome o;
  Csv csv("quantity,value");
  const double na = inst.a_norm(x);
  const double nb = inst.b_norm(x);
  o.payload = {{"carrier", describe(x)}, {"norm_A", na}, {"norm_B", nb}, {"metadata", inst.metadata}};
  csv.row("norm_A", na);
  csv.row("norm_B", nb);
  if (const auto r = inst.b_radius(x)) {
    o.payload["radius_B"] = *r;
    csv.row("radius_B", *r);
  }
  if (p.contains("triple") || inst.declared) {
    const auto t = triple_for(p, inst);
    const auto ratio = kpq_sample_ratio(inst, t, x);
    o.payload["triple"] = to_json(t);
    o.payload["ratio"] = ratio ? json(*ratio) : json(nullptr);
    if (ratio) csv.row("ratio", *ratio);
  }
  o.pass = true;
  o.csv = csv.out.str();
  return o;
}

Outcome run_comb(const ExperimentConfig& c, unsigned) {
  const auto& p = c.parameters;
  only_keys(p, {"k_max"}, "comb parameters");
  const int k_max = param(p, "k_max", 60);
  if (k_max < 2 || k_max > 60) throw Error(ErrorKind::config, "comb: k_max must lie in [2, 60]");
  Outcome o;
  json rows = json::array();
  Csv csv("k,lhs,rhs");
  bool ok = true;
  for (int k = 2; k <= k_max; ++k) {
    const auto [lhs, rhs] = comb_identity(k);
    rows.push_back({{"k", k}, {"lhs", lhs}, {"rhs", rhs}});
    csv.row(k, std::to_string(lhs), std::to_string(rhs));
    ok = ok && lhs == rhs;
  }
  o.payload = {{"rows", rows}};
  o.tolerances = {{"exact", true}};
  o.pass = ok;
  o.csv = csv.out.str();
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::config, "cannot write " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot read " + path.string());
  return json::parse(in);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  only_keys(j, {"schema_version", "experiment", "instance", "parameters", "seed", "output_dir"}, "config");
  ExperimentConfig c;
  if (!j.contains("schema_version")) throw Error(ErrorKind::config, "config: schema_version is required");
  c.schema_version = j.at("schema_version").get<int>();
  if (c.schema_version != kSchemaVersion)
    throw Error(ErrorKind::config, "config: unsupported schema_version " + std::to_string(c.schema_version));
  if (!j.contains("experiment")) throw Error(ErrorKind::config, "config: experiment is required");
  c.experiment = j.at("experiment").get<std::string>();
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end())
    throw Error(ErrorKind::config, "config: unknown experiment '" + c.experiment + "'");
  c.instance = j.value("instance", std::string{});
  if (j.contains("parameters")) {
    c.parameters = j.at("parameters");
    if (!c.parameters.is_object()) throw Error(ErrorKind::config, "config: parameters must be an object");
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer()) throw Error(ErrorKind::config, "config: seed must be an integer");
    c.seed = s.is_number_unsigned() ? s.get<std::uint64_t>() : static_cast<std::uint64_t>(s.get<std::int64_t>());
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  const bool needs_instance = c.experiment != "comb" && c.experiment != "rd-ratio" && c.experiment != "calculus" &&
                              c.experiment != "approx-identity";
  if (needs_instance && c.instance.empty()) throw Error(ErrorKind::config, "config: instance is required");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j{{"schema_version", c.schema_version}, {"experiment", c.experiment}, {"parameters", c.parameters}};
  if (!c.instance.empty()) j["instance"] = c.instance;
  if (c.seed) j["seed"] = *c.seed;
  if (c.output_dir) j["output_dir"] = *c.output_dir;
  return j;
}

bool is_stochastic(const ExperimentConfig& c) {
  const auto& e = c.experiment;
  if (e == "audit" || e == "radius" || e == "rd-ratio") return true;
  if (e == "iterate") return !c.parameters.contains("x") || c.parameters.value("c", json("orbit")) == "audit";
  if (e == "calculus") return !c.parameters.contains("x");
  if (e == "approx-identity") return !c.parameters.contains("a");
  return false;
}

Outcome execute(const ExperimentConfig& c, unsigned jobs) {
  if (is_stochastic(c) && !c.seed) throw Error(ErrorKind::config, "config: seed is mandatory for " + c.experiment);
  jobs = std::max(1u, jobs);
  try {
    if (c.experiment == "audit") return run_audit(c, jobs);
    if (c.experiment == "iterate") return run_iterate(c, jobs);
    if (c.experiment == "radius") return run_radius(c, jobs);
    if (c.experiment == "growth") return run_growth(c, jobs);
    if (c.experiment == "calculus") return run_calculus(c, jobs);
    if (c.experiment == "approx-identity") return run_approx_identity(c, jobs);
    if (c.experiment == "rd-ratio") return run_rd(c, jobs);
    if (c.experiment == "norms") return run_norms(c, jobs);
    if (c.experiment == "comb") return run_comb(c, jobs);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config: ") + e.what());
  }
  throw Error(ErrorKind::config, "config: unknown experiment '" + c.experiment + "'");
}

std::string digest(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

RunResult run(const json& config, const RunOverrides& overrides) {
  RunResult res;
  try {
    auto c = parse_config(config);
    if (overrides.seed) c.seed = overrides.seed;
    if (overrides.out) c.output_dir = overrides.out;
    if (!c.output_dir) throw Error(ErrorKind::config, "config: no output_dir and no --out given");
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = execute(c, overrides.jobs);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json resolved = to_json(c);
    resolved.erase("output_dir");
    json report{{"schema_version", kSchemaVersion},
                {"config", resolved},
                {"config_digest", digest(resolved)},
                {"module_versions", {{"kpq", "0.3.0"}, {"report", kSchemaVersion}}},
                {"tolerances", outcome.tolerances},
                {"payload", outcome.payload},
                {"digest", digest(outcome.payload)},
                {"verdict", outcome.pass ? "PASS" : "FAIL"},
                {"timing", {{"seconds", seconds}, {"jobs", overrides.jobs}}}};

    const fs::path dir = fs::absolute(*c.output_dir);
    fs::path tmp = dir;
    tmp += ".partial";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    write_text(tmp / "report.json", report.dump(2) + "\n");
    write_text(tmp / "tables.csv", outcome.csv);
    fs::remove_all(dir);
    if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
    fs::rename(tmp, dir);

    res.output_dir = dir;
    res.report = std::move(report);
    res.exit_code = outcome.pass ? exit_pass : exit_fail;
    res.message = std::string(outcome.pass ? "PASS" : "FAIL") + " " + c.experiment + " -> " + dir.string();
  } catch (const json::exception& e) {
    res.exit_code = exit_error;
    res.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    res.exit_code = exit_error;
    res.message = std::string("error: ") + e.what();
  }
  return res;
}

RunResult run_file(const fs::path& config_path, const RunOverrides& overrides) {
  try {
    return run(read_json_file(config_path), overrides);
  } catch (const std::exception& e) {
    RunResult res;
    res.message = std::string("config error: ") + e.what();
    return res;
  }
}

RunResult replay(const fs::path& report_path, unsigned jobs) {
  RunResult res;
  try {
    const auto report = read_json_file(report_path);
    if (!report.contains("config") || !report.contains("payload"))
      throw Error(ErrorKind::config, "replay: report lacks config or payload");
    const auto c = parse_config(report.at("config"));
    if (is_stochastic(c) && !c.seed) throw Error(ErrorKind::config, "replay: report config carries no seed");
    const auto outcome = execute(c, jobs);
    const std::string fresh = digest(outcome.payload);
    const std::string stored = digest(report.at("payload"));
    const bool same = fresh == stored && report.value("digest", std::string{}) == stored;
    res.report = {{"fresh", fresh}, {"stored", stored}, {"recorded", report.value("digest", std::string{})}};
    res.exit_code = same ? exit_pass : exit_fail;
    res.message = same ? "replay identical (" + fresh + ")"
                       : "replay mismatch: fresh " + fresh + ", stored " + stored;
  } catch (const std::exception& e) {
    res.exit_code = exit_error;
    res.message = std::string("replay error: ") + e.what();
  }
  return res;
}

std::string list_instances() {
  std::ostringstream out;
  for (const auto& e : registry_entries()) out << std::left << std::setw(28) << e.pattern << "  " << e.description << '\n';
  return out.str();
}

}  // namespace kpq
