#include "kpq/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kpq/error.hpp"

namespace kpq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr double kGLx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class Fn>
Complex gl_panel(double lo, double hi, Fn&& fn) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  Complex s = 0.0;
  for (int i = 0; i < 8; ++i) s += kGLw[i] * (fn(c - h * kGLx[i]) + fn(c + h * kGLx[i]));
  return s * h;
}

/// int_a^b e^{R t} dt for 0 <= a <= b.
double exp_integral(double a, double b, double r) {
  if (b <= a) return 0.0;
  if (r == 0.0) return b - a;
  return (std::exp(r * b) - std::exp(r * a)) / r;
}

}  // namespace

enum class ProductForm { none, gauss_box, numeric };

struct FourierProfile::Node {
  Kind kind = Kind::gaussian;
  double sigma = 1.0;
  double half = 1.0;
  double amp = 0.0;
  std::vector<double> grid;
  std::vector<Complex> values;
  std::optional<TailSpec> tail;
  std::vector<Term> terms;
  std::shared_ptr<const Node> a, b;
  ProductForm form = ProductForm::none;
  nlohmann::json source;
};

FourierProfile::FourierProfile() : node_(std::make_shared<Node>()) {}

FourierProfile FourierProfile::gaussian(double sigma, double amplitude) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::domain, "gaussian profile: sigma must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::gaussian;
  n->sigma = sigma;
  n->amp = amplitude;
  return FourierProfile(n);
}

FourierProfile FourierProfile::box(double half_width, double amplitude) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw Error(ErrorKind::domain, "box profile: T must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::box;
  n->half = half_width;
  n->amp = amplitude;
  return FourierProfile(n);
}

FourierProfile FourierProfile::hat(double half_width, double amplitude) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw Error(ErrorKind::domain, "hat profile: T must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::hat;
  n->half = half_width;
  n->amp = amplitude;
  return FourierProfile(n);
}

FourierProfile FourierProfile::tabulated(std::vector<double> grid, std::vector<Complex> values, std::optional<TailSpec> tail) {
  if (!tail) throw Error(ErrorKind::domain, "tabulated profile: a tail bound is required");
  if (grid.size() < 2 || grid.size() != values.size())
    throw Error(ErrorKind::domain, "tabulated profile: grid and values must have equal length >= 2");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::domain, "tabulated profile: grid must be strictly increasing");
  if (std::abs(grid.front() + grid.back()) > 1e-12 * std::abs(grid.back()))
    throw Error(ErrorKind::domain, "tabulated profile: grid must be symmetric");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(ErrorKind::domain, "tabulated profile: non-finite value");
  if (!(tail->prefactor >= 0.0) || !(tail->rate > 0.0))
    throw Error(ErrorKind::domain, "tabulated profile: tail needs prefactor >= 0 and rate > 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::tabulated;
  n->grid = std::move(grid);
  n->values = std::move(values);
  n->tail = tail;
  n->half = n->grid.back();
  return FourierProfile(n);
}

FourierProfile FourierProfile::sum(std::vector<Term> terms) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->terms = std::move(terms);
  return FourierProfile(n);
}

FourierProfile FourierProfile::product(const FourierProfile& f, const FourierProfile& g) {
  const Node& x = *f.node_;
  const Node& y = *g.node_;
  if (x.kind == Kind::gaussian && y.kind == Kind::gaussian) {
    const double s2 = x.sigma * x.sigma + y.sigma * y.sigma;
    const double amp = x.amp * y.amp * x.sigma * y.sigma / (2.0 * std::sqrt(kPi) * std::sqrt(s2));
    return gaussian(std::sqrt(s2), amp);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  if (x.kind == Kind::gaussian && y.kind == Kind::box) {
    n->a = f.node_;
    n->b = g.node_;
    n->form = ProductForm::gauss_box;
  } else if (x.kind == Kind::box && y.kind == Kind::gaussian) {
    n->a = g.node_;
    n->b = f.node_;
    n->form = ProductForm::gauss_box;
  } else {
    n->a = f.node_;
    n->b = g.node_;
    n->form = ProductForm::numeric;
  }
  return FourierProfile(n);
}

FourierProfile FourierProfile::unit_at_one(double sigma) {
  const auto g = gaussian(sigma);
  const double g0 = g.f(0.0).real();
  const double g1 = g.f(1.0).real();
  // c1 g(1) + c2 g(0) = 0,  c1 g(0) + c2 g(1) = 1
  const double det = g1 * g1 - g0 * g0;
  const double c1 = -g0 / det;
  const double c2 = g1 / det;
  return sum({Term{c1, 1.0, g}, Term{c2, 0.0, g}});
}

FourierProfile::Kind FourierProfile::kind() const { return node_->kind; }

std::string FourierProfile::kind_name() const {
  switch (node_->kind) {
    case Kind::gaussian:
      return "gaussian";
    case Kind::box:
      return "box";
    case Kind::hat:
      return "hat";
    case Kind::tabulated:
      return "tabulated";
    case Kind::sum:
      return "sum";
    case Kind::product:
      return "product";
  }
  return "?";
}

namespace {

Complex node_fhat(const FourierProfile::Node& n, double t);
double node_tail(const FourierProfile::Node& n, double cutoff, double rate);
double node_support(const FourierProfile::Node& n);
void node_breakpoints(const FourierProfile::Node& n, std::vector<double>& out);

/// Half-width beyond which the mass of |fhat| is below rel * total.
double effective_support(const FourierProfile::Node& n, double rel) {
  const double sup = node_support(n);
  if (std::isfinite(sup)) return sup;
  const double total = node_tail(n, 0.0, 0.0);
  double l = 1.0;
  while (node_tail(n, l, 0.0) > rel * total && l < 1e8) l *= 2.0;
  return l;
}

Complex numeric_convolution(const FourierProfile::Node& a, const FourierProfile::Node& b, double t) {
  const double la = effective_support(a, 1e-17);
  const double lb = effective_support(b, 1e-17);
  const double lo = std::max(-la, t - lb);
  const double hi = std::min(la, t + lb);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  std::vector<double> ba, bb;
  node_breakpoints(a, ba);
  node_breakpoints(b, bb);
  for (double p : ba)
    if (p > lo && p < hi) cuts.push_back(p);
  for (double p : bb)
    if (t - p > lo && t - p < hi) cuts.push_back(t - p);
  std::sort(cuts.begin(), cuts.end());
  Complex s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double w = cuts[i + 1] - cuts[i];
    if (w <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(w / 0.125)));
    for (int k = 0; k < panels; ++k) {
      const double p0 = cuts[i] + w * k / panels;
      const double p1 = cuts[i] + w * (k + 1) / panels;
      s += gl_panel(p0, p1, [&](double sv) { return node_fhat(a, sv) * node_fhat(b, t - sv); });
    }
  }
  return s / (2.0 * kPi);
}

Complex node_fhat(const FourierProfile::Node& n, double t) {
  using K = FourierProfile::Kind;
  switch (n.kind) {
    case K::gaussian:
      return n.amp * std::exp(-(t * t) / (n.sigma * n.sigma));
    case K::box:
      return std::abs(t) <= n.half ? Complex(n.amp) : Complex(0.0);
    case K::hat:
      return std::abs(t) < n.half ? Complex(n.amp * (1.0 - std::abs(t) / n.half)) : Complex(0.0);
    case K::tabulated: {
      if (t < n.grid.front() || t > n.grid.back()) return 0.0;
      const auto it = std::upper_bound(n.grid.begin(), n.grid.end(), t);
      std::size_t i = static_cast<std::size_t>(it - n.grid.begin());
      if (i == n.grid.size()) return n.values.back();
      const double w = (t - n.grid[i - 1]) / (n.grid[i] - n.grid[i - 1]);
      return (1.0 - w) * n.values[i - 1] + w * n.values[i];
    }
    case K::sum: {
      Complex s = 0.0;
      for (const auto& term : n.terms)
        s += term.weight * std::polar(1.0, -term.shift * t) * term.profile.fhat(t);
      return s;
    }
    case K::product: {
      if (n.form == ProductForm::gauss_box) {
        const double sg = n.a->sigma;
        const double tb = n.b->half;
        return n.a->amp * n.b->amp / (2.0 * kPi) * (sg * std::sqrt(kPi) / 2.0) *
               (std::erf((t + tb) / sg) - std::erf((t - tb) / sg));
      }
      return numeric_convolution(*n.a, *n.b, t);
    }
  }
  return 0.0;
}

Complex node_f(const FourierProfile::Node& n, double x) {
  using K = FourierProfile::Kind;
  switch (n.kind) {
    case K::gaussian:
      return n.amp * n.sigma / (2.0 * std::sqrt(kPi)) * std::exp(-n.sigma * n.sigma * x * x / 4.0);
    case K::box:
      if (std::abs(x) < 1e-8) return n.amp * n.half / kPi * (1.0 - n.half * n.half * x * x / 6.0);
      return n.amp * std::sin(n.half * x) / (kPi * x);
    case K::hat: {
      const double u = 0.5 * n.half * x;
      const double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
      return n.amp * n.half / (2.0 * kPi) * sinc * sinc;
    }
    case K::tabulated: {
      Complex s = 0.0;
      for (std::size_t i = 0; i + 1 < n.grid.size(); ++i)
        s += gl_panel(n.grid[i], n.grid[i + 1], [&](double t) { return node_fhat(n, t) * std::polar(1.0, t * x); });
      return s / (2.0 * kPi);
    }
    case K::sum: {
      Complex s = 0.0;
      for (const auto& term : n.terms) s += term.weight * term.profile.f(x - term.shift);
      return s;
    }
    case K::product:
      return node_f(*n.a, x) * node_f(*n.b, x);
  }
  return 0.0;
}

double node_tail(const FourierProfile::Node& n, double cutoff, double rate) {
  using K = FourierProfile::Kind;
  const double t0 = std::max(cutoff, 0.0);
  switch (n.kind) {
    case K::gaussian: {
      const double s = n.sigma;
      const double shift = rate * s * s / 2.0;
      const double log_pref = rate * rate * s * s / 4.0;
      const double e = std::erfc((t0 - shift) / s);
      if (log_pref > 700.0) return kInf;
      return std::abs(n.amp) * 2.0 * std::exp(log_pref) * (s * std::sqrt(kPi) / 2.0) * e;
    }
    case K::box:
      return std::abs(n.amp) * 2.0 * exp_integral(t0, n.half, rate);
    case K::hat:
      if (t0 >= n.half) return 0.0;
      return std::abs(n.amp) * (1.0 - t0 / n.half) * 2.0 * exp_integral(t0, n.half, rate);
    case K::tabulated: {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < n.grid.size(); ++i) {
        const double lo = n.grid[i];
        const double hi = n.grid[i + 1];
        const double vmax = std::max(std::abs(n.values[i]), std::abs(n.values[i + 1]));
        // |t| in [lo, hi] intersected with |t| > t0, each side counted once
        const double alo = lo >= 0 ? lo : -hi;
        const double ahi = lo >= 0 ? hi : -lo;
        s += vmax * exp_integral(std::max(alo, t0), ahi, rate);
      }
      const double l = std::max(t0, n.grid.back());
      if (n.tail->prefactor == 0.0) return s;
      if (rate >= n.tail->rate) return kInf;
      const double d = n.tail->rate - rate;
      return s + n.tail->prefactor * 2.0 * std::exp(-d * l) / d;
    }
    case K::sum: {
      double s = 0.0;
      for (const auto& term : n.terms) s += std::abs(term.weight) * term.profile.tail(cutoff, rate);
      return s;
    }
    case K::product: {
      if (cutoff <= 0.0) return node_tail(*n.a, 0.0, rate) * node_tail(*n.b, 0.0, rate) / (2.0 * kPi);
      const double ma = node_tail(*n.a, 0.0, rate);
      const double mb = node_tail(*n.b, 0.0, rate);
      return (node_tail(*n.a, cutoff / 2.0, rate) * mb + ma * node_tail(*n.b, cutoff / 2.0, rate)) / (2.0 * kPi);
    }
  }
  return kInf;
}

double node_support(const FourierProfile::Node& n) {
  using K = FourierProfile::Kind;
  switch (n.kind) {
    case K::gaussian:
      return n.amp == 0.0 ? 0.0 : kInf;
    case K::box:
    case K::hat:
      return n.half;
    case K::tabulated:
      return n.tail->prefactor == 0.0 ? n.grid.back() : kInf;
    case K::sum: {
      double s = 0.0;
      for (const auto& term : n.terms) s = std::max(s, term.profile.support());
      return s;
    }
    case K::product:
      return node_support(*n.a) + node_support(*n.b);
  }
  return kInf;
}

void node_breakpoints(const FourierProfile::Node& n, std::vector<double>& out) {
  using K = FourierProfile::Kind;
  switch (n.kind) {
    case K::gaussian:
      return;
    case K::box:
      out.insert(out.end(), {-n.half, n.half});
      return;
    case K::hat:
      out.insert(out.end(), {-n.half, 0.0, n.half});
      return;
    case K::tabulated:
      out.insert(out.end(), n.grid.begin(), n.grid.end());
      return;
    case K::sum:
      for (const auto& term : n.terms) {
        const auto b = term.profile.breakpoints();
        out.insert(out.end(), b.begin(), b.end());
      }
      return;
    case K::product: {
      if (n.form == ProductForm::gauss_box) return;
      std::vector<double> ba, bb;
      node_breakpoints(*n.a, ba);
      node_breakpoints(*n.b, bb);
      if (ba.empty()) ba.push_back(0.0);
      if (bb.empty()) bb.push_back(0.0);
      for (double x : ba)
        for (double y : bb) out.push_back(x + y);
      return;
    }
  }
}

/// Distance from 0 to the interval [lo, hi].
double dist0(double lo, double hi) { return lo > 0 ? lo : (hi < 0 ? -hi : 0.0); }

std::optional<double> node_piece_bound(const FourierProfile::Node& n, double lo, double hi, double b) {
  using K = FourierProfile::Kind;
  const double mid = 0.5 * (lo + hi);
  const double umax = std::max(std::abs(lo), std::abs(hi));
  switch (n.kind) {
    case K::gaussian: {
      const double d = dist0(lo, hi);
      return std::abs(n.amp) * std::exp((b * b - d * d) / (n.sigma * n.sigma));
    }
    case K::box:
      return std::abs(mid) < n.half ? std::abs(n.amp) : 0.0;
    case K::hat:
      return std::abs(mid) < n.half ? std::abs(n.amp) * (1.0 + (umax + b) / n.half) : 0.0;
    case K::tabulated: {
      double best = 0.0;
      for (std::size_t i = 0; i + 1 < n.grid.size(); ++i) {
        if (n.grid[i + 1] <= lo || n.grid[i] >= hi) continue;
        const double slope = std::abs(n.values[i + 1] - n.values[i]) / (n.grid[i + 1] - n.grid[i]);
        const double reach = std::max(std::abs(lo - n.grid[i]), std::abs(hi - n.grid[i])) + b;
        best = std::max(best, std::abs(n.values[i]) + slope * reach);
      }
      return best;
    }
    case K::sum: {
      double s = 0.0;
      for (const auto& term : n.terms) {
        const auto c = term.profile.piece_bound(lo, hi, b);
        if (!c) return std::nullopt;
        s += std::abs(term.weight) * std::exp(std::abs(term.shift) * b) * *c;
      }
      return s;
    }
    case K::product: {
      if (n.form != ProductForm::gauss_box) return std::nullopt;
      const double sg = n.a->sigma;
      const double tb = n.b->half;
      // distance between [lo, hi] and [-T, T]
      const double d = lo > tb ? lo - tb : (hi < -tb ? -tb - hi : 0.0);
      return std::abs(n.a->amp * n.b->amp) / (2.0 * kPi) * 2.0 * tb * std::exp((b * b - d * d) / (sg * sg));
    }
  }
  return std::nullopt;
}

}  // namespace

Complex FourierProfile::fhat(double t) const { return node_fhat(*node_, t); }
Complex FourierProfile::f(double x) const { return node_f(*node_, x); }
double FourierProfile::tail(double cutoff, double rate) const { return node_tail(*node_, cutoff, rate); }
double FourierProfile::support() const { return node_support(*node_); }

std::vector<double> FourierProfile::breakpoints() const {
  std::vector<double> out;
  node_breakpoints(*node_, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<double> FourierProfile::piece_bound(double lo, double hi, double b) const {
  return node_piece_bound(*node_, lo, hi, b);
}

bool FourierProfile::is_real_valued() const {
  std::vector<double> probes = breakpoints();
  const double l = std::isfinite(support()) ? support() : 8.0;
  for (int i = 1; i <= 64; ++i) probes.push_back(l * i / 64.0 * 0.999);
  double scale = 0.0;
  for (double t : probes) scale = std::max(scale, std::abs(fhat(t)));
  for (double t : probes)
    if (std::abs(fhat(-t) - std::conj(fhat(t))) > 1e-12 * std::max(scale, 1e-300)) return false;
  return true;
}

nlohmann::json FourierProfile::to_json() const {
  using nlohmann::json;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::gaussian:
      return {{"kind", "gaussian"}, {"sigma", n.sigma}, {"amplitude", n.amp}};
    case Kind::box:
      return {{"kind", "box"}, {"T", n.half}, {"amplitude", n.amp}};
    case Kind::hat:
      return {{"kind", "hat"}, {"T", n.half}, {"amplitude", n.amp}};
    case Kind::tabulated: {
      json vals = json::array();
      for (const auto& v : n.values) vals.push_back({v.real(), v.imag()});
      return {{"kind", "tabulated"},
              {"grid", n.grid},
              {"values", vals},
              {"tail", {{"prefactor", n.tail->prefactor}, {"rate", n.tail->rate}}}};
    }
    case Kind::sum: {
      json terms = json::array();
      for (const auto& t : n.terms)
        terms.push_back({{"weight", {t.weight.real(), t.weight.imag()}}, {"shift", t.shift}, {"profile", t.profile.to_json()}});
      return {{"kind", "sum"}, {"terms", terms}};
    }
    case Kind::product:
      return {{"kind", "product"},
              {"factors", {FourierProfile(n.a).to_json(), FourierProfile(n.b).to_json()}}};
  }
  return nullptr;
}

namespace {

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw Error(ErrorKind::config, "profile: unknown key '" + k + "'");
  }
}

Complex complex_from(const nlohmann::json& v) {
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  return {v.get<double>(), 0.0};
}

}  // namespace

FourierProfile FourierProfile::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorKind::config, "profile: object with 'kind' expected");
  const auto kind = j.at("kind").get<std::string>();
  const double amp = j.value("amplitude", 1.0);
  if (kind == "gaussian") {
    only_keys(j, {"kind", "sigma", "amplitude"});
    return gaussian(j.at("sigma").get<double>(), amp);
  }
  if (kind == "box" || kind == "hat") {
    only_keys(j, {"kind", "T", "amplitude"});
    const double t = j.at("T").get<double>();
    return kind == "box" ? box(t, amp) : hat(t, amp);
  }
  if (kind == "tabulated") {
    only_keys(j, {"kind", "grid", "values", "tail"});
    std::vector<Complex> vals;
    for (const auto& v : j.at("values")) vals.push_back(complex_from(v));
    std::optional<TailSpec> tail;
    if (j.contains("tail")) {
      const auto& t = j.at("tail");
      only_keys(t, {"prefactor", "rate"});
      tail = TailSpec{t.at("prefactor").get<double>(), t.at("rate").get<double>()};
    }
    try {
      return tabulated(j.at("grid").get<std::vector<double>>(), std::move(vals), tail);
    } catch (const Error& e) {
      throw Error(ErrorKind::config, e.what());
    }
  }
  if (kind == "sum") {
    only_keys(j, {"kind", "terms"});
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      only_keys(t, {"weight", "shift", "profile"});
      terms.push_back(Term{t.contains("weight") ? complex_from(t.at("weight")) : Complex(1.0), t.value("shift", 0.0),
                           from_json(t.at("profile"))});
    }
    return sum(std::move(terms));
  }
  if (kind == "product") {
    only_keys(j, {"kind", "factors"});
    const auto& f = j.at("factors");
    if (!f.is_array() || f.size() != 2) throw Error(ErrorKind::config, "product profile: exactly two factors");
    return product(from_json(f[0]), from_json(f[1]));
  }
  if (kind == "unit-at-one") {
    only_keys(j, {"kind", "sigma"});
    return unit_at_one(j.at("sigma").get<double>());
  }
  throw Error(ErrorKind::config, "profile: unknown kind '" + kind + "'");
}

}  // namespace kpq
