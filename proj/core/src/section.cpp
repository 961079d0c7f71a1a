#include "kpq/section.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kpq/error.hpp"
#include "kpq/torus.hpp"

namespace kpq {

namespace {

void require_same_group(const WeightedSection& f, const WeightedSection& h, const char* op) {
  if (!f.group() || !h.group() || !(*f.group() == *h.group())) {
    throw Error(ErrorKind::dimension_mismatch, std::string(op) + ": sections live on different groups");
  }
}

bool is_integer_line(const GroupModel& g) { return g.family() == GroupFamily::lattice && g.parameter() == 1; }

WeightedSection convolve_line(const WeightedSection& f, const WeightedSection& h) {
  const auto& ft = f.terms();
  const auto& ht = h.terms();
  const std::int64_t f0 = ft.front().element[0];
  const std::int64_t h0 = ht.front().element[0];
  const std::size_t fn = static_cast<std::size_t>(ft.back().element[0] - f0 + 1);
  const std::size_t hn = static_cast<std::size_t>(ht.back().element[0] - h0 + 1);
  std::vector<Complex> a(fn), b(hn), c(fn + hn - 1);
  for (const auto& t : ft) a[static_cast<std::size_t>(t.element[0] - f0)] = t.value;
  for (const auto& t : ht) b[static_cast<std::size_t>(t.element[0] - h0)] = t.value;
  for (std::size_t i = 0; i < fn; ++i) {
    if (a[i] == Complex{}) continue;
    const Complex ai = a[i];
    Complex* out = c.data() + i;
    for (std::size_t j = 0; j < hn; ++j) out[j] += ai * b[j];
  }
  std::vector<SectionTerm> terms;
  terms.reserve(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != Complex{}) {
      terms.push_back({GroupElement{static_cast<std::int32_t>(f0 + h0 + static_cast<std::int64_t>(k))}, c[k]});
    }
  }
  return WeightedSection(f.group(), std::move(terms));
}

}  // namespace

WeightedSection::WeightedSection(GroupPtr group, std::vector<SectionTerm> terms)
    : group_(std::move(group)), terms_(std::move(terms)) {
  if (!group_) throw Error(ErrorKind::domain, "WeightedSection: null group");
  for (const auto& t : terms_) {
    if (!group_->is_valid(t.element)) {
      throw Error(ErrorKind::domain, "WeightedSection: invalid element for " + group_->name());
    }
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag())) {
      throw Error(ErrorKind::domain, "WeightedSection: non-finite coefficient");
    }
  }
  canonicalize();
}

void WeightedSection::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const SectionTerm& a, const SectionTerm& b) { return a.element < b.element; });
  std::vector<SectionTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().element == t.element) {
      merged.back().value += t.value;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const SectionTerm& t) { return t.value == Complex{}; });
  terms_ = std::move(merged);
}

WeightedSection WeightedSection::delta(GroupPtr group, const GroupElement& x, Complex value) {
  return WeightedSection(std::move(group), {SectionTerm{x, value}});
}

Complex WeightedSection::at(const GroupElement& x) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), x,
                             [](const SectionTerm& t, const GroupElement& e) { return t.element < e; });
  return (it != terms_.end() && it->element == x) ? it->value : Complex{};
}

int WeightedSection::support_radius() const {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, group_->word_length(t.element));
  return r;
}

WeightedSection& WeightedSection::operator+=(const WeightedSection& other) {
  if (other.is_zero()) return *this;
  if (!group_) group_ = other.group_;
  require_same_group(*this, other, "operator+=");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

WeightedSection& WeightedSection::operator-=(const WeightedSection& other) {
  return *this += Complex(-1.0) * other;
}

WeightedSection& WeightedSection::operator*=(Complex s) {
  for (auto& t : terms_) t.value *= s;
  std::erase_if(terms_, [](const SectionTerm& t) { return t.value == Complex{}; });
  return *this;
}

void WeightedSection::prune_relative(double rel) {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.value));
  const double cut = rel * m;
  std::erase_if(terms_, [cut](const SectionTerm& t) { return std::abs(t.value) <= cut; });
}

bool operator==(const WeightedSection& a, const WeightedSection& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty() && !(*a.group_ == *b.group_)) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].element != b.terms_[i].element || a.terms_[i].value != b.terms_[i].value) return false;
  }
  return true;
}

WeightedSection operator+(WeightedSection a, const WeightedSection& b) { return a += b; }
WeightedSection operator-(WeightedSection a, const WeightedSection& b) { return a -= b; }
WeightedSection operator*(Complex s, WeightedSection a) { return a *= s; }

WeightedSection convolve(const WeightedSection& f, const WeightedSection& h) {
  require_same_group(f, h, "convolve");
  if (f.is_zero() || h.is_zero()) return WeightedSection(f.group());
  const GroupModel& g = *f.group();
  if (is_integer_line(g)) return convolve_line(f, h);

  std::unordered_map<GroupElement, Complex, GroupElementHash> acc;
  acc.reserve(f.size() * h.size());
  for (const auto& a : f.terms()) {
    for (const auto& b : h.terms()) acc[g.multiply(a.element, b.element)] += a.value * b.value;
  }
  std::vector<SectionTerm> terms;
  terms.reserve(acc.size());
  for (auto& [x, v] : acc) terms.push_back({x, v});
  return WeightedSection(f.group(), std::move(terms));
}

WeightedSection section_adjoint(const WeightedSection& f) {
  std::vector<SectionTerm> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) terms.push_back({f.group()->inverse(t.element), std::conj(t.value)});
  return WeightedSection(f.group(), std::move(terms));
}

bool is_self_adjoint(const WeightedSection& f, double tol) {
  const auto fs = section_adjoint(f);
  if (tol == 0.0) return fs == f;
  const auto d = fs - f;
  double m = 0.0;
  for (const auto& t : d.terms()) m = std::max(m, std::abs(t.value));
  return m <= tol;
}

double l2_norm(const WeightedSection& f) {
  double s = 0.0;
  for (const auto& t : f.terms()) s += std::norm(t.value);
  return std::sqrt(s);
}

double cstar_norm_abelian(const WeightedSection& f) {
  if (!f.group() || f.group()->family() != GroupFamily::lattice) {
    throw Error(ErrorKind::unsupported, "cstar_norm_abelian: requires an integer-lattice group");
  }
  const int d = f.group()->parameter();
  if (d > 2) throw Error(ErrorKind::unsupported, "cstar_norm_abelian: lattice dimension must be <= 2");
  torus::LatticePoly p{d, {}};
  p.terms.reserve(f.size());
  for (const auto& t : f.terms()) {
    torus::LatticeTerm lt;
    lt.index[0] = t.element[0];
    if (d == 2) lt.index[1] = t.element[1];
    lt.value = t.value;
    p.terms.push_back(lt);
  }
  return torus::sup_abs(p);
}

ComplexMatrix left_convolution_matrix(const WeightedSection& f) {
  if (!f.group() || !f.group()->is_finite()) {
    throw Error(ErrorKind::unsupported, "left_convolution_matrix: requires a finite group");
  }
  const GroupModel& g = *f.group();
  const auto elems = ball(g, g.parameter());
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  ComplexMatrix m(elems.size());
  for (std::size_t j = 0; j < elems.size(); ++j) {
    for (const auto& t : f.terms()) {
      // (f * h)(y x_j) picks up f(y) h(x_j).
      m(index.at(g.multiply(t.element, elems[j])), j) += t.value;
    }
  }
  return m;
}

}  // namespace kpq
