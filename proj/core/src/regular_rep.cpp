#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "kpq/error.hpp"
#include "kpq/section.hpp"

namespace kpq {

namespace {

// Columns of P lambda(f) P: column j holds (row, coefficient-id) pairs.
struct CompressedOperator {
  std::size_t n = 0;
  std::vector<std::size_t> col_start;
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> coeff;
  std::vector<Complex> values;

  // y = T x
  void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const {
    std::fill(y.begin(), y.end(), Complex{});
    for (std::size_t j = 0; j < n; ++j) {
      const Complex xj = x[j];
      for (std::size_t k = col_start[j]; k < col_start[j + 1]; ++k) y[rows[k]] += values[coeff[k]] * xj;
    }
  }
  // y = T* x
  void apply_adjoint(const std::vector<Complex>& x, std::vector<Complex>& y) const {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = col_start[j]; k < col_start[j + 1]; ++k) s += std::conj(values[coeff[k]]) * x[rows[k]];
      y[j] = s;
    }
  }
};

double dot_real(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s.real();
}

double norm2(const std::vector<Complex>& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

// Largest Ritz value of T*T from a Lanczos run with full reorthogonalization.
// Ritz values never exceed the top eigenvalue, so the result stays a lower
// bound of ||T||^2 up to rounding.
double lanczos_top(const CompressedOperator& op, int steps) {
  const std::size_t n = op.n;
  std::vector<std::vector<Complex>> basis;
  std::vector<double> alpha, beta;
  std::vector<Complex> v(n), w(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * std::sin(static_cast<double>(i) + 1.0);
  const double v0 = norm2(v);
  for (auto& z : v) z /= v0;

  double theta_prev = -1.0;
  double theta = 0.0;
  const int m = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(steps), n));
  for (int k = 0; k < m; ++k) {
    basis.push_back(v);
    op.apply(v, tmp);
    op.apply_adjoint(tmp, w);
    const double a = dot_real(v, w);
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
    if (k > 0) {
      const auto& prev = basis[basis.size() - 2];
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta.back() * prev[i];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        Complex c{};
        for (std::size_t i = 0; i < n; ++i) c += std::conj(q[i]) * w[i];
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    }
    const double b = norm2(w);

    // Top eigenvalue of the k+1 tridiagonal by bisection (Sturm counts).
    const std::size_t sz = alpha.size();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
      const double off = (i > 0 ? beta[i - 1] : 0.0) + (i + 1 < sz ? beta[i] : 0.0);
      hi = std::max(hi, alpha[i] + off);
      lo = std::min(lo, alpha[i] - off);
    }
    auto count_above = [&](double x) {
      int cnt = 0;
      double d = 1.0;
      for (std::size_t i = 0; i < sz; ++i) {
        const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
        d = alpha[i] - x - (i > 0 ? b2 / d : 0.0);
        if (d == 0.0) d = -1e-300;
        if (d > 0.0) ++cnt;
      }
      return cnt;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_above(mid) >= 1) lo = mid; else hi = mid;
    }
    theta = lo;
    if (b <= 1e-14 * std::max(1.0, theta)) break;
    if (k > 4 && std::abs(theta - theta_prev) <= 1e-14 * theta) break;
    theta_prev = theta;
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  return theta;
}

}  // namespace

double regular_rep_norm(const WeightedSection& f, int r, const RegularRepOptions& opts) {
  if (f.is_zero()) return 0.0;
  const GroupModel& g = *f.group();
  const auto elems = ball(g, r, opts.cap);
  std::unordered_map<GroupElement, std::uint32_t, GroupElementHash> index;
  index.reserve(elems.size() * 2);
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<std::uint32_t>(i));

  CompressedOperator op;
  op.n = elems.size();
  op.col_start.reserve(op.n + 1);
  op.col_start.push_back(0);
  for (const auto& t : f.terms()) op.values.push_back(t.value);
  for (std::size_t j = 0; j < op.n; ++j) {
    for (std::uint32_t c = 0; c < f.size(); ++c) {
      auto it = index.find(g.multiply(f.terms()[c].element, elems[j]));
      if (it != index.end()) {
        op.rows.push_back(it->second);
        op.coeff.push_back(c);
      }
    }
    op.col_start.push_back(op.rows.size());
  }

  if (op.n <= opts.dense_limit) {
    ComplexMatrix m(op.n);
    for (std::size_t j = 0; j < op.n; ++j) {
      for (std::size_t k = op.col_start[j]; k < op.col_start[j + 1]; ++k) m(op.rows[k], j) += op.values[op.coeff[k]];
    }
    return operator_norm(m);
  }
  return std::sqrt(std::max(0.0, lanczos_top(op, opts.lanczos_steps)));
}

}  // namespace kpq
