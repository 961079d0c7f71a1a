#include "kpq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "kpq/error.hpp"

namespace kpq {

namespace {

constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::dimension_mismatch, std::string(op) + ": dimension mismatch (" +
                                                   std::to_string(a.dim()) + " vs " +
                                                   std::to_string(b.dim()) + ")");
  }
}

double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

ComplexMatrix symmetrized(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

// Cyclic complex Jacobi on an exactly Hermitian matrix. Each rotation is the
// phase change diag(1, e^{-i phi}) that makes a(p,q) real followed by the
// classical real symmetric 2x2 Schur rotation.
EigenDecomposition jacobi(ComplexMatrix a) {
  const std::size_t n = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = frobenius_norm(a);

  bool converged = scale == 0.0 || n <= 1;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_mass(a) <= kJacobiTol * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = std::conj(apq) / mag;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;

        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * phase;
        const Complex uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }
  if (!converged && off_diagonal_mass(a) > kJacobiTol * scale) {
    throw Error(ErrorKind::no_convergence, "hermitian_eig: Jacobi iteration did not converge in " +
                                              std::to_string(kJacobiMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    out.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = v(k, order[col]);
  }
  return out;
}

ComplexMatrix gram(const ComplexMatrix& a) { return symmetrized(mat_mul(adjoint(a), a)); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw Error(ErrorKind::dimension_mismatch,
                "ComplexMatrix: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                    std::to_string(entries_.size()));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw Error(ErrorKind::dimension_mismatch, "ComplexMatrix: rows must form a square matrix");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "mat_mul");
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h(j, i) = std::conj(a(i, j));
  }
  return h;
}

double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& e : a.entries()) m = std::max(m, std::abs(e));
  return m;
}

double frobenius_norm(const ComplexMatrix& a) {
  double scale = max_abs_entry(a);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& e : a.entries()) s += std::norm(e / scale);
  return scale * std::sqrt(s);
}

bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  const double tol = rel_tol * (1.0 + max_abs_entry(a));
  const std::size_t n = a.dim();
  ComplexMatrix skew(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) skew(i, j) = Complex(0.0, 1.0) * (a(i, j) - std::conj(a(j, i)));
  }
  const double fro = frobenius_norm(skew);
  if (fro <= tol) return true;
  if (fro > tol * std::sqrt(static_cast<double>(n))) return false;
  const auto eig = jacobi(skew);
  const double op = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
  return op <= tol;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& a) {
  if (!all_finite(a)) throw Error(ErrorKind::domain, "hermitian_eig: non-finite entries");
  if (a.dim() > 2048) throw Error(ErrorKind::domain, "hermitian_eig: dimension exceeds 2048");
  if (!is_hermitian(a)) throw Error(ErrorKind::not_hermitian, "hermitian_eig: input is not Hermitian");
  return jacobi(symmetrized(a));
}

double operator_norm(const ComplexMatrix& a) {
  const double scale = max_abs_entry(a);
  if (scale == 0.0) return 0.0;
  ComplexMatrix b = (1.0 / scale) * a;
  const auto eig = jacobi(gram(b));
  return scale * std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  const double scale = max_abs_entry(a);
  std::vector<double> sv(a.dim(), 0.0);
  if (scale == 0.0) return sv;
  ComplexMatrix b = (1.0 / scale) * a;
  const auto eig = jacobi(gram(b));
  for (std::size_t i = 0; i < sv.size(); ++i) {
    sv[i] = scale * std::sqrt(std::max(0.0, eig.eigenvalues[sv.size() - 1 - i]));
  }
  return sv;
}

double schatten_norm(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, "schatten_norm: p must be >= 1");
  const auto sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0.0;
  if (std::isinf(p)) return sv.front();
  const double top = sv.front();
  double s = 0.0;
  for (double x : sv) s += std::pow(x / top, p);
  return top * std::pow(s, 1.0 / p);
}

ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<Complex(double)>& g) {
  const std::size_t n = eig.eigenvalues.size();
  std::vector<Complex> gl(n);
  for (std::size_t k = 0; k < n; ++k) gl[k] = g(eig.eigenvalues[k]);
  ComplexMatrix out(n);
  const auto& v = eig.vectors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * gl[k] * std::conj(v(j, k));
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix mat_exp_hermitian(const ComplexMatrix& a, double t) {
  const auto eig = hermitian_eig(a);
  return apply_spectral(eig, [t](double lambda) { return std::polar(1.0, t * lambda); });
}

double normality_defect(const ComplexMatrix& a) {
  const ComplexMatrix ah = adjoint(a);
  return operator_norm(mat_mul(ah, a) - mat_mul(a, ah));
}

}  // namespace kpq
