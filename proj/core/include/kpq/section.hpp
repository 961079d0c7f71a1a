#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kpq/group.hpp"
#include "kpq/matrix.hpp"

namespace kpq {

struct SectionTerm {
  GroupElement element;
  Complex value;
};

/// Finitely supported complex function on a group: an element of the
/// (scalar) group algebra. Terms are kept sorted by element, distinct and
/// nonzero.
class WeightedSection {
 public:
  WeightedSection() = default;
  explicit WeightedSection(GroupPtr group) : group_(std::move(group)) {}
  WeightedSection(GroupPtr group, std::vector<SectionTerm> terms);

  static WeightedSection delta(GroupPtr group, const GroupElement& x, Complex value = 1.0);

  [[nodiscard]] const GroupPtr& group() const noexcept { return group_; }
  [[nodiscard]] const std::vector<SectionTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

  [[nodiscard]] Complex at(const GroupElement& x) const;
  /// Largest word length in the support (0 for the zero section).
  [[nodiscard]] int support_radius() const;

  WeightedSection& operator+=(const WeightedSection& other);
  WeightedSection& operator-=(const WeightedSection& other);
  WeightedSection& operator*=(Complex s);

  /// Drops terms with |value| <= rel * max |value|. Used by the power loops
  /// to keep supports bounded once coefficients underflow.
  void prune_relative(double rel);

  friend bool operator==(const WeightedSection& a, const WeightedSection& b);

 private:
  void canonicalize();

  GroupPtr group_;
  std::vector<SectionTerm> terms_;
};

WeightedSection operator+(WeightedSection a, const WeightedSection& b);
WeightedSection operator-(WeightedSection a, const WeightedSection& b);
WeightedSection operator*(Complex s, WeightedSection a);

/// (f * h)(x) = sum_y f(y) h(y^{-1} x).
WeightedSection convolve(const WeightedSection& f, const WeightedSection& h);

/// f*(x) = conj(f(x^{-1})).
WeightedSection section_adjoint(const WeightedSection& f);

[[nodiscard]] bool is_self_adjoint(const WeightedSection& f, double tol = 0.0);

/// Plain l^2 norm of the coefficients.
[[nodiscard]] double l2_norm(const WeightedSection& f);

/// sup over the torus of |sum f(n) e^{i n.theta}| for sections on Z^d,
/// d <= 2 (the norm of C*(Z^d) = C(T^d)).
[[nodiscard]] double cstar_norm_abelian(const WeightedSection& f);

/// Options for the compressed left-regular representation.
struct RegularRepOptions {
  std::size_t cap = GroupModel::kDefaultBallCap;
  /// Ball sizes up to this use a dense Jacobi solve; larger ones Lanczos.
  std::size_t dense_limit = 400;
  int lanczos_steps = 90;
};

/// Operator norm of P lambda(f) P where P projects l^2(G) onto l^2(B(e,r)).
/// A lower bound for the reduced C*-norm, nondecreasing in r.
[[nodiscard]] double regular_rep_norm(const WeightedSection& f, int r, const RegularRepOptions& opts = {});

/// Dense matrix of h -> f * h on l^2(K) for a finite group K, indexed by
/// ball(K, order) order.
ComplexMatrix left_convolution_matrix(const WeightedSection& f);

}  // namespace kpq
