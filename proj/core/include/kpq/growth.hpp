#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/zoo.hpp"

namespace kpq {

struct UOptions {
  /// Bound on the weighted l^1 tail dropped by the Bessel series.
  double tail_tol = 1e-13;
  /// Initial torus grid per dimension (0: 4096 for d = 1, 256 for d = 2).
  std::size_t torus_grid = 0;
  /// Max coefficient change between grid M and 2M accepted by the torus route.
  double richardson_tol = 1e-10;
};

/// u(t x) = e^{itx} - 1 for self-adjoint x.
///   matrix                     mat_exp_hermitian(x, t) - I
///   Z-section on {-1,0,1}      Bessel series with certified tail
///   other Z^d sections, trig   torus sampling with a grid-doubling check
///   finite-group sections      exponential of the convolution matrix
Element u_of(const Element& x, const AlgebraInstance& inst, double t, const UOptions& opts = {});

struct GrowthOptions {
  double slack = 0.1;
  /// Smallest grid point; default t_max / 100.
  std::optional<double> t_min;
  /// Optional independent evaluation of ||u(t x)||_A.
  std::function<double(double)> oracle;
  UOptions u;
  unsigned jobs = 1;
};

struct GrowthTrace {
  std::vector<double> t_grid;
  std::vector<double> norms;
  std::vector<double> oracle_norms;
  DiffTriple triple;
  double tau_bound = 0.0;
  double tau_fit = 0.0;
  double fit_quality = 0.0;  // R^2
  bool reliable = false;     // R^2 >= 0.98
  bool bounded = false;
  double slack = 0.1;
  bool pass = false;
};

nlohmann::json to_json(const GrowthTrace& g);

/// log_k(max{k-1, p}).
[[nodiscard]] double tau_bound(const DiffTriple& t);

/// Norms on a log-spaced grid, tau fitted from log log(norm + e) against
/// log t on the upper half of the grid.
GrowthTrace growth_trace(const Element& x, const AlgebraInstance& inst, const DiffTriple& triple, double t_max,
                         int points, const GrowthOptions& opts = {});

/// Smallest B with ||u(t x)|| <= B e^{t^tau} on the trace's grid.
[[nodiscard]] double growth_prefactor(const GrowthTrace& g, double tau);

struct HypothesisViolation {
  std::string condition;  // "a(n+m) <= a(n) a(m)" or "a(kn) <= a(n)^gamma"
  int n = 0;
  int m = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AsympReport {
  int k = 2;
  double gamma = 1.5;
  int n_max = 0;
  std::vector<double> sequence;  // a_1 .. a_{n_max}
  std::optional<HypothesisViolation> violation;
  /// Largest a_n / bound(n); the bound holds iff <= 1.
  double max_ratio = 0.0;
  int worst_n = 0;
  std::vector<int> failures;
  bool pass = false;
};

nlohmann::json to_json(const AsympReport& r);

/// Checks the hypotheses a_{n+m} <= a_n a_m and a_{kn} <= a_n^gamma by an
/// exhaustive scan (relative slack 1e-12), then the explicit bound
/// a_n <= exp(A (k-1)(2 + log_k n) k n^{log_k gamma}) with A = ln a_1.
AsympReport asymp_check(const std::function<double(int)>& a, int k, double gamma, int n_max);

/// (sum_{b<=k-2} C(k-1,b) + sum_{a<=k-2} sum_{b<=a} C(a,b), 2^k - 2), 2 <= k <= 60.
std::pair<std::uint64_t, std::uint64_t> comb_identity(int k);

/// max{2^k, 2^q c + 2^k - 1}^{1/(gamma-1)}, at least 1.
[[nodiscard]] double d_constant(int k, double q, double gamma, double c);

/// A-norm of u(knx) - [z^k + sum C(k-1,b) z^{b+1} + sum sum C(a,b) z^{b+1}], z = u(nx).
[[nodiscard]] double polynomial_expansion_check(const Element& x, const AlgebraInstance& inst, int k, int n,
                                                const UOptions& opts = {});

/// Ratio ||z^k||_A / (||z||_A^p ||z||_B^q).
[[nodiscard]] double kpq_ratio(const Element& z, const AlgebraInstance& inst, const DiffTriple& t);

struct OrbitSequence {
  std::vector<double> u_norms;  // ||u(n x)||_A, n = 1..n_max
  double c = 0.0;               // max kpq ratio over z = u(n x)
  double gamma = 0.0;
  double d = 1.0;
  std::vector<double> a;        // D (||u(n x)||_A + 1)
};

/// The sequence used in the growth proof, with c estimated over the orbit
/// itself and D = d_constant(k, q, gamma, c). gamma defaults to max{k-1, p}.
OrbitSequence orbit_sequence(const Element& x, const AlgebraInstance& inst, const DiffTriple& t, int n_max,
                             std::optional<double> gamma = std::nullopt, const UOptions& opts = {},
                             unsigned jobs = 1);

}  // namespace kpq
