#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/element.hpp"
#include "kpq/profile.hpp"
#include "kpq/zoo.hpp"

namespace kpq {

/// int |fhat(t)| e^{|t|^tau} dt. Throws domain when the tail functional is
/// infinite for the weight.
double domar_norm(const FourierProfile& f, double tau);

struct FuncCalcOptions {
  /// Also evaluate with T doubled and the panel width halved and report the
  /// A-norm change.
  bool richardson = false;
  std::size_t node_cap = std::size_t{1} << 22;
};

struct FuncCalcResult {
  Element value;
  double cutoff = 0.0;      ///< truncation T
  double panel_width = 0.0;
  std::size_t nodes = 0;
  double tail_bound = 0.0;  ///< A-norm bound on the discarded |t| > T part
  /// A-norm bound on the quadrature error over [-T, T]; absent when the
  /// profile has no analytic piece bound and Richardson was used instead.
  std::optional<double> discretization_bound;
  std::optional<double> richardson_delta;
  /// Torus grid refinement change (section and trig carriers).
  std::optional<double> grid_delta;
  bool certified = false;
  Complex f0 = 0.0;  ///< f(0) from the same quadrature rule
  Complex f1 = 0.0;  ///< f(1) likewise
  /// f(0) = 0: the value carries no unit component.
  bool non_unital = false;
  /// Matrix carrier: ||[f(x), x]||_op, the commutation check of f(x) in A(x).
  std::optional<double> commutator;
};

nlohmann::json to_json(const FuncCalcResult& r);

/// f(x) = (1/2pi) int fhat(t) e^{itx} dt by composite 16-point Gauss-Legendre
/// panels on [-T, T], with T and the panels chosen so that tail and
/// discretization errors are each at most tol/2 in the A-norm.
FuncCalcResult func_calc(const FourierProfile& f, const Element& x, const AlgebraInstance& inst, double tol,
                         const FuncCalcOptions& opts = {});

/// Hausdorff distance between Spec(f(x)) and f(Spec(x)) for Hermitian x.
double spectral_mapping_check(const FourierProfile& f, const ComplexMatrix& x, double tol);

/// ||(fg)(x) - f(x) g(x)||_op.
double homomorphism_check(const FourierProfile& f, const FourierProfile& g, const ComplexMatrix& x, double tol);

struct ApproxIdentityReport {
  std::vector<int> n_grid;
  std::vector<double> residuals;   ///< ||f(b_N) a - a||_A
  std::vector<double> deviations;  ///< ||f(b_N) - b_N||_A
  int support_radius = 0;          ///< smallest N with b_N a = a
  Complex f0 = 0.0;
  Complex f1 = 0.0;
  double tol = 0.0;
  bool monotone = true;
  bool pass = false;
};

nlohmann::json to_json(const ApproxIdentityReport& r);

/// b_N = diag(1 for i < N). Throws domain if f(0) != 0 or f(1) != 1 beyond 1e-10.
ApproxIdentityReport approx_identity_experiment(const AlgebraInstance& inst, const FourierProfile& f,
                                                const ComplexMatrix& a, const std::vector<int>& n_grid,
                                                double tol = 1e-6);

}  // namespace kpq
