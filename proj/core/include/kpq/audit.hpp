#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/ensemble.hpp"
#include "kpq/zoo.hpp"

namespace kpq {

struct AuditOptions {
  unsigned jobs = 1;
  /// Relative slack allowed over a forced constant before FAIL.
  double forced_tol = 1e-9;
};

struct AuditReport {
  std::string instance;
  DiffTriple triple;
  SamplerSpec sampler;
  std::uint64_t seed = 0;
  int samples = 0;
  int skipped_zero = 0;
  /// Per-sample ratio ||a^k||_A / (||a||_A^p ||a||_B^q); NaN for skipped samples.
  std::vector<double> ratios;
  double c_hat = 0.0;
  std::size_t argmax = 0;
  double mean = 0.0;
  double q50 = 0.0, q90 = 0.0, q99 = 0.0;
  std::optional<double> forced_constant;
  std::vector<std::size_t> violations;  ///< samples above the forced constant
  bool pass = false;
};

nlohmann::json to_json(const AuditReport& r);

/// c_hat is an empirical lower bound on the best constant.
AuditReport audit(const AlgebraInstance& inst, const DiffTriple& triple, const SamplerSpec& sampler, int n_samples,
                  std::uint64_t seed, const AuditOptions& opts = {});

/// Ratio for a single element; nullopt when a norm vanishes.
std::optional<double> kpq_sample_ratio(const AlgebraInstance& inst, const DiffTriple& triple, const Element& a);

struct IteratedRow {
  int n = 0;
  double log_lhs = 0.0;           ///< log ||a^{k^n}||_A
  double log_rhs_stated = 0.0;    ///< n log C + p^n log||a||_A + (k^n - p^n) log||a||_B
  double log_rhs_corrected = 0.0; ///< constant exponent (p^n - 1)/(p - 1) instead of n
  double slack_stated = 0.0;
  double slack_corrected = 0.0;
};

struct IteratedReport {
  DiffTriple triple;
  double c = 0.0;
  std::vector<IteratedRow> rows;
  bool pass = false;            ///< stated inequality
  bool pass_corrected = false;
};

nlohmann::json to_json(const IteratedReport& r);

/// Powers by repeated k-th powers with renormalization; all comparisons in
/// the log domain.
IteratedReport iterated_check(const AlgebraInstance& inst, const DiffTriple& triple, double c, const Element& x,
                              int n_max);

/// Largest kpq ratio over x, x^k, ..., x^{k^{n_max - 1}}: the elements the
/// iterated inequality applies the single-step bound to.
double orbit_constant(const AlgebraInstance& inst, const DiffTriple& triple, const Element& x, int n_max);

struct SizeScalingReport {
  std::vector<std::size_t> sizes;
  std::vector<AuditReport> audits;
  std::vector<double> successive_ratios;
  double max_ratio_allowed = 1.1;
  bool pass = false;
};

nlohmann::json to_json(const SizeScalingReport& r);

SizeScalingReport size_scaling(const AlgebraInstance& inst, const DiffTriple& triple, SamplerSpec sampler,
                               const std::vector<std::size_t>& sizes, int per_size, std::uint64_t seed,
                               const AuditOptions& opts = {});

struct RdRow {
  int r = 0;
  int sample = 0;
  int support = 0;
  double l2 = 0.0;
  double rep_norm = 0.0;
  double bound = 0.0;  ///< (r + 1) ||f||_2
  bool ok = false;
};

struct RdReport {
  std::uint64_t seed = 0;
  int extra_radius = 6;
  std::vector<RdRow> rows;
  bool pass = false;
};

nlohmann::json to_json(const RdReport& r);

/// Free group of rank 2: random sections on spheres S_r, r = 1..r_max, with
/// at most support_cap points; checks regular_rep_norm(f, r + extra) against
/// (r + 1) ||f||_2.
RdReport rd_ratio_experiment(std::uint64_t seed, int r_max = 5, int samples_per_radius = 3, int extra_radius = 6,
                             int support_cap = 24, unsigned jobs = 1);

}  // namespace kpq
