#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "kpq/ensemble.hpp"
#include "kpq/zoo.hpp"

namespace kpq {

struct RadiusSample {
  int m = 0;
  double n = 1.0;      // 2^m
  double value = 0.0;  // ||x^n||_A^{1/n}
};

struct RadiusReport {
  std::vector<RadiusSample> sequence;
  /// Fit of r + c 2^-m to the last three samples.
  /// Heuristic: the limit has no known rate.
  double extrapolated = 0.0;
  /// Last raw sample.
  double tail = 0.0;
  std::optional<double> oracle;
  std::optional<double> gap;
  double tolerance = 0.0;
  /// Some power vanished exactly (nilpotent element).
  bool exact_zero = false;
};

nlohmann::json to_json(const RadiusReport& r);

/// Default tolerance 10^{-floor(m_max/5)}.
[[nodiscard]] double default_radius_tolerance(int m_max);

/// Gelfand's formula in the A-norm by renormalized repeated squaring.
RadiusReport gelfand_radius(const Element& x, const AlgebraInstance& inst, int m_max,
                            std::optional<double> tolerance = std::nullopt);

/// Eigenvalues of a Hermitian or normal matrix, sorted by (real, imag).
/// Normality requires ||a*a - aa*|| <= 1e-10 (1 + ||a||^2).
std::vector<Complex> spectrum_b(const ComplexMatrix& a);

struct RadiusExperimentOptions {
  int m_max = 14;
  std::optional<double> tolerance;
  SamplerSpec sampler;
  unsigned jobs = 1;
};

struct RadiusExperimentReport {
  std::string instance;
  std::uint64_t seed = 0;
  std::vector<RadiusReport> samples;
  double max_gap = 0.0;
  double tolerance = 0.0;
  /// Samples whose extrapolated A-radius fell below the B-radius - tol.
  std::vector<std::size_t> containment_failures;
  std::vector<std::size_t> gap_failures;
  bool pass = false;
};

nlohmann::json to_json(const RadiusExperimentReport& r);

/// Random self-adjoint samples; compares the Gelfand A-radius with the
/// instance's B-side radius oracle.
RadiusExperimentReport radius_equality_experiment(const AlgebraInstance& inst, int samples, std::uint64_t seed,
                                                  RadiusExperimentOptions opts = {});

}  // namespace kpq
