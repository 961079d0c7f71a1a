#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "kpq/zoo.hpp"

namespace kpq {

/// Random element generator configuration.
///   gaussian     dense complex Gaussian matrix
///   banded       entries (1+|i-j|)^-beta times a uniform point of the unit disk
///   convolution  Gaussian values on a ball, damped by decay^length
///   trig         Gaussian Fourier coefficients, random degree in [1, degree]
///   auto         picks by carrier (banded when the instance has alpha)
struct SamplerSpec {
  std::string ensemble = "auto";
  std::size_t size = 8;
  std::optional<double> band_beta;
  std::optional<int> bandwidth;
  int support_radius = 3;
  double decay = 0.5;
  int degree = 16;
  bool self_adjoint = false;
};

nlohmann::json to_json(const SamplerSpec& s);
/// Strict: unknown keys throw config.
SamplerSpec sampler_from_json(const nlohmann::json& j);

/// splitmix64 step; advances state.
std::uint64_t splitmix64(std::uint64_t& state);
/// Independent per-sample seed: splitmix64 applied to master ^ golden * (index + 1).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic in (inst, spec, seed). Never returns the zero element
/// unless every drawn coefficient is zero.
Element sample_element(const AlgebraInstance& inst, const SamplerSpec& spec, std::uint64_t seed);

}  // namespace kpq
