#include "kpq/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kpq/error.hpp"

namespace kpq {

using nlohmann::json;

json to_json(const SamplerSpec& s) {
  json j{{"ensemble", s.ensemble},       {"size", s.size},     {"support_radius", s.support_radius},
         {"decay", s.decay},             {"degree", s.degree}, {"self_adjoint", s.self_adjoint}};
  if (s.band_beta) j["band_beta"] = *s.band_beta;
  if (s.bandwidth) j["bandwidth"] = *s.bandwidth;
  return j;
}

SamplerSpec sampler_from_json(const json& j) {
  SamplerSpec s;
  if (j.is_null()) return s;
  if (!j.is_object()) throw Error(ErrorKind::config, "sampler: expected an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "ensemble") {
      s.ensemble = v.get<std::string>();
      if (s.ensemble != "auto" && s.ensemble != "gaussian" && s.ensemble != "banded" &&
          s.ensemble != "convolution" && s.ensemble != "trig")
        throw Error(ErrorKind::config, "sampler: unknown ensemble '" + s.ensemble + "'");
    } else if (key == "size") {
      s.size = v.get<std::size_t>();
    } else if (key == "band_beta") {
      s.band_beta = v.get<double>();
    } else if (key == "bandwidth") {
      s.bandwidth = v.get<int>();
    } else if (key == "support_radius") {
      s.support_radius = v.get<int>();
    } else if (key == "decay") {
      s.decay = v.get<double>();
    } else if (key == "degree") {
      s.degree = v.get<int>();
    } else if (key == "self_adjoint") {
      s.self_adjoint = v.get<bool>();
    } else {
      throw Error(ErrorKind::config, "sampler: unknown key '" + key + "'");
    }
  }
  if (s.size < 1 || s.size > 2048) throw Error(ErrorKind::config, "sampler: size must be in [1, 2048]");
  if (s.support_radius < 0) throw Error(ErrorKind::config, "sampler: support_radius must be >= 0");
  if (s.degree < 0) throw Error(ErrorKind::config, "sampler: degree must be >= 0");
  if (!(s.decay > 0.0 && s.decay <= 1.0)) throw Error(ErrorKind::config, "sampler: decay must be in (0, 1]");
  return s;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  return splitmix64(state);
}

namespace {

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return Complex(re, im) / std::numbers::sqrt2;
}

Complex disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, phi);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix h = a + adjoint(a);
  h *= 0.5;
  // exact symmetry: the diagonal is real and (j,i) mirrors (i,j)
  for (std::size_t i = 0; i < h.dim(); ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < h.dim(); ++j) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

std::string resolve(const AlgebraInstance& inst, const SamplerSpec& spec) {
  if (spec.ensemble != "auto") return spec.ensemble;
  switch (inst.carrier) {
    case Carrier::matrix:
      return inst.metadata.contains("alpha") ? "banded" : "gaussian";
    case Carrier::section:
      return "convolution";
    case Carrier::trig:
      return "trig";
  }
  return "gaussian";
}

}  // namespace

Element sample_element(const AlgebraInstance& inst, const SamplerSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::string kind = resolve(inst, spec);
  if (kind == "gaussian" || kind == "banded") {
    if (inst.carrier != Carrier::matrix) throw Error(ErrorKind::config, kind + " ensemble needs a matrix instance");
    const std::size_t n = spec.size;
    ComplexMatrix a(n);
    double beta = 0.0;
    if (kind == "banded") {
      beta = spec.band_beta.value_or(inst.metadata.contains("alpha") ? inst.metadata["alpha"].get<double>() + 1.0 : 2.0);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (kind == "gaussian") {
          a(i, j) = gaussian(rng);
        } else {
          const std::size_t d = i > j ? i - j : j - i;
          const Complex z = disk(rng);
          if (spec.bandwidth && static_cast<int>(d) > *spec.bandwidth) continue;
          a(i, j) = z * std::pow(1.0 + static_cast<double>(d), -beta);
        }
      }
    if (spec.self_adjoint) a = hermitian_part(a);
    return a;
  }
  if (kind == "convolution") {
    if (inst.carrier != Carrier::section) throw Error(ErrorKind::config, "convolution ensemble needs a section instance");
    const auto& g = inst.group;
    std::vector<SectionTerm> terms;
    for (const auto& x : ball(*g, spec.support_radius)) {
      const double damp = std::pow(spec.decay, g->word_length(x));
      terms.push_back({x, damp * gaussian(rng)});
    }
    WeightedSection f(g, std::move(terms));
    if (spec.self_adjoint) {
      f += section_adjoint(f);
      f *= 0.5;
    }
    return f;
  }
  if (kind == "trig") {
    if (inst.carrier != Carrier::trig) throw Error(ErrorKind::config, "trig ensemble needs the c1-torus instance");
    std::uniform_int_distribution<int> deg(spec.degree > 0 ? 1 : 0, spec.degree);
    const int d = deg(rng);
    std::map<std::int64_t, Complex> coeffs;
    for (int n = -d; n <= d; ++n) coeffs[n] = gaussian(rng);
    TrigPolynomial f(std::move(coeffs));
    if (spec.self_adjoint) {
      f += f.adjoint();
      f *= 0.5;
    }
    return f;
  }
  throw Error(ErrorKind::config, "unknown ensemble '" + kind + "'");
}

}  // namespace kpq
