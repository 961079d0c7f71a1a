#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kpq/matrix.hpp"

namespace kpq::torus {

/// Trigonometric polynomial on T^d (d = 1 or 2): sum c_n e^{i n.theta}.
struct LatticeTerm {
  std::array<std::int64_t, 2> index{};
  Complex value;
};

struct LatticePoly {
  int dim = 1;
  std::vector<LatticeTerm> terms;
};

/// In-place radix-2 FFT; inverse=false computes sum_k a_k e^{-2 pi i jk/M}.
void fft(std::span<Complex> data, bool inverse);

[[nodiscard]] Complex evaluate(const LatticePoly& p, std::array<double, 2> theta);

/// Samples p on the uniform M^d grid theta_j = 2 pi j / M (row-major for
/// d = 2). M must be a power of two exceeding the index span.
std::vector<Complex> sample_grid(const LatticePoly& p, std::size_t m);

/// Default grid size per dimension for sup computations.
[[nodiscard]] std::size_t default_grid(int dim);

/// sup |p| over T^d: grid maximum followed by golden-section refinement
/// around the largest grid local maxima.
[[nodiscard]] double sup_abs(const LatticePoly& p, std::size_t grid = 0, int refine_points = 8);

/// Fourier coefficients c_n = (1/M^d) sum_j g(theta_j) e^{-i n.theta_j} of a
/// grid function, returned for all |n_k| <= radius (row-major over the box
/// for d = 2). Requires 2 * radius < M.
std::vector<LatticeTerm> coefficients(std::span<const Complex> samples, int dim, std::size_t m, std::int64_t radius);

}  // namespace kpq::torus
