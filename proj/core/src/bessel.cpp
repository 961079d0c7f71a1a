#include "kpq/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "kpq/error.hpp"

namespace kpq {

std::vector<double> bessel_j_sequence(double x, int n_max) {
  if (!(x >= 0.0) || n_max < 0) throw Error(ErrorKind::domain, "bessel_j_sequence: need x >= 0, n_max >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double top = std::max(static_cast<double>(n_max), x);
  int start = static_cast<int>(top + 30.0 + std::ceil(std::sqrt(60.0 * top)));
  if (start % 2) ++start;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start) + 1] = 0.0;
  j[static_cast<std::size_t>(start)] = 1e-30;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    j[uk - 1] = (2.0 * k / x) * j[uk] - j[uk + 1];
    if (std::abs(j[uk - 1]) > 1e250) {
      for (std::size_t i = uk - 1; i < j.size(); ++i) j[i] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[static_cast<std::size_t>(k)];
  for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = j[static_cast<std::size_t>(n)] / norm;
  return out;
}

}  // namespace kpq
