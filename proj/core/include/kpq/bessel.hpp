#pragma once

#include <vector>

namespace kpq {

/// J_0(x), ..., J_{n_max}(x) for x >= 0 by Miller's backward recurrence,
/// normalized with J_0 + 2 sum_k J_{2k} = 1.
std::vector<double> bessel_j_sequence(double x, int n_max);

/// Smallest N such that the weighted Bessel tail
///   sum_{n > N} w(n) |J_n(x)|  is certified below `tol`,
/// using |J_n(x)| <= (x/2)^n / n! and a geometric majorant. `log_weight(n)`
/// must be concave or grow sublinearly in n (true for every shipped weight).
template <class LogWeight>
int bessel_tail_cutoff(double x, double tol, LogWeight log_weight);

}  // namespace kpq

#include <cmath>

namespace kpq {

template <class LogWeight>
int bessel_tail_cutoff(double x, double tol, LogWeight log_weight) {
  const double log_tol = std::log(tol);
  const double half = 0.5 * x;
  for (int n = static_cast<int>(std::ceil(x)) + 1;; ++n) {
    // log of (x/2)^{n+1}/(n+1)! * w(n+1); successive ratios of the
    // majorant are below 1/2 once n+1 >= x and log-weight increments are
    // below log(2)/2, so twice the first term bounds the tail.
    const double m = static_cast<double>(n + 1);
    const double ratio_log = std::log(half / (m + 1.0)) + (log_weight(n + 2) - log_weight(n + 1));
    const double log_term = m * std::log(std::max(half, 1e-300)) - std::lgamma(m + 1.0) + log_weight(n + 1);
    if (ratio_log <= -std::log(2.0) && log_term + std::log(2.0) <= log_tol) return n;
    if (n > 100000) return n;
  }
}

}  // namespace kpq
