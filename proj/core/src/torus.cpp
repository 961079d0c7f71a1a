#include "kpq/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpq/error.hpp"

namespace kpq::torus {

namespace {

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

std::size_t wrap(std::int64_t n, std::size_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::size_t>(((n % mm) + mm) % mm);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

void fft(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw Error(ErrorKind::domain, "fft: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Direct twiddles keep the transform accurate for long lengths.
        const Complex w = std::polar(1.0, ang * static_cast<double>(k));
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

Complex evaluate(const LatticePoly& p, std::array<double, 2> theta) {
  Complex s{};
  for (const auto& t : p.terms) {
    double phase = static_cast<double>(t.index[0]) * theta[0];
    if (p.dim == 2) phase += static_cast<double>(t.index[1]) * theta[1];
    s += t.value * std::polar(1.0, phase);
  }
  return s;
}

std::vector<Complex> sample_grid(const LatticePoly& p, std::size_t m) {
  if (!is_pow2(m)) throw Error(ErrorKind::domain, "sample_grid: grid must be a power of two");
  if (p.dim != 1 && p.dim != 2) throw Error(ErrorKind::unsupported, "torus: only d = 1, 2 supported");
  std::int64_t lo[2] = {0, 0};
  std::int64_t hi[2] = {0, 0};
  for (const auto& t : p.terms) {
    for (int k = 0; k < p.dim; ++k) {
      lo[k] = std::min(lo[k], t.index[static_cast<std::size_t>(k)]);
      hi[k] = std::max(hi[k], t.index[static_cast<std::size_t>(k)]);
    }
  }
  for (int k = 0; k < p.dim; ++k) {
    if (hi[k] - lo[k] >= static_cast<std::int64_t>(m)) {
      throw Error(ErrorKind::domain, "sample_grid: grid too coarse for the support");
    }
  }
  if (p.dim == 1) {
    std::vector<Complex> a(m);
    for (const auto& t : p.terms) a[wrap(t.index[0], m)] += t.value;
    fft(a, true);
    return a;
  }
  std::vector<Complex> a(m * m);
  for (const auto& t : p.terms) a[wrap(t.index[0], m) * m + wrap(t.index[1], m)] += t.value;
  std::vector<Complex> line(m);
  for (std::size_t i = 0; i < m; ++i) fft(std::span<Complex>(a).subspan(i * m, m), true);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) line[i] = a[i * m + j];
    fft(line, true);
    for (std::size_t i = 0; i < m; ++i) a[i * m + j] = line[i];
  }
  return a;
}

std::size_t default_grid(int dim) { return dim == 1 ? (std::size_t{1} << 14) : (std::size_t{1} << 10); }

double sup_abs(const LatticePoly& p, std::size_t grid, int refine_points) {
  if (p.terms.empty()) return 0.0;
  if (grid == 0) grid = default_grid(p.dim);
  std::int64_t span = 0;
  for (int k = 0; k < p.dim; ++k) {
    std::int64_t lo = 0, hi = 0;
    for (const auto& t : p.terms) {
      lo = std::min(lo, t.index[static_cast<std::size_t>(k)]);
      hi = std::max(hi, t.index[static_cast<std::size_t>(k)]);
    }
    span = std::max(span, hi - lo);
  }
  while (static_cast<std::int64_t>(grid) <= 4 * span) grid <<= 1;

  const auto samples = sample_grid(p, grid);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
  std::vector<std::pair<double, std::size_t>> peaks;
  const std::size_t total = samples.size();
  double best = 0.0;
  for (std::size_t j = 0; j < total; ++j) {
    const double v = std::abs(samples[j]);
    best = std::max(best, v);
    bool local = true;
    if (p.dim == 1) {
      local = v >= std::abs(samples[(j + 1) % grid]) && v >= std::abs(samples[(j + grid - 1) % grid]);
    } else {
      const std::size_t i0 = j / grid;
      const std::size_t i1 = j % grid;
      for (auto [di, dj] : {std::pair{1, 0}, {grid - 1, 0}, {0, 1}, {0, grid - 1}}) {
        const std::size_t k = ((i0 + di) % grid) * grid + (i1 + dj) % grid;
        if (std::abs(samples[k]) > v) {
          local = false;
          break;
        }
      }
    }
    if (local) peaks.emplace_back(v, j);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  if (peaks.size() > static_cast<std::size_t>(refine_points)) peaks.resize(static_cast<std::size_t>(refine_points));

  for (const auto& [value, j] : peaks) {
    if (p.dim == 1) {
      const double c = h * static_cast<double>(j);
      auto f = [&](double x) { return std::abs(evaluate(p, {x, 0.0})); };
      best = std::max(best, golden_max(f, c - h, c + h));
    } else {
      std::array<double, 2> th = {h * static_cast<double>(j / grid), h * static_cast<double>(j % grid)};
      double v = value;
      double width = h;
      for (int round = 0; round < 6; ++round) {
        for (int axis = 0; axis < 2; ++axis) {
          auto f = [&](double x) {
            auto t = th;
            t[static_cast<std::size_t>(axis)] = x;
            return std::abs(evaluate(p, t));
          };
          const double c = th[static_cast<std::size_t>(axis)];
          // Coordinate-wise ternary search; the argmax is needed for the
          // next axis, so golden_max (value only) is not reused here.
          double a = c - width, b = c + width;
          for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
            const double m1 = a + (b - a) / 3.0;
            const double m2 = b - (b - a) / 3.0;
            if (f(m1) > f(m2)) b = m2; else a = m1;
          }
          th[static_cast<std::size_t>(axis)] = 0.5 * (a + b);
          v = std::max(v, f(th[static_cast<std::size_t>(axis)]));
        }
        width *= 0.5;
      }
      best = std::max(best, v);
    }
  }
  return best;
}

std::vector<LatticeTerm> coefficients(std::span<const Complex> samples, int dim, std::size_t m,
                                      std::int64_t radius) {
  if (2 * radius >= static_cast<std::int64_t>(m)) {
    throw Error(ErrorKind::domain, "torus coefficients: radius too large for the grid");
  }
  std::vector<Complex> a(samples.begin(), samples.end());
  std::vector<LatticeTerm> out;
  if (dim == 1) {
    fft(a, false);
    const double inv = 1.0 / static_cast<double>(m);
    for (std::int64_t n = -radius; n <= radius; ++n) {
      out.push_back({{n, 0}, a[wrap(n, m)] * inv});
    }
    return out;
  }
  std::vector<Complex> line(m);
  for (std::size_t i = 0; i < m; ++i) fft(std::span<Complex>(a).subspan(i * m, m), false);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) line[i] = a[i * m + j];
    fft(line, false);
    for (std::size_t i = 0; i < m; ++i) a[i * m + j] = line[i];
  }
  const double inv = 1.0 / static_cast<double>(m * m);
  for (std::int64_t n0 = -radius; n0 <= radius; ++n0) {
    for (std::int64_t n1 = -radius; n1 <= radius; ++n1) {
      out.push_back({{n0, n1}, a[wrap(n0, m) * m + wrap(n1, m)] * inv});
    }
  }
  return out;
}

}  // namespace kpq::torus
