#include "kpq/element.hpp"

#include <algorithm>
#include <cmath>

#include "kpq/error.hpp"

namespace kpq {

namespace {

template <class T>
const T& same(const Element& b, const char* op) {
  if (const T* p = std::get_if<T>(&b)) return *p;
  throw Error(ErrorKind::dimension_mismatch, std::string(op) + ": operands live in different carriers");
}

}  // namespace

Carrier carrier_of(const Element& x) {
  switch (x.index()) {
    case 0:
      return Carrier::matrix;
    case 1:
      return Carrier::section;
    default:
      return Carrier::trig;
  }
}

std::string carrier_name(Carrier c) {
  switch (c) {
    case Carrier::matrix:
      return "matrix";
    case Carrier::section:
      return "weighted-section";
    case Carrier::trig:
      return "trig-polynomial";
  }
  return "?";
}

std::string describe(const Element& x) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return "matrix[" + std::to_string(v.dim()) + "]";
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return "section[" + (v.group() ? v.group()->name() : std::string("?")) + ", " +
                 std::to_string(v.size()) + " terms]";
        } else {
          return "trig[degree " + std::to_string(v.degree()) + "]";
        }
      },
      x);
}

Element multiply(const Element& a, const Element& b) {
  return std::visit(
      [&](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        const T& v = same<T>(b, "multiply");
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return mat_mul(u, v);
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return convolve(u, v);
        } else {
          return u * v;
        }
      },
      a);
}

Element add(const Element& a, const Element& b) {
  return std::visit(
      [&](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        return u + same<T>(b, "add");
      },
      a);
}

Element subtract(const Element& a, const Element& b) {
  return std::visit(
      [&](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        return u - same<T>(b, "subtract");
      },
      a);
}

Element scale(Complex s, const Element& a) {
  return std::visit([&](const auto& u) -> Element { return s * u; }, a);
}

Element element_adjoint(const Element& a) {
  return std::visit(
      [](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return adjoint(u);
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return section_adjoint(u);
        } else {
          return u.adjoint();
        }
      },
      a);
}

Element unit_like(const Element& x) {
  return std::visit(
      [](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return ComplexMatrix::identity(u.dim());
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return WeightedSection::delta(u.group(), u.group()->identity());
        } else {
          return TrigPolynomial::constant(1.0);
        }
      },
      x);
}

Element zero_like(const Element& x) {
  return std::visit(
      [](const auto& u) -> Element {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return ComplexMatrix(u.dim());
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return WeightedSection(u.group());
        } else {
          return TrigPolynomial();
        }
      },
      x);
}

Element power(const Element& x, int k) {
  if (k < 1) throw Error(ErrorKind::domain, "power: exponent must be >= 1");
  Element result = x;
  Element base = x;
  bool have = false;
  while (k > 0) {
    if (k & 1) {
      result = have ? multiply(result, base) : base;
      have = true;
    }
    k >>= 1;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

bool is_zero(const Element& x) {
  return std::visit(
      [](const auto& u) -> bool {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return max_abs_entry(u) == 0.0;
        } else {
          return u.is_zero();
        }
      },
      x);
}

double max_coefficient(const Element& x) {
  return std::visit(
      [](const auto& u) -> double {
        using T = std::decay_t<decltype(u)>;
        double m = 0.0;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          m = max_abs_entry(u);
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          for (const auto& t : u.terms()) m = std::max(m, std::abs(t.value));
        } else {
          for (const auto& [n, c] : u.coefficients()) m = std::max(m, std::abs(c));
        }
        return m;
      },
      x);
}

double self_adjoint_defect(const Element& x) { return max_coefficient(subtract(x, element_adjoint(x))); }

}  // namespace kpq
