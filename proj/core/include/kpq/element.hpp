#pragma once

#include <string>
#include <variant>

#include "kpq/matrix.hpp"
#include "kpq/section.hpp"
#include "kpq/trig.hpp"

namespace kpq {

enum class Carrier { matrix, section, trig };

/// An algebra element in one of the three carriers the catalogue uses.
using Element = std::variant<ComplexMatrix, WeightedSection, TrigPolynomial>;

[[nodiscard]] Carrier carrier_of(const Element& x);
[[nodiscard]] std::string carrier_name(Carrier c);
[[nodiscard]] std::string describe(const Element& x);

Element multiply(const Element& a, const Element& b);
Element add(const Element& a, const Element& b);
Element subtract(const Element& a, const Element& b);
Element scale(Complex s, const Element& a);
Element element_adjoint(const Element& a);

/// Multiplicative unit of the carrier x lives in (I, delta_e, constant 1).
Element unit_like(const Element& x);
Element zero_like(const Element& x);

/// x^k by binary powering, k >= 1.
Element power(const Element& x, int k);

[[nodiscard]] bool is_zero(const Element& x);

/// Largest coefficient of |x - x*|; 0 for self-adjoint elements.
[[nodiscard]] double self_adjoint_defect(const Element& x);

/// Largest absolute coefficient (matrix entry, section value, Fourier coefficient).
[[nodiscard]] double max_coefficient(const Element& x);

}  // namespace kpq
