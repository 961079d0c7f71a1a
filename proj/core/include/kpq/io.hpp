#pragma once

#include <nlohmann/json.hpp>

#include "kpq/element.hpp"

namespace kpq {

/// {"dim": n, "entries": [[re, im], ...]} row-major.
nlohmann::json to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// {"name": "F2"} or {"family": "free", "rank": 2}; families lattice(dim),
/// free(rank), heisenberg, cyclic(order).
nlohmann::json to_json(const GroupModel& g);
GroupPtr group_from_json(const nlohmann::json& j);

/// {"group": {...}, "terms": [{"word": "+1 -2", "re": x, "im": y}, ...]}.
nlohmann::json to_json(const WeightedSection& f);
WeightedSection section_from_json(const nlohmann::json& j);

/// {"coefficients": [{"n": k, "re": x, "im": y}, ...]}.
nlohmann::json to_json(const TrigPolynomial& f);
TrigPolynomial trig_from_json(const nlohmann::json& j);

/// {"matrix": ...} | {"section": ...} | {"trig": ...}.
nlohmann::json element_to_json(const Element& x);
Element element_from_json(const nlohmann::json& j);

/// Finite double from a JSON number; throws parse otherwise.
double finite_number(const nlohmann::json& j, const char* what);

}  // namespace kpq
