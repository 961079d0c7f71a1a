#include <cmath>

#include "kpq/error.hpp"
#include "kpq/io.hpp"

namespace kpq {

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::parse, std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::parse, std::string(what) + ": NaN/Inf rejected");
  return v;
}

namespace {

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw Error(ErrorKind::parse, std::string(what) + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw Error(ErrorKind::parse, std::string(what) + ": unknown key '" + k + "'");
  }
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > (1LL << 30))
    throw Error(ErrorKind::parse, std::string(what) + ": expected a positive integer");
  return j.get<int>();
}

}  // namespace

json to_json(const ComplexMatrix& a) {
  json entries = json::array();
  for (const auto& z : a.entries()) entries.push_back({z.real(), z.imag()});
  return {{"dim", a.dim()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  only_keys(j, {"dim", "entries"}, "matrix");
  const auto n = static_cast<std::size_t>(positive_int(j.at("dim"), "matrix.dim"));
  const auto& e = j.at("entries");
  if (!e.is_array() || e.size() != n * n)
    throw Error(ErrorKind::parse, "matrix: entries must hold dim^2 = " + std::to_string(n * n) + " values");
  std::vector<Complex> vals;
  vals.reserve(n * n);
  for (const auto& z : e) {
    if (z.is_array() && z.size() == 2) {
      vals.emplace_back(finite_number(z[0], "matrix entry"), finite_number(z[1], "matrix entry"));
    } else {
      vals.emplace_back(finite_number(z, "matrix entry"), 0.0);
    }
  }
  return ComplexMatrix(n, std::move(vals));
}

json to_json(const GroupModel& g) { return {{"name", g.name()}}; }

GroupPtr group_from_json(const json& j) {
  if (j.is_string()) return GroupModel::from_name(j.get<std::string>());
  only_keys(j, {"name", "family", "dim", "rank", "order"}, "group");
  if (j.contains("name")) return GroupModel::from_name(j.at("name").get<std::string>());
  const auto family = j.at("family").get<std::string>();
  if (family == "lattice") return GroupModel::lattice(positive_int(j.at("dim"), "group.dim"));
  if (family == "free") return GroupModel::free_group(positive_int(j.at("rank"), "group.rank"));
  if (family == "heisenberg") return GroupModel::heisenberg();
  if (family == "cyclic") return GroupModel::cyclic(positive_int(j.at("order"), "group.order"));
  throw Error(ErrorKind::parse, "group: unknown family '" + family + "'");
}

json to_json(const WeightedSection& f) {
  json terms = json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"word", f.group()->encode(t.element)}, {"re", t.value.real()}, {"im", t.value.imag()}});
  return {{"group", to_json(*f.group())}, {"terms", std::move(terms)}};
}

WeightedSection section_from_json(const json& j) {
  only_keys(j, {"group", "terms"}, "section");
  auto g = group_from_json(j.at("group"));
  std::vector<SectionTerm> terms;
  for (const auto& t : j.at("terms")) {
    only_keys(t, {"word", "re", "im"}, "section term");
    const double re = t.contains("re") ? finite_number(t.at("re"), "section term") : 0.0;
    const double im = t.contains("im") ? finite_number(t.at("im"), "section term") : 0.0;
    terms.push_back({g->decode(t.at("word").get<std::string>()), Complex(re, im)});
  }
  return WeightedSection(g, std::move(terms));
}

json to_json(const TrigPolynomial& f) {
  json coeffs = json::array();
  for (const auto& [n, c] : f.coefficients()) coeffs.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
  return {{"coefficients", std::move(coeffs)}};
}

TrigPolynomial trig_from_json(const json& j) {
  only_keys(j, {"coefficients"}, "trig");
  std::map<std::int64_t, Complex> coeffs;
  for (const auto& t : j.at("coefficients")) {
    only_keys(t, {"n", "re", "im"}, "trig coefficient");
    const double re = t.contains("re") ? finite_number(t.at("re"), "trig coefficient") : 0.0;
    const double im = t.contains("im") ? finite_number(t.at("im"), "trig coefficient") : 0.0;
    coeffs[t.at("n").get<std::int64_t>()] += Complex(re, im);
  }
  return TrigPolynomial(std::move(coeffs));
}

json element_to_json(const Element& x) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ComplexMatrix>) {
          return {{"matrix", to_json(v)}};
        } else if constexpr (std::is_same_v<T, WeightedSection>) {
          return {{"section", to_json(v)}};
        } else {
          return {{"trig", to_json(v)}};
        }
      },
      x);
}

Element element_from_json(const json& j) {
  only_keys(j, {"matrix", "section", "trig"}, "element");
  if (j.size() != 1) throw Error(ErrorKind::parse, "element: exactly one of matrix/section/trig expected");
  if (j.contains("matrix")) return matrix_from_json(j.at("matrix"));
  if (j.contains("section")) return section_from_json(j.at("section"));
  return trig_from_json(j.at("trig"));
}

}  // namespace kpq
