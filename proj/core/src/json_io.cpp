#include "adeglab/json_io.hpp"

#include "adeglab/errors.hpp"

namespace adeglab {

Json rational_to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw PreconditionError("expected a rational string");
  return parse_rational(j.get<std::string>());
}

Json function_to_json(const BooleanFunction& f) {
  return {{"arity", f.arity()}, {"table_hex", table_hex(f)}, {"bit_order", "x1-lsb"}};
}

BooleanFunction function_from_json(const Json& j) {
  try {
    return from_hex(j.at("arity").get<int>(), j.at("table_hex").get<std::string>());
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed function JSON: ") + e.what());
  }
}

Json polynomial_to_json(const MultilinearPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [vars, c] : p.terms()) {
    Json indices = Json::array();
    for (int i = 0; i < p.arity(); ++i) {
      if ((vars >> i) & 1) indices.push_back(i + 1);
    }
    terms.push_back({{"vars", std::move(indices)}, {"coeff", to_string(c)}});
  }
  return {{"arity", p.arity()}, {"terms", std::move(terms)}};
}

MultilinearPolynomial polynomial_from_json(const Json& j) {
  try {
    MultilinearPolynomial p(j.at("arity").get<int>());
    for (const auto& term : j.at("terms")) {
      MultilinearPolynomial::Monomial vars = 0;
      for (const auto& index : term.at("vars")) {
        const int i = index.get<int>();
        if (i < 1 || i > p.arity()) throw PreconditionError("polynomial JSON: variable index out of range");
        vars |= MultilinearPolynomial::Monomial{1} << (i - 1);
      }
      p.add_term(vars, rational_from_json(term.at("coeff")));
    }
    return p;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace adeglab
