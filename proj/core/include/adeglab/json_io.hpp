#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "adeglab/boolfn.hpp"
#include "adeglab/polynomial.hpp"
#include "adeglab/rational.hpp"

namespace adeglab {

using Json = nlohmann::json;

/// Rationals travel as strings ("p/q") so no precision is lost.
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j);

/// {"arity": n, "table_hex": "...", "bit_order": "x1-lsb"}
Json function_to_json(const BooleanFunction& f);
BooleanFunction function_from_json(const Json& j);

/// {"arity": n, "terms": [{"vars": [1-based indices], "coeff": "p/q"}, ...]}
Json polynomial_to_json(const MultilinearPolynomial& p);
MultilinearPolynomial polynomial_from_json(const Json& j);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace adeglab
