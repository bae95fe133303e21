#include "adeglab/rational.hpp"

#include <cctype>

#include "adeglab/errors.hpp"

namespace adeglab {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw PreconditionError("empty rational literal");
  std::size_t slash = s.find('/');
  auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  std::string_view num = std::string_view(s).substr(0, slash);
  std::string_view den =
      slash == std::string::npos ? std::string_view("1") : std::string_view(s).substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) {
    throw PreconditionError("not an exact rational: '" + s + "' (expected p or p/q)");
  }
  std::string num_str(num);
  if (num_str[0] == '+') num_str.erase(0, 1);
  mpz_class n(num_str, 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw PreconditionError("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace adeglab
