#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace adeglab {

/// Exact rational number. Always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Parses "p", "p/q" or "-p/q". Floats are rejected on purpose so that
/// thresholds such as 1/3 stay exact end to end.
Rational parse_rational(std::string_view text);

/// Formats as "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace adeglab
