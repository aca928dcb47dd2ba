#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bilinfrac {

using Rational = mpq_class;

/// Parses "a/b", "a" or a terminating decimal such as "0.25" into a reduced rational.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "a/b", or "a" when the denominator is one.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace bilinfrac
