#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tdrk/double_double.hpp"

namespace tdrk {

/// Exact rational in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Parses "p", "-p", "p/q" or "-p/q". Throws ConfigError on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& r);

/// Nearest double-double to r (about 106 correct bits).
DoubleDouble to_real(const Rational& r);
double to_double(const Rational& r);

}  // namespace tdrk
