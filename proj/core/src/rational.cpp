#include "tdrk/rational.hpp"

#include <cctype>

#include "tdrk/errors.hpp"

namespace tdrk {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ConfigError("malformed rational '" + std::string(whole) + "'");
  for (char ch : digits) {
    if (std::isdigit(static_cast<unsigned char>(ch)) == 0) {
      throw ConfigError("malformed rational '" + std::string(whole) + "'");
    }
  }
  return boost::multiprecision::cpp_int(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  boost::multiprecision::cpp_int num;
  boost::multiprecision::cpp_int den = 1;
  if (slash == std::string_view::npos) {
    num = parse_integer(body, text);
  } else {
    num = parse_integer(body.substr(0, slash), text);
    den = parse_integer(body.substr(slash + 1), text);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

DoubleDouble to_real(const Rational& r) {
  const double hi = r.convert_to<double>();
  const Rational rest = r - Rational(hi);
  const double lo = rest.convert_to<double>();
  return DoubleDouble(hi) + DoubleDouble(lo);
}

}  // namespace tdrk
