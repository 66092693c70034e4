#pragma once

#include <cmath>
#include <string>

namespace tdrk {

/// Unevaluated sum hi + lo of two binary64 numbers with |lo| <= ulp(hi)/2.
///
/// Gives roughly 106 significand bits. Used as the extended working
/// representation: every lower format value is carried as {value, 0}.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  [[nodiscard]] double to_double() const { return hi; }
  [[nodiscard]] bool is_finite() const { return std::isfinite(hi); }

  friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi == b.hi && a.lo == b.lo;
  }
};

namespace dd_detail {

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return {s, 0.0};
  const double e = b - (s - a);
  return {s, e};
}

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return {s, 0.0};
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return {p, 0.0};
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  using namespace dd_detail;
  DoubleDouble s = two_sum(a.hi, b.hi);
  if (!std::isfinite(s.hi)) return s;
  const DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  using namespace dd_detail;
  DoubleDouble p = two_prod(a.hi, b.hi);
  if (!std::isfinite(p.hi)) return p;
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
  const double q1 = a.hi / b.hi;
  if (!std::isfinite(q1) || b.hi == 0.0) return {q1, 0.0};
  DoubleDouble r = a - DoubleDouble(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - DoubleDouble(q2) * b;
  const double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, const DoubleDouble& b) { return a = a / b; }

inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }

/// pi to double-double accuracy.
inline constexpr DoubleDouble kPi{3.141592653589793116e+00, 1.224646799147353207e-16};

/// sin(pi*x) and cos(pi*x) to about 2^-104 absolute accuracy.
///
/// The argument is reduced in units of pi, so integer and half-integer
/// arguments produce exact zeros.
void sincospi(const DoubleDouble& x, DoubleDouble& s, DoubleDouble& c);

inline DoubleDouble sinpi(const DoubleDouble& x) {
  DoubleDouble s, c;
  sincospi(x, s, c);
  return s;
}

inline DoubleDouble cospi(const DoubleDouble& x) {
  DoubleDouble s, c;
  sincospi(x, s, c);
  return c;
}

/// Decimal rendering with ~32 significant digits.
std::string to_string(const DoubleDouble& x);

}  // namespace tdrk
