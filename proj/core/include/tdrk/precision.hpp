#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "tdrk/double_double.hpp"

namespace tdrk {

/// Working representation for every emulated value.
using Real = DoubleDouble;

/// Floating-point formats the emulator can round to.
///
/// EXT stands in for quad precision and is realized as double-double
/// arithmetic (~106 significand bits), not IEEE binary128.
enum class Format : std::uint8_t { B16, B32, B64, EXT };

/// Canonical names: "b16", "b32", "b64", "ext".
std::string_view format_name(Format f);
/// Short label used in table headers: "16", "32", "64", "ext".
std::string_view format_label(Format f);
/// Parses a format name; throws ConfigError on unknown input.
/// Accepts the canonical names and the bare bit counts "16", "32", "64", "128".
Format parse_format(std::string_view name);

/// Position in the nesting order B16 < B32 < B64 < EXT.
constexpr int format_rank(Format f) { return static_cast<int>(f); }
/// True when every value representable in `narrow` is representable in `wide`.
constexpr bool contains(Format wide, Format narrow) {
  return format_rank(wide) >= format_rank(narrow);
}

/// Unit roundoff 2^-p for the format (EXT uses the double-double 2^-105).
double unit_roundoff(Format f);

namespace detail {

/// Round the exact value hi + lo to a binary format with `precision`
/// significand bits (including the hidden bit), minimum normal exponent
/// `emin` and largest finite magnitude `max_finite`. Round to nearest, ties
/// to even, gradual underflow, overflow to infinity.
double round_binary(double hi, double lo, int precision, int emin, double max_finite);

inline double round_b16(double x) { return round_binary(x, 0.0, 11, -14, 65504.0); }

inline double round_b32(double x) {
  return static_cast<double>(static_cast<float>(x));
}

}  // namespace detail

/// Nearest value of `f` to x (ties to even). NaN propagates.
Real round_value(const Real& x, Format f);

/// A value together with the format it was last rounded to.
struct SimScalar {
  Real value;
  Format format = Format::B64;

  [[nodiscard]] double to_double() const { return value.hi; }
  friend bool operator==(const SimScalar&, const SimScalar&) = default;
};

enum class ArithOp : std::uint8_t { Add, Sub, Mul, Div };

/// Rounds x to the policy's format.
SimScalar round_to(const Real& x, Format policy);

/// Applies op to a and b exactly (or to double-double accuracy for EXT) and
/// rounds the result to `policy`. Overflow and division by zero give +-inf
/// or NaN; nothing throws.
SimScalar rounded_arith(ArithOp op, const SimScalar& a, const SimScalar& b, Format policy);

/// Arithmetic with rounding after every operation, specialised per format.
template <Format F>
struct Arith;

template <>
struct Arith<Format::B16> {
  static Real round(const Real& x) { return detail::round_binary(x.hi, x.lo, 11, -14, 65504.0); }
  static Real add(const Real& a, const Real& b) { return detail::round_b16(a.hi + b.hi); }
  static Real sub(const Real& a, const Real& b) { return detail::round_b16(a.hi - b.hi); }
  static Real mul(const Real& a, const Real& b) { return detail::round_b16(a.hi * b.hi); }
  static Real div(const Real& a, const Real& b) { return detail::round_b16(a.hi / b.hi); }
};

// binary64 holds more than 2p+2 bits for p = 11 and p = 24, so computing in
// binary64 and rounding once more gives the correctly rounded result.
template <>
struct Arith<Format::B32> {
  static Real round(const Real& x) {
    return x.lo == 0.0 ? Real(detail::round_b32(x.hi))
                       : Real(detail::round_binary(x.hi, x.lo, 24, -126, 3.4028234663852886e38));
  }
  static Real add(const Real& a, const Real& b) { return detail::round_b32(a.hi + b.hi); }
  static Real sub(const Real& a, const Real& b) { return detail::round_b32(a.hi - b.hi); }
  static Real mul(const Real& a, const Real& b) { return detail::round_b32(a.hi * b.hi); }
  static Real div(const Real& a, const Real& b) { return detail::round_b32(a.hi / b.hi); }
};

template <>
struct Arith<Format::B64> {
  static Real round(const Real& x) { return Real(x.hi); }
  static Real add(const Real& a, const Real& b) { return Real(a.hi + b.hi); }
  static Real sub(const Real& a, const Real& b) { return Real(a.hi - b.hi); }
  static Real mul(const Real& a, const Real& b) { return Real(a.hi * b.hi); }
  static Real div(const Real& a, const Real& b) { return Real(a.hi / b.hi); }
};

template <>
struct Arith<Format::EXT> {
  static Real round(const Real& x) { return x; }
  static Real add(const Real& a, const Real& b) { return a + b; }
  static Real sub(const Real& a, const Real& b) { return a - b; }
  static Real mul(const Real& a, const Real& b) { return a * b; }
  static Real div(const Real& a, const Real& b) { return a / b; }
};

/// Calls fn(std::integral_constant<Format, F>{}) for the runtime format f.
template <typename Fn>
decltype(auto) dispatch(Format f, Fn&& fn) {
  switch (f) {
    case Format::B16:
      return fn(std::integral_constant<Format, Format::B16>{});
    case Format::B32:
      return fn(std::integral_constant<Format, Format::B32>{});
    case Format::B64:
      return fn(std::integral_constant<Format, Format::B64>{});
    case Format::EXT:
    default:
      return fn(std::integral_constant<Format, Format::EXT>{});
  }
}

/// Fixed-length vector of values sharing one format.
class SimVector {
 public:
  SimVector() = default;
  /// Zero vector.
  SimVector(std::size_t n, Format f) : format_(f), data_(n, Real(0.0)) {}
  /// Rounds every value to f.
  SimVector(std::span<const Real> values, Format f);
  SimVector(std::span<const double> values, Format f);

  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] Format format() const { return format_; }
  [[nodiscard]] SimScalar at(std::size_t i) const { return {data_.at(i), format_}; }
  [[nodiscard]] const Real& operator[](std::size_t i) const { return data_[i]; }
  [[nodiscard]] std::span<const Real> values() const { return data_; }
  [[nodiscard]] std::vector<double> to_doubles() const;

  /// Stores x rounded to this vector's format.
  void set(std::size_t i, const Real& x);

  /// Raw write; the caller guarantees x is representable in format().
  Real& raw(std::size_t i) { return data_[i]; }
  std::span<Real> raw_values() { return data_; }

  /// Relabels the vector with a wider format. Values are unchanged because
  /// they are representable in any format containing the current one.
  [[nodiscard]] SimVector widened(Format wider) const;

  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const SimVector&, const SimVector&) = default;

 private:
  Format format_ = Format::B64;
  std::vector<Real> data_;
};

/// Elementwise round_to; idempotent when f matches the vector's format.
SimVector cast_vector(const SimVector& v, Format f);

/// Max-norm of a - b evaluated in double-double and returned as binary64.
double max_abs_diff(const SimVector& a, const SimVector& b);
double max_abs(const SimVector& v);

/// y <- y + alpha * x, both operations rounded in y's format.
void axpy(const Real& alpha, const SimVector& x, SimVector& y);
/// Elementwise x * y in `f`.
SimVector hadamard(const SimVector& x, const SimVector& y, Format f);
/// alpha * x in `f`.
SimVector scaled(const Real& alpha, const SimVector& x, Format f);

}  // namespace tdrk
