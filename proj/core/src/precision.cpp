#include "tdrk/precision.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "tdrk/errors.hpp"

namespace tdrk {

std::string_view format_name(Format f) {
  switch (f) {
    case Format::B16:
      return "b16";
    case Format::B32:
      return "b32";
    case Format::B64:
      return "b64";
    case Format::EXT:
      return "ext";
  }
  return "?";
}

std::string_view format_label(Format f) {
  switch (f) {
    case Format::B16:
      return "16";
    case Format::B32:
      return "32";
    case Format::B64:
      return "64";
    case Format::EXT:
      return "ext";
  }
  return "?";
}

Format parse_format(std::string_view name) {
  if (name == "b16" || name == "16" || name == "half") return Format::B16;
  if (name == "b32" || name == "32" || name == "single") return Format::B32;
  if (name == "b64" || name == "64" || name == "double") return Format::B64;
  if (name == "ext" || name == "128" || name == "quad") return Format::EXT;
  throw ConfigError("unknown precision '" + std::string(name) + "' (expected b16, b32, b64 or ext)");
}

double unit_roundoff(Format f) {
  switch (f) {
    case Format::B16:
      return std::ldexp(1.0, -11);
    case Format::B32:
      return std::ldexp(1.0, -24);
    case Format::B64:
      return std::ldexp(1.0, -53);
    case Format::EXT:
      return std::ldexp(1.0, -105);
  }
  return 0.0;
}

namespace detail {

double round_binary(double hi, double lo, int precision, int emin, double max_finite) {
  if (!std::isfinite(hi)) return hi;
  if (hi == 0.0) {
    if (lo == 0.0) return hi;
    hi = lo;
    lo = 0.0;
  }
  const auto bits = std::bit_cast<std::uint64_t>(hi);
  const bool negative = (bits >> 63) != 0;
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  constexpr std::uint64_t kMantissa = (std::uint64_t{1} << 52) - 1;

  std::uint64_t sig;
  int e;  // |hi| = sig * 2^e
  int lead;  // floor(log2 |hi|)
  if (biased == 0) {
    sig = bits & kMantissa;
    e = -1074;
    lead = (63 - std::countl_zero(sig)) + e;
  } else {
    sig = (bits & kMantissa) | (std::uint64_t{1} << 52);
    e = biased - 1075;
    lead = biased - 1023;
  }

  const int quantum = std::max(lead, emin) - (precision - 1);
  const int drop = quantum - e;
  double magnitude;
  if (drop <= 0) {
    magnitude = std::fabs(hi);
  } else if (drop > 54) {
    magnitude = 0.0;
  } else {
    std::uint64_t keep = sig >> drop;
    const std::uint64_t rem = sig & ((std::uint64_t{1} << drop) - 1);
    const std::uint64_t half = std::uint64_t{1} << (drop - 1);
    bool up = rem > half;
    if (rem == half) {
      if (lo != 0.0) {
        up = (lo > 0.0) != negative;
      } else {
        up = (keep & 1U) != 0;
      }
    }
    keep += up ? 1 : 0;
    magnitude = std::ldexp(static_cast<double>(keep), quantum);
  }
  if (magnitude > max_finite) magnitude = std::numeric_limits<double>::infinity();
  return negative ? -magnitude : magnitude;
}

}  // namespace detail

Real round_value(const Real& x, Format f) {
  return dispatch(f, [&](auto tag) { return Arith<decltype(tag)::value>::round(x); });
}

SimScalar round_to(const Real& x, Format policy) { return {round_value(x, policy), policy}; }

SimScalar rounded_arith(ArithOp op, const SimScalar& a, const SimScalar& b, Format policy) {
  const Real x = round_value(a.value, policy);
  const Real y = round_value(b.value, policy);
  return dispatch(policy, [&](auto tag) -> SimScalar {
    using A = Arith<decltype(tag)::value>;
    switch (op) {
      case ArithOp::Add:
        return {A::add(x, y), policy};
      case ArithOp::Sub:
        return {A::sub(x, y), policy};
      case ArithOp::Mul:
        return {A::mul(x, y), policy};
      case ArithOp::Div:
      default:
        return {A::div(x, y), policy};
    }
  });
}

SimVector::SimVector(std::span<const Real> values, Format f) : format_(f), data_(values.size()) {
  for (std::size_t i = 0; i < values.size(); ++i) data_[i] = round_value(values[i], f);
}

SimVector::SimVector(std::span<const double> values, Format f) : format_(f), data_(values.size()) {
  for (std::size_t i = 0; i < values.size(); ++i) data_[i] = round_value(Real(values[i]), f);
}

std::vector<double> SimVector::to_doubles() const {
  std::vector<double> out(data_.size());
  std::transform(data_.begin(), data_.end(), out.begin(), [](const Real& r) { return r.hi; });
  return out;
}

void SimVector::set(std::size_t i, const Real& x) { data_.at(i) = round_value(x, format_); }

SimVector SimVector::widened(Format wider) const {
  if (!contains(wider, format_)) {
    throw ConfigError("cannot widen " + std::string(format_name(format_)) + " to " +
                      std::string(format_name(wider)));
  }
  SimVector out = *this;
  out.format_ = wider;
  return out;
}

bool SimVector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Real& r) { return r.is_finite(); });
}

SimVector cast_vector(const SimVector& v, Format f) {
  if (contains(f, v.format())) return v.widened(f);
  return SimVector(v.values(), f);
}

double max_abs_diff(const SimVector& a, const SimVector& b) {
  if (a.size() != b.size()) throw ConfigError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Real d = a[i] - b[i];
    if (!d.is_finite()) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::fabs(d.hi));
  }
  return m;
}

double max_abs(const SimVector& v) {
  double m = 0.0;
  for (const Real& r : v.values()) {
    if (!r.is_finite()) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::fabs(r.hi));
  }
  return m;
}

void axpy(const Real& alpha, const SimVector& x, SimVector& y) {
  if (x.size() != y.size()) throw ConfigError("axpy: length mismatch");
  const SimVector xs = cast_vector(x, y.format());
  dispatch(y.format(), [&](auto tag) {
    using A = Arith<decltype(tag)::value>;
    const Real a = A::round(alpha);
    auto out = y.raw_values();
    const auto in = xs.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = A::add(out[i], A::mul(a, in[i]));
  });
}

SimVector hadamard(const SimVector& x, const SimVector& y, Format f) {
  if (x.size() != y.size()) throw ConfigError("hadamard: length mismatch");
  const SimVector xs = cast_vector(x, f);
  const SimVector ys = cast_vector(y, f);
  SimVector out(x.size(), f);
  dispatch(f, [&](auto tag) {
    using A = Arith<decltype(tag)::value>;
    for (std::size_t i = 0; i < out.size(); ++i) out.raw(i) = A::mul(xs[i], ys[i]);
  });
  return out;
}

SimVector scaled(const Real& alpha, const SimVector& x, Format f) {
  const SimVector xs = cast_vector(x, f);
  SimVector out(x.size(), f);
  dispatch(f, [&](auto tag) {
    using A = Arith<decltype(tag)::value>;
    const Real a = A::round(alpha);
    for (std::size_t i = 0; i < out.size(); ++i) out.raw(i) = A::mul(a, xs[i]);
  });
  return out;
}

}  // namespace tdrk
