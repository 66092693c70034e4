#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "tdrk/errors.hpp"
#include "tdrk/precision.hpp"

using namespace tdrk;

namespace {

// Independent binary16 oracle: decode all 2^16 patterns into doubles.
double decode_half(std::uint16_t bits) {
  const int sign = bits >> 15;
  const int exp = (bits >> 10) & 0x1F;
  const int frac = bits & 0x3FF;
  double v;
  if (exp == 0) {
    v = std::ldexp(static_cast<double>(frac), -24);
  } else if (exp == 31) {
    v = frac == 0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
  } else {
    v = std::ldexp(static_cast<double>(1024 + frac), exp - 25);
  }
  return sign ? -v : v;
}

// Sorted non-negative finite half values with their significand parity.
struct HalfTable {
  std::vector<double> values;
  std::vector<int> odd;
  HalfTable() {
    for (std::uint32_t b = 0; b < 0x7C00; ++b) {
      values.push_back(decode_half(static_cast<std::uint16_t>(b)));
      odd.push_back(static_cast<int>(b & 1U));
    }
  }
};

const HalfTable& half_table() {
  static const HalfTable t;
  return t;
}

// Nearest half by table search, ties to the even pattern.
double oracle_half(double x) {
  if (std::isnan(x)) return x;
  const auto& t = half_table();
  const double a = std::fabs(x);
  const double max = t.values.back();
  const double overflow = max + std::ldexp(1.0, 4);  // max + half ulp (ulp = 32)
  double r;
  if (a >= overflow) {
    r = std::numeric_limits<double>::infinity();
  } else if (a >= max) {
    r = max;
  } else {
    const auto it = std::lower_bound(t.values.begin(), t.values.end(), a);
    const auto hi = static_cast<std::size_t>(it - t.values.begin());
    if (t.values[hi] == a) {
      r = a;
    } else {
      const std::size_t lo = hi - 1;
      const double dlo = a - t.values[lo];
      const double dhi = t.values[hi] - a;
      if (dlo < dhi) {
        r = t.values[lo];
      } else if (dhi < dlo) {
        r = t.values[hi];
      } else {
        r = t.odd[lo] ? t.values[hi] : t.values[lo];
      }
    }
  }
  return std::signbit(x) ? -r : r;
}

double random_wide(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mant(-2.0, 2.0);
  std::uniform_int_distribution<int> exps(-30, 18);
  return std::ldexp(mant(rng), exps(rng));
}

}  // namespace

TEST(Precision, RoundToExamples) {
  EXPECT_EQ(round_to(1.0, Format::B16).value, Real(1.0));
  EXPECT_EQ(round_to(0.1, Format::B16).value.to_double(), 0.0999755859375);
  EXPECT_EQ(oracle_half(0.1), 0.0999755859375);
  EXPECT_EQ(round_to(0.1, Format::B16).format, Format::B16);
  const double x = 0.123456789012345;
  EXPECT_EQ(round_to(x, Format::B64).value.to_double(), x);
}

TEST(Precision, HalfMatchesTableOracle) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200000; ++i) {
    const double x = random_wide(rng);
    ASSERT_EQ(round_to(x, Format::B16).value.to_double(), oracle_half(x)) << x;
  }
  // Every midpoint between neighbouring halves exercises ties-to-even.
  const auto& t = half_table();
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    const double mid = 0.5 * (t.values[i] + t.values[i + 1]);
    ASSERT_EQ(round_to(mid, Format::B16).value.to_double(), oracle_half(mid)) << mid;
    ASSERT_EQ(round_to(-mid, Format::B16).value.to_double(), oracle_half(-mid)) << mid;
  }
}

TEST(Precision, HalfSubnormalsAndOverflow) {
  const double tiny = std::ldexp(1.0, -24);
  EXPECT_EQ(round_to(tiny, Format::B16).value.to_double(), tiny);
  EXPECT_EQ(round_to(0.5 * tiny, Format::B16).value.to_double(), 0.0);  // tie to even zero
  EXPECT_EQ(round_to(0.75 * tiny, Format::B16).value.to_double(), tiny);
  EXPECT_EQ(round_to(1.5 * tiny, Format::B16).value.to_double(), 2.0 * tiny);
  EXPECT_EQ(round_to(65504.0, Format::B16).value.to_double(), 65504.0);
  EXPECT_EQ(round_to(65519.0, Format::B16).value.to_double(), 65504.0);
  EXPECT_TRUE(std::isinf(round_to(65520.0, Format::B16).value.to_double()));
  EXPECT_TRUE(std::isinf(round_to(-1e6, Format::B16).value.to_double()));
  EXPECT_LT(round_to(-1e6, Format::B16).value.to_double(), 0.0);
  EXPECT_TRUE(std::isnan(round_to(std::nan(""), Format::B16).value.to_double()));
}

TEST(Precision, HalfUsesLowWordOnTies) {
  // 1 + 2^-11 is a tie in binary16; a tiny positive tail breaks it upwards.
  const Real tie(1.0 + std::ldexp(1.0, -11));
  EXPECT_EQ(round_to(tie, Format::B16).value.to_double(), 1.0);
  const Real above{1.0 + std::ldexp(1.0, -11), std::ldexp(1.0, -80)};
  EXPECT_EQ(round_to(above, Format::B16).value.to_double(), 1.0 + std::ldexp(1.0, -10));
  const Real below{1.0 + std::ldexp(1.0, -11), -std::ldexp(1.0, -80)};
  EXPECT_EQ(round_to(below, Format::B16).value.to_double(), 1.0);
}

TEST(Precision, SingleMatchesNeighbourOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 100000; ++i) {
    const double x = u(rng);
    const float lo = std::nextafter(static_cast<float>(x), -std::numeric_limits<float>::infinity());
    const float hi = std::nextafter(lo, std::numeric_limits<float>::infinity());
    // x lies in [lo, hi] or is exactly representable.
    const double r = round_to(x, Format::B32).value.to_double();
    const double dlo = std::fabs(x - lo), dhi = std::fabs(hi - x), dr = std::fabs(x - r);
    ASSERT_LE(dr, std::min(dlo, dhi));
    ASSERT_EQ(static_cast<double>(static_cast<float>(r)), r);
  }
}

TEST(Precision, RoundedArithExamples) {
  const auto a = round_to(1.0, Format::B16);
  const auto b = round_to(2.0, Format::B16);
  EXPECT_EQ(rounded_arith(ArithOp::Add, a, b, Format::B16).value.to_double(), 3.0);
  const auto big = round_to(2048.0, Format::B16);
  EXPECT_EQ(rounded_arith(ArithOp::Add, big, a, Format::B16).value.to_double(), 2048.0);
  EXPECT_EQ(oracle_half(2049.0), 2048.0);
  const auto x = round_to(0.7071067811865476, Format::B64);
  EXPECT_EQ(rounded_arith(ArithOp::Mul, round_to(1.0, Format::B64), x, Format::B64).value, x.value);
}

TEST(Precision, DivisionByZeroFollowsIeee) {
  const auto one = round_to(1.0, Format::B16);
  const auto zero = round_to(0.0, Format::B16);
  EXPECT_TRUE(std::isinf(rounded_arith(ArithOp::Div, one, zero, Format::B16).value.to_double()));
  EXPECT_TRUE(std::isnan(rounded_arith(ArithOp::Div, zero, zero, Format::B32).value.to_double()));
}

TEST(Precision, Idempotence) {
  std::mt19937_64 rng(1);
  for (Format f : {Format::B16, Format::B32, Format::B64, Format::EXT}) {
    for (int i = 0; i < 20000; ++i) {
      const Real x{random_wide(rng), random_wide(rng) * 1e-20};
      const Real once = round_value(x, f);
      ASSERT_EQ(round_value(once, f), once);
    }
  }
}

TEST(Precision, Monotonicity) {
  std::mt19937_64 rng(2);
  for (Format f : {Format::B16, Format::B32, Format::B64}) {
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) xs.push_back(random_wide(rng));
    std::sort(xs.begin(), xs.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      const double r = round_value(Real(x), f).to_double();
      ASSERT_LE(prev, r);
      prev = r;
    }
  }
}

TEST(Precision, Nesting) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const double x = random_wide(rng);
    const Real h = round_value(Real(x), Format::B16);
    ASSERT_EQ(round_value(h, Format::B32), h);
    ASSERT_EQ(round_value(h, Format::B64), h);
    ASSERT_EQ(round_value(h, Format::EXT), h);
    const Real s = round_value(Real(x), Format::B32);
    ASSERT_EQ(round_value(s, Format::B64), s);
  }
}

TEST(Precision, Binary64BitwiseNative) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 50000; ++i) {
    const double a = u(rng), b = u(rng);
    const auto sa = round_to(a, Format::B64), sb = round_to(b, Format::B64);
    ASSERT_EQ(std::bit_cast<std::uint64_t>(rounded_arith(ArithOp::Add, sa, sb, Format::B64).value.to_double()),
              std::bit_cast<std::uint64_t>(a + b));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(rounded_arith(ArithOp::Sub, sa, sb, Format::B64).value.to_double()),
              std::bit_cast<std::uint64_t>(a - b));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(rounded_arith(ArithOp::Mul, sa, sb, Format::B64).value.to_double()),
              std::bit_cast<std::uint64_t>(a * b));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(rounded_arith(ArithOp::Div, sa, sb, Format::B64).value.to_double()),
              std::bit_cast<std::uint64_t>(a / b));
  }
}

TEST(Precision, ExtendedAgainstBigFloat) {
  using big = boost::multiprecision::cpp_bin_float_50;
  auto to_big = [](const Real& r) { return big(r.hi) + big(r.lo); };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const double bound = std::ldexp(1.0, -100);
  for (int i = 0; i < 5000; ++i) {
    const Real a = Real(u(rng)) / Real(3.0);
    const Real b = Real(u(rng)) / Real(7.0);
    const auto sa = round_to(a, Format::EXT), sb = round_to(b, Format::EXT);
    const big ba = to_big(a), bb = to_big(b);
    auto rel = [](const big& got, const big& want) { return static_cast<double>(abs((got - want) / want)); };
    ASSERT_LE(rel(to_big(rounded_arith(ArithOp::Add, sa, sb, Format::EXT).value), ba + bb), bound);
    ASSERT_LE(rel(to_big(rounded_arith(ArithOp::Mul, sa, sb, Format::EXT).value), ba * bb), bound);
    ASSERT_LE(rel(to_big(rounded_arith(ArithOp::Div, sa, sb, Format::EXT).value), ba / bb), bound);
    // Well-conditioned subtraction: operands of opposite sign.
    ASSERT_LE(rel(to_big(rounded_arith(ArithOp::Sub, sa, round_to(-b, Format::EXT), Format::EXT).value), ba + bb),
              bound);
  }
}

TEST(Precision, CastVectorExamples) {
  const std::vector<double> v{1.0, 0.5};
  const SimVector a(std::span<const double>(v), Format::B64);
  const SimVector h = cast_vector(a, Format::B16);
  EXPECT_EQ(h.format(), Format::B16);
  EXPECT_EQ(h.to_doubles(), v);

  const std::vector<double> tenth{0.1};
  const SimVector t = cast_vector(SimVector(std::span<const double>(tenth), Format::B64), Format::B16);
  ASSERT_EQ(t.size(), 1U);
  EXPECT_EQ(t[0].to_double(), 0.0999755859375);

  EXPECT_EQ(cast_vector(t, Format::B16), t);
  EXPECT_EQ(cast_vector(a, Format::B64), a);
}

TEST(Precision, WideningKeepsValues) {
  const std::vector<double> v{0.1, -3.25};
  const SimVector h(std::span<const double>(v), Format::B16);
  const SimVector w = h.widened(Format::B64);
  EXPECT_EQ(w.format(), Format::B64);
  EXPECT_EQ(w.to_doubles(), h.to_doubles());
  EXPECT_THROW((void)w.widened(Format::B16), ConfigError);
}

TEST(Precision, FormatNames) {
  EXPECT_EQ(format_name(Format::B16), "b16");
  EXPECT_EQ(format_name(Format::EXT), "ext");
  EXPECT_EQ(parse_format("b32"), Format::B32);
  EXPECT_EQ(parse_format("64"), Format::B64);
  EXPECT_EQ(parse_format("ext"), Format::EXT);
  EXPECT_THROW(parse_format("b8"), ConfigError);
  EXPECT_TRUE(contains(Format::EXT, Format::B16));
  EXPECT_FALSE(contains(Format::B16, Format::B32));
}

TEST(Precision, AxpyRoundsInTargetFormat) {
  const std::vector<double> x{1.0}, y{2048.0};
  SimVector yy(std::span<const double>(y), Format::B16);
  axpy(Real(1.0), SimVector(std::span<const double>(x), Format::B16), yy);
  EXPECT_EQ(yy[0].to_double(), 2048.0);
  EXPECT_THROW(axpy(Real(1.0), SimVector(2, Format::B16), yy), ConfigError);
}
