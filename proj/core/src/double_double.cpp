#include "tdrk/double_double.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace tdrk {

namespace {

// Taylor series for |theta| <= pi/4; 30 terms reach well below 2^-106.
void sincos_small(const DoubleDouble& theta, DoubleDouble& s, DoubleDouble& c) {
  const DoubleDouble t2 = theta * theta;
  DoubleDouble term = theta;
  s = theta;
  for (int k = 1; k < 30; ++k) {
    term = term * t2 / DoubleDouble(static_cast<double>((2 * k) * (2 * k + 1)));
    if (k % 2 == 1) {
      s -= term;
    } else {
      s += term;
    }
    if (std::abs(term.hi) < 1e-36) break;
  }
  term = DoubleDouble(1.0);
  c = term;
  for (int k = 1; k < 30; ++k) {
    term = term * t2 / DoubleDouble(static_cast<double>((2 * k - 1) * (2 * k)));
    if (k % 2 == 1) {
      c -= term;
    } else {
      c += term;
    }
    if (std::abs(term.hi) < 1e-36) break;
  }
}

}  // namespace

void sincospi(const DoubleDouble& x, DoubleDouble& s, DoubleDouble& c) {
  if (!x.is_finite()) {
    s = c = DoubleDouble(std::nan(""));
    return;
  }
  // y = x mod 2 in [-1, 1]; subtraction of an even integer is exact enough.
  const double periods = std::nearbyint(x.hi / 2.0);
  DoubleDouble y = x - DoubleDouble(2.0 * periods);
  // Quarter-period index k, remainder r in [-1/4, 1/4].
  const double k = std::nearbyint(2.0 * y.hi);
  const DoubleDouble r = y - DoubleDouble(k / 2.0);
  DoubleDouble sr, cr;
  if (r.hi == 0.0 && r.lo == 0.0) {
    sr = DoubleDouble(0.0);
    cr = DoubleDouble(1.0);
  } else {
    sincos_small(kPi * r, sr, cr);
  }
  const int quadrant = ((static_cast<int>(k) % 4) + 4) % 4;
  switch (quadrant) {
    case 0:
      s = sr;
      c = cr;
      break;
    case 1:
      s = cr;
      c = -sr;
      break;
    case 2:
      s = -sr;
      c = -cr;
      break;
    default:
      s = -cr;
      c = sr;
      break;
  }
}

std::string to_string(const DoubleDouble& x) {
  using boost::multiprecision::cpp_bin_float_50;
  if (!x.is_finite()) return std::to_string(x.hi);
  cpp_bin_float_50 v(x.hi);
  v += cpp_bin_float_50(x.lo);
  return v.str(32, std::ios_base::scientific);
}

}  // namespace tdrk
