#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tdrk/rational.hpp"

namespace tdrk {

/// Coefficients of an explicit two-derivative Runge-Kutta method.
///
/// Stage i is
///   y_i = u + dt * sum_j a_ij F(y_j) + dt^2 * sum_j adot_ij Fdot(y_j),
/// and the update is
///   u+ = u + dt * sum_j b_j F(y_j) + dt^2 * sum_j bdot_j Fdot(y_j).
/// A and Adot are strictly lower triangular; c = A e is derived.
class TdrkTableau {
 public:
  /// Throws ConfigError on inconsistent sizes, an empty tableau, or a
  /// non-zero entry on or above the diagonal of A or Adot.
  TdrkTableau(RationalMatrix a, RationalMatrix adot, RationalVector b, RationalVector bdot);

  [[nodiscard]] std::size_t stages() const { return b_.size(); }
  [[nodiscard]] const RationalMatrix& a() const { return a_; }
  [[nodiscard]] const RationalMatrix& adot() const { return adot_; }
  [[nodiscard]] const RationalVector& b() const { return b_; }
  [[nodiscard]] const RationalVector& bdot() const { return bdot_; }
  [[nodiscard]] const RationalVector& c() const { return c_; }

  /// Plain-text form: stage count, then s rows of A, s rows of Adot, the b
  /// row and the bdot row, entries written as exact fractions "p/q".
  [[nodiscard]] std::string to_text() const;
  /// Inverse of to_text. Lines starting with '#' are comments; only token
  /// order matters. Throws ConfigError on malformed input.
  static TdrkTableau parse(std::string_view text);

  friend bool operator==(const TdrkTableau&, const TdrkTableau&) = default;

 private:
  RationalMatrix a_;
  RationalMatrix adot_;
  RationalVector b_;
  RationalVector bdot_;
  RationalVector c_;
};

/// One labelled order or perturbation condition and its exact residual.
struct ConditionResidual {
  std::string label;
  int order = 0;  // power of dt the condition controls
  Rational residual;
};

struct ConditionReport {
  /// b.e = 1; b.c + bdot.e = 1/2; b.A.c + b.Adot.e + bdot.c = 1/6;
  /// b.c^2 + 2 bdot.c = 1/3. Residual is lhs - rhs.
  std::vector<ConditionResidual> order_residuals;
  /// |bdot| e, |b| |Adot| e and |bdot| |c| (eps dt^2, eps dt^3, eps dt^3).
  std::vector<ConditionResidual> perturbation_residuals;
  /// Largest k <= 3 with every residual of order <= k zero.
  int satisfied_order = 0;
  /// True when satisfied_order is 3: higher orders are not checked
  /// symbolically.
  bool higher_orders_unverified = false;
  int perturbation_order = 1;
};

/// Exact evaluation of the order conditions through dt^3 plus the
/// perturbation residuals and the perturbation order.
ConditionReport check_order_conditions(const TdrkTableau& t);

/// Perturbation order m of the final-time error term O(eps dt^m):
/// 1 if any bdot_j != 0, otherwise 2 if sum_i |b_i| sum_j |adot_ij| != 0,
/// otherwise 3.
int check_perturbation_order(const TdrkTableau& t);

/// Coefficients r_0..r_d of R(z) = 1 + (z b + z^2 bdot)(I - zA - z^2 Adot)^-1 e
/// with trailing zeros removed (r_0 = 1, d <= 2s).
RationalVector stability_polynomial(const TdrkTableau& t);

}  // namespace tdrk
