#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tdrk/precision.hpp"
#include "tdrk/spectral.hpp"

namespace tdrk {

/// Semi-discrete ODE u' = F(u) with a second time derivative Fdot = F_u F.
///
/// F is evaluated in high() arithmetic. rhs_dot evaluates the whole Fdot
/// pipeline in low() arithmetic (the perturbed Fdot_eps) and returns it
/// relabelled as a high() vector; the values are unchanged because
/// low() is contained in high().
class Problem {
 public:
  Problem(std::string name, std::size_t n, Format high, Format low);
  virtual ~Problem() = default;

  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] Format high() const { return high_; }
  [[nodiscard]] Format low() const { return low_; }

  [[nodiscard]] virtual SimVector rhs(const SimVector& u) const = 0;
  [[nodiscard]] virtual SimVector rhs_dot(const SimVector& u) const = 0;

  /// Initial data sampled in EXT and rounded to high().
  [[nodiscard]] virtual SimVector initial_condition() const = 0;
  /// Exact solution at time t in EXT, or nullopt when none is known.
  [[nodiscard]] virtual std::optional<SimVector> exact_solution(double t) const = 0;

 protected:
  void check_length(const SimVector& u) const;

 private:
  std::string name_;
  std::size_t n_;
  Format high_;
  Format low_;
};

/// u_t + a u_x = 0 on [-1, 1), U0 = sin(pi x); F = -a D1 u, Fdot = a^2 D2 u.
class LinearAdvection final : public Problem {
 public:
  LinearAdvection(std::size_t n, Format high, Format low, Implementation impl, double speed = 1.0);

  [[nodiscard]] SimVector rhs(const SimVector& u) const override;
  [[nodiscard]] SimVector rhs_dot(const SimVector& u) const override;
  [[nodiscard]] SimVector initial_condition() const override;
  /// sin(pi (x - a t)).
  [[nodiscard]] std::optional<SimVector> exact_solution(double t) const override;

  [[nodiscard]] double speed() const { return speed_; }

 private:
  double speed_;
  std::shared_ptr<const SpectralOperator> d1_high_;
  std::shared_ptr<const SpectralOperator> d2_low_;
};

/// u_t + (u^2/2)_x = 0 on [-1, 1), U0 = 1/2 + sin(pi x)/4.
/// F = -D1 (u^2/2); Fdot = -D1 (u * F(u)) with F recomputed in low().
class InviscidBurgers final : public Problem {
 public:
  InviscidBurgers(std::size_t n, Format high, Format low, Implementation impl);

  [[nodiscard]] SimVector rhs(const SimVector& u) const override;
  [[nodiscard]] SimVector rhs_dot(const SimVector& u) const override;
  [[nodiscard]] SimVector initial_condition() const override;
  /// Always nullopt: no closed form, a reference solve is needed.
  [[nodiscard]] std::optional<SimVector> exact_solution(double t) const override;

 private:
  std::shared_ptr<const SpectralOperator> d1_high_;
  std::shared_ptr<const SpectralOperator> d1_low_;
};

/// Scalar test equation u' = lambda u (size 1), Fdot = lambda^2 u. Used
/// to measure amplification factors.
class ScalarLinear final : public Problem {
 public:
  ScalarLinear(double lambda, Format high, Format low, double u0 = 1.0);

  [[nodiscard]] SimVector rhs(const SimVector& u) const override;
  [[nodiscard]] SimVector rhs_dot(const SimVector& u) const override;
  [[nodiscard]] SimVector initial_condition() const override;
  /// u0 * exp(lambda t), evaluated in binary64.
  [[nodiscard]] std::optional<SimVector> exact_solution(double t) const override;

 private:
  double lambda_;
  double u0_;
};

struct ProblemSpec {
  std::string name = "advection";  // "advection" | "burgers"
  std::size_t n = 25;
  Format high = Format::B64;
  Format low = Format::B64;
  Implementation impl = Implementation::Impl1;
  double speed = 1.0;
};

/// Throws LookupError for unknown names and ConfigError when low is wider
/// than high.
std::unique_ptr<Problem> make_problem(const ProblemSpec& spec);

}  // namespace tdrk
