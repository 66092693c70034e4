#include "tdrk/problems.hpp"

#include <cmath>

#include "tdrk/errors.hpp"

namespace tdrk {

Problem::Problem(std::string name, std::size_t n, Format high, Format low)
    : name_(std::move(name)), n_(n), high_(high), low_(low) {
  if (!contains(high, low)) {
    throw ConfigError("low precision " + std::string(format_name(low)) +
                      " must not be wider than high precision " + std::string(format_name(high)));
  }
}

void Problem::check_length(const SimVector& u) const {
  if (u.size() != n_) {
    throw ConfigError(name_ + ": state has length " + std::to_string(u.size()) + ", expected " +
                      std::to_string(n_));
  }
}

// ---------------------------------------------------------------------------

LinearAdvection::LinearAdvection(std::size_t n, Format high, Format low, Implementation impl,
                                 double speed)
    : Problem("advection", n, high, low),
      speed_(speed),
      d1_high_(fourier_d1(n, high, impl)),
      d2_low_(fourier_d2(n, low, impl)) {}

SimVector LinearAdvection::rhs(const SimVector& u) const {
  check_length(u);
  return scaled(Real(-speed_), d1_high_->apply(cast_vector(u, high())), high());
}

SimVector LinearAdvection::rhs_dot(const SimVector& u) const {
  check_length(u);
  const SimVector ul = cast_vector(u, low());
  const SimScalar a = round_to(Real(speed_), low());
  const SimScalar a2 = rounded_arith(ArithOp::Mul, a, a, low());
  return scaled(a2.value, d2_low_->apply(ul), low()).widened(high());
}

SimVector LinearAdvection::initial_condition() const {
  const auto x = grid_points(size());
  std::vector<Real> u(size());
  for (std::size_t j = 0; j < size(); ++j) u[j] = sinpi(x[j]);
  return SimVector(u, high());
}

std::optional<SimVector> LinearAdvection::exact_solution(double t) const {
  const auto x = grid_points(size());
  const Real shift = Real(speed_) * Real(t);
  std::vector<Real> u(size());
  for (std::size_t j = 0; j < size(); ++j) u[j] = sinpi(x[j] - shift);
  return SimVector(u, Format::EXT);
}

// ---------------------------------------------------------------------------

InviscidBurgers::InviscidBurgers(std::size_t n, Format high, Format low, Implementation impl)
    : Problem("burgers", n, high, low),
      d1_high_(fourier_d1(n, high, impl)),
      d1_low_(fourier_d1(n, low, impl)) {}

namespace {

// -D (u*u/2) with every operation in op.format().
SimVector burgers_flux_derivative(const SpectralOperator& d1, const SimVector& u) {
  const Format f = d1.format();
  const SimVector flux = scaled(Real(0.5), hadamard(u, u, f), f);
  return scaled(Real(-1.0), d1.apply(flux), f);
}

}  // namespace

SimVector InviscidBurgers::rhs(const SimVector& u) const {
  check_length(u);
  return burgers_flux_derivative(*d1_high_, cast_vector(u, high()));
}

SimVector InviscidBurgers::rhs_dot(const SimVector& u) const {
  check_length(u);
  const Format f = low();
  const SimVector ul = cast_vector(u, f);
  const SimVector f_low = burgers_flux_derivative(*d1_low_, ul);
  const SimVector g = hadamard(ul, f_low, f);
  return scaled(Real(-1.0), d1_low_->apply(g), f).widened(high());
}

SimVector InviscidBurgers::initial_condition() const {
  const auto x = grid_points(size());
  std::vector<Real> u(size());
  for (std::size_t j = 0; j < size(); ++j) u[j] = Real(0.5) + Real(0.25) * sinpi(x[j]);
  return SimVector(u, high());
}

std::optional<SimVector> InviscidBurgers::exact_solution(double /*t*/) const { return std::nullopt; }

// ---------------------------------------------------------------------------

ScalarLinear::ScalarLinear(double lambda, Format high, Format low, double u0)
    : Problem("scalar", 1, high, low), lambda_(lambda), u0_(u0) {}

SimVector ScalarLinear::rhs(const SimVector& u) const {
  check_length(u);
  return scaled(Real(lambda_), u, high());
}

SimVector ScalarLinear::rhs_dot(const SimVector& u) const {
  check_length(u);
  const SimScalar l = round_to(Real(lambda_), low());
  const SimScalar l2 = rounded_arith(ArithOp::Mul, l, l, low());
  return scaled(l2.value, cast_vector(u, low()), low()).widened(high());
}

SimVector ScalarLinear::initial_condition() const {
  const double v[1] = {u0_};
  return SimVector(std::span<const double>(v), high());
}

std::optional<SimVector> ScalarLinear::exact_solution(double t) const {
  const double v[1] = {u0_ * std::exp(lambda_ * t)};
  return SimVector(std::span<const double>(v), Format::B64);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec) {
  if (spec.name == "advection") {
    return std::make_unique<LinearAdvection>(spec.n, spec.high, spec.low, spec.impl, spec.speed);
  }
  if (spec.name == "burgers") {
    return std::make_unique<InviscidBurgers>(spec.n, spec.high, spec.low, spec.impl);
  }
  throw LookupError("unknown problem '" + spec.name + "' (expected advection or burgers)");
}

}  // namespace tdrk
