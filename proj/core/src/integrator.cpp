#include "tdrk/integrator.hpp"

#include <cmath>

#include "tdrk/errors.hpp"

namespace tdrk {

int step_count(double dt, double t_final) {
  if (!(dt > 0.0) || !(t_final >= 0.0) || !std::isfinite(dt) || !std::isfinite(t_final)) {
    throw ConfigError("time step must be positive and final time non-negative");
  }
  if (t_final == 0.0) return 0;
  const double steps = std::nearbyint(t_final / dt);
  if (steps < 1.0 || std::fabs(t_final - steps * dt) > 1e-12 * t_final) {
    throw ConfigError("time step " + std::to_string(dt) + " does not divide final time " +
                      std::to_string(t_final));
  }
  if (steps > 2e9) throw ConfigError("too many time steps");
  return static_cast<int>(steps);
}

TdrkStepper::TdrkStepper(const TdrkTableau& tableau, const Problem& problem, double dt)
    : problem_(problem), s_(tableau.stages()) {
  const Format h = problem.high();
  const SimScalar h_dt = round_to(Real(dt), h);
  const SimScalar h_dt2 = rounded_arith(ArithOp::Mul, h_dt, h_dt, h);
  auto scale = [&](const Rational& r, const SimScalar& factor) {
    if (r == 0) return Real(0.0);
    return rounded_arith(ArithOp::Mul, round_to(to_real(r), h), factor, h).value;
  };
  a_dt_.resize(s_ * s_);
  adot_dt2_.resize(s_ * s_);
  b_dt_.resize(s_);
  bdot_dt2_.resize(s_);
  need_f_.assign(s_, false);
  need_fdot_.assign(s_, false);
  for (std::size_t i = 0; i < s_; ++i) {
    for (std::size_t j = 0; j < s_; ++j) {
      a_dt_[i * s_ + j] = scale(tableau.a()[i][j], h_dt);
      adot_dt2_[i * s_ + j] = scale(tableau.adot()[i][j], h_dt2);
    }
    b_dt_[i] = scale(tableau.b()[i], h_dt);
    bdot_dt2_[i] = scale(tableau.bdot()[i], h_dt2);
  }
  auto nonzero = [](const Real& r) { return r.hi != 0.0 || r.lo != 0.0; };
  for (std::size_t j = 0; j < s_; ++j) {
    bool f = nonzero(b_dt_[j]);
    bool fd = nonzero(bdot_dt2_[j]);
    for (std::size_t i = j + 1; i < s_; ++i) {
      f = f || nonzero(a_dt_[i * s_ + j]);
      fd = fd || nonzero(adot_dt2_[i * s_ + j]);
    }
    need_f_[j] = f;
    need_fdot_[j] = fd;
  }
}

std::optional<SimVector> TdrkStepper::step(const SimVector& u) const {
  const Format h = problem_.high();
  const SimVector un = cast_vector(u, h);
  std::vector<SimVector> f(s_), fdot(s_);
  auto nonzero = [](const Real& r) { return r.hi != 0.0 || r.lo != 0.0; };

  auto combine = [&](const Real* a_row, const Real* adot_row, std::size_t upto) {
    SimVector y = un;
    for (std::size_t j = 0; j < upto; ++j) {
      if (nonzero(a_row[j])) axpy(a_row[j], f[j], y);
      if (nonzero(adot_row[j])) axpy(adot_row[j], fdot[j], y);
    }
    return y;
  };

  for (std::size_t i = 0; i < s_; ++i) {
    const SimVector y = i == 0 ? un : combine(&a_dt_[i * s_], &adot_dt2_[i * s_], i);
    if (!y.all_finite()) return std::nullopt;
    if (need_f_[i]) {
      f[i] = problem_.rhs(y);
      if (!f[i].all_finite()) return std::nullopt;
    }
    if (need_fdot_[i]) {
      fdot[i] = problem_.rhs_dot(y);
      if (!fdot[i].all_finite()) return std::nullopt;
    }
  }
  SimVector next = combine(b_dt_.data(), bdot_dt2_.data(), s_);
  if (!next.all_finite()) return std::nullopt;
  return next;
}

std::optional<SimVector> tdrk_step(const SimVector& u, const StepConfig& cfg) {
  if (cfg.method == nullptr || cfg.problem == nullptr) throw ConfigError("step config incomplete");
  return TdrkStepper(cfg.method->tableau, *cfg.problem, cfg.dt).step(u);
}

Trajectory integrate(const StepConfig& cfg) {
  if (cfg.problem == nullptr) throw ConfigError("step config incomplete");
  return integrate(cfg, cfg.problem->initial_condition());
}

Trajectory integrate(const StepConfig& cfg, SimVector u0) {
  if (cfg.method == nullptr || cfg.problem == nullptr) throw ConfigError("step config incomplete");
  const int steps = step_count(cfg.dt, cfg.t_final);
  const TdrkStepper stepper(cfg.method->tableau, *cfg.problem, cfg.dt);
  Trajectory traj{cast_vector(u0, cfg.problem->high()), false, 0};
  if (!traj.final_state.all_finite()) {
    traj.diverged = true;
    return traj;
  }
  for (int n = 0; n < steps; ++n) {
    auto next = stepper.step(traj.final_state);
    if (!next) {
      traj.diverged = true;
      return traj;
    }
    traj.final_state = std::move(*next);
    ++traj.steps_taken;
  }
  return traj;
}

Trajectory ssp33_integrate(const Problem& problem, double dt, double t_final, Format policy) {
  return ssp33_integrate(problem, dt, t_final, policy, problem.initial_condition());
}

SimVector ssp33_step(const Problem& problem, const SimVector& u, double dt, Format policy) {
  if (problem.high() != policy) {
    throw ConfigError("SSP33 policy must match the problem's high precision");
  }
  const Real h = round_value(Real(dt), policy);
  const Real three_quarters = round_value(Real(0.75), policy);
  const Real quarter = round_value(Real(0.25), policy);
  const Real third = round_value(Real(1.0) / Real(3.0), policy);
  const Real two_thirds = round_value(Real(2.0) / Real(3.0), policy);

  const SimVector un = cast_vector(u, policy);
  if (dt == 0.0) return un;
  SimVector u1 = un;
  axpy(h, problem.rhs(un), u1);
  // u2 = 3/4 u + 1/4 (u1 + h F(u1))
  SimVector w1 = u1;
  axpy(h, problem.rhs(u1), w1);
  SimVector u2 = scaled(three_quarters, un, policy);
  axpy(quarter, w1, u2);
  // u+ = 1/3 u + 2/3 (u2 + h F(u2))
  SimVector w2 = u2;
  axpy(h, problem.rhs(u2), w2);
  SimVector next = scaled(third, un, policy);
  axpy(two_thirds, w2, next);
  return next;
}

Trajectory ssp33_integrate(const Problem& problem, double dt, double t_final, Format policy,
                           SimVector u0) {
  if (problem.high() != policy) {
    throw ConfigError("SSP33 policy must match the problem's high precision");
  }
  const int steps = step_count(dt, t_final);
  Trajectory traj{cast_vector(u0, policy), false, 0};
  for (int n = 0; n < steps; ++n) {
    SimVector next = ssp33_step(problem, traj.final_state, dt, policy);
    if (!next.all_finite()) {
      traj.diverged = true;
      return traj;
    }
    traj.final_state = std::move(next);
    ++traj.steps_taken;
  }
  return traj;
}

}  // namespace tdrk
