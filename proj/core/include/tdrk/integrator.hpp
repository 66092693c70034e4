#pragma once

#include <optional>
#include <vector>

#include "tdrk/catalog.hpp"
#include "tdrk/problems.hpp"

namespace tdrk {

struct StepConfig {
  double dt = 0.0;
  double t_final = 0.0;
  const MethodCard* method = nullptr;
  const Problem* problem = nullptr;
};

struct Trajectory {
  SimVector final_state;
  bool diverged = false;
  int steps_taken = 0;
};

/// round(t_final / dt) (0 when t_final is 0), after checking that dt divides t_final to within
/// 1e-12 relative. Throws ConfigError otherwise (or for non-positive input).
int step_count(double dt, double t_final);

/// One explicit TDRK step in mixed precision.
///
/// Coefficients are rounded to the problem's high format once, at
/// construction, and pre-multiplied by dt (A, b) or dt^2 (Adot, bdot) in
/// that format. Stage and update sums are accumulated in column order j,
/// F term before Fdot term, each multiply and add rounded in the high
/// format. F and Fdot of a stage are only evaluated when some later
/// coefficient uses them.
class TdrkStepper {
 public:
  TdrkStepper(const TdrkTableau& tableau, const Problem& problem, double dt);

  /// Returns nullopt when a stage or the result contains a non-finite value.
  [[nodiscard]] std::optional<SimVector> step(const SimVector& u) const;

 private:
  const Problem& problem_;
  std::size_t s_;
  std::vector<Real> a_dt_, adot_dt2_;  // row-major s x s
  std::vector<Real> b_dt_, bdot_dt2_;
  std::vector<bool> need_f_, need_fdot_;
};

/// Single step for a configuration; nullopt on divergence.
std::optional<SimVector> tdrk_step(const SimVector& u, const StepConfig& cfg);

/// Repeated steps from the problem's initial condition to t_final. Stops at
/// the first non-finite value and reports the last finite state.
Trajectory integrate(const StepConfig& cfg);
/// Same from an explicit starting state.
Trajectory integrate(const StepConfig& cfg, SimVector u0);

/// One Shu-Osher SSP33 step with every combination rounded in `policy`.
/// dt = 0 returns u cast to policy.
SimVector ssp33_step(const Problem& problem, const SimVector& u, double dt, Format policy);

/// Shu-Osher three-stage third-order SSP method with all combinations
/// rounded in `policy`, which must equal the problem's high format.
Trajectory ssp33_integrate(const Problem& problem, double dt, double t_final, Format policy);
Trajectory ssp33_integrate(const Problem& problem, double dt, double t_final, Format policy,
                           SimVector u0);

}  // namespace tdrk
