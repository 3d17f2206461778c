#pragma once

// Time-marching schemes for  v' = -n(q) v + g(t),  q' = v:
//
//   * Euler      semi-implicit Euler, drag lagged at the old gap
//   * Implicit   drag evaluated at the new gap (one scalar root per step)
//   * Threshold  Euler plus a fixed gap floor q_s: below it the gap is frozen
//                and a surrogate velocity integrates g until it turns >= 0
//   * Adaptive   variable-step Euler with a local error controller; the
//                floor is chosen automatically once the step would drop
//                below dt_min
//
// plus the high-accuracy reference solver used as ground truth.

#include <cstddef>
#include <optional>

#include "lubstep/model.hpp"
#include "lubstep/trajectory.hpp"

namespace lubstep {

struct SimState {
  double t = 0.0;
  double q = 0.0;
  double v = 0.0;
  Mode mode = Mode::Free;
  double vbar = 0.0;  // surrogate velocity, meaningful only while Stuck
};

struct StepResult {
  double v = 0.0;
  double q = 0.0;
};

enum class Scheme { Euler, Implicit, Threshold, Adaptive };

[[nodiscard]] std::string_view to_string(Scheme scheme) noexcept;

struct SchemeConfig {
  Scheme scheme = Scheme::Euler;
  double dt = 0.0;                 // Euler, Implicit, Threshold
  std::optional<double> q_s;       // Threshold: explicit floor ...
  std::optional<double> C;         // ... or derived from n(q_s) = 1 / (C dt)
  double tol = 0.0;                // Adaptive
  double dt_min = 0.0;             // Adaptive; 0 disables the floor
  double dt_init = 0.0;            // Adaptive

  /// Throws DomainError when a field required by the selected scheme is
  /// missing or out of range.
  void validate(const DragLaw& drag) const;
  /// q_s for the Threshold scheme (explicit value or from C).
  [[nodiscard]] double threshold(const DragLaw& drag) const;
};

struct RunLimits {
  std::size_t max_samples = 100'000'000;
};

struct SchemeRun {
  Trajectory trajectory;
  EventLog events;
};

/// Semi-implicit Euler: v+ = (v + dt g(t+)) / (1 + dt n(q)),  q+ = q + dt v+.
[[nodiscard]] StepResult euler_step(const SimState& state, const OdeProblem& problem, double dt,
                                    double t_next);

/// Fully implicit step: v+ = (v + dt g(t+)) / (1 + dt n(q+)),  q+ = q + dt v+.
/// Closed form for n = eps/q, safeguarded Newton otherwise. Throws
/// NumericalError when the root-finder fails.
[[nodiscard]] StepResult implicit_step(const SimState& state, const OdeProblem& problem,
                                       double dt, double t_next);

/// Local error indicator max(|q''|, |v''|) dt^2 / 2 at `current`, with q''
/// and v'' from the differentiated system and finite differences over the
/// step from `previous`.
[[nodiscard]] double error_estimate(const SimState& previous, const SimState& current,
                                    const OdeProblem& problem, double dt);

[[nodiscard]] Trajectory run_algorithm1(const OdeProblem& problem, double dt,
                                        const RunLimits& limits = {});
[[nodiscard]] Trajectory run_implicit(const OdeProblem& problem, double dt,
                                      const RunLimits& limits = {});
[[nodiscard]] SchemeRun run_algorithm2(const OdeProblem& problem, double dt, double q_s,
                                       const RunLimits& limits = {});
[[nodiscard]] SchemeRun run_algorithm3(const OdeProblem& problem, double tol, double dt_init,
                                       double dt_min, const RunLimits& limits = {});

/// Dispatch on config.scheme.
[[nodiscard]] SchemeRun run_scheme(const OdeProblem& problem, const SchemeConfig& config,
                                   const RunLimits& limits = {});

struct ReferenceOptions {
  double dt = 1e-6;
  double richardson_tol = 1e-5;
  int max_refinements = 1;
};

struct Reference {
  Trajectory trajectory;
  double dt = 0.0;
  /// max |q(dt) - q(dt/2)| over the coarse grid.
  double richardson_gap = 0.0;
};

/// Ground-truth solution. Integrating v' = -n(q) v + g once gives
/// q' = W(t) - N(q) with W(t) = v0 + N(q0) + int g, which is solved by
/// backward Euler at dt and dt/2 in lockstep. The dt/2 solution is recorded
/// on the dt grid; when the two disagree by more than richardson_tol the
/// step is halved (up to max_refinements times) and then OracleError is
/// thrown.
[[nodiscard]] Reference reference_solve(const OdeProblem& problem,
                                        const ReferenceOptions& options = {});

}  // namespace lubstep
