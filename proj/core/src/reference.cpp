#include <algorithm>
#include <cmath>
#include <sstream>

#include "lubstep/errors.hpp"
#include "lubstep/integrators.hpp"
#include "lubstep/root_find.hpp"

namespace lubstep {
namespace {

// Backward Euler for q' = W(t) - N(q).
class ReducedSolver {
 public:
  explicit ReducedSolver(const OdeProblem& p)
      : p_(p), w0_(p.v0 + (p.drag.is_zero() ? 0.0 : p.drag.antiderivative(p.q0))) {}

  [[nodiscard]] double W(double t) const { return w0_ + p_.forcing.integral(p_.t_start, t); }

  [[nodiscard]] double N(double q) const {
    return p_.drag.is_zero() ? 0.0 : p_.drag.antiderivative(q);
  }

  [[nodiscard]] double velocity(double q, double t) const { return W(t) - N(q); }

  /// New q, or a non-positive value when no positive root exists.
  [[nodiscard]] double step(double q, double t_next, double h) const {
    const double c = q + h * W(t_next);
    if (p_.drag.is_zero()) return c;
    const DragLaw& drag = p_.drag;
    auto F = [&](double x) { return x - c + h * drag.antiderivative(x); };
    auto dF = [&](double x) { return 1.0 + h * drag.n(x); };

    double hi = std::max(c, q) + 1.0;
    for (int i = 0; F(hi) <= 0.0; ++i) {
      if (i > 200) return -1.0;
      hi *= 2.0;
    }
    double lo = std::min(q, hi) * 0.5;
    for (int i = 0; F(lo) >= 0.0; ++i) {
      lo *= 0.5;
      if (i > 2000 || !(lo > 0.0)) return -1.0;
    }
    const double ftol = 1e-14 * lo;
    const RootResult r = safeguarded_newton(F, dF, lo, hi, std::clamp(q, lo, hi), ftol);
    if (!r.converged) return -1.0;
    return r.x;
  }

 private:
  const OdeProblem& p_;
  double w0_;
};

Reference attempt(const OdeProblem& problem, double dt, std::size_t reserve_hint) {
  const ReducedSolver solver(problem);
  const double span = problem.t_end - problem.t_start;
  const double ratio = span / dt;
  auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  steps = std::max<std::size_t>(steps, 1);

  Reference ref;
  ref.dt = dt;
  Trajectory& traj = ref.trajectory;
  traj.samples.reserve(std::min(steps + 1, reserve_hint));
  traj.samples.push_back({problem.t_start, problem.q0, problem.v0, 0.0, Mode::Free});

  double coarse = problem.q0;
  double fine = problem.q0;
  double t = problem.t_start;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double tn = k == steps ? problem.t_end : problem.t_start + static_cast<double>(k) * dt;
    const double h = tn - t;
    coarse = solver.step(coarse, tn, h);
    if (fine > 0.0) fine = solver.step(fine, tn - 0.5 * h, 0.5 * h);
    if (fine > 0.0) fine = solver.step(fine, tn, 0.5 * h);
    if (!std::isfinite(coarse) || !std::isfinite(fine)) {
      traj.status = RunStatus::FailedNonFinite;
      break;
    }
    if (!(fine > 0.0) || !(coarse > 0.0)) {
      traj.status = RunStatus::FailedNonPositiveQ;
      if (problem.drag.is_zero()) traj.samples.push_back({tn, fine, solver.W(tn), h, Mode::Free});
      break;
    }
    ref.richardson_gap = std::max(ref.richardson_gap, std::abs(fine - coarse));
    traj.samples.push_back({tn, fine, solver.velocity(fine, tn), h, Mode::Free});
    t = tn;
  }
  return ref;
}

}  // namespace

Reference reference_solve(const OdeProblem& problem, const ReferenceOptions& options) {
  problem.validate();
  if (!(options.dt > 0.0)) throw DomainError("reference dt must be positive");
  if (!(options.richardson_tol > 0.0)) throw DomainError("richardson_tol must be positive");

  double dt = options.dt;
  double last_gap = 0.0;
  for (int r = 0; r <= std::max(0, options.max_refinements); ++r, dt *= 0.5) {
    Reference ref = attempt(problem, dt, RunLimits{}.max_samples);
    if (!ref.trajectory.completed() || ref.richardson_gap <= options.richardson_tol) return ref;
    last_gap = ref.richardson_gap;
  }
  std::ostringstream msg;
  msg << "reference solution not converged: Richardson gap " << last_gap << " exceeds "
      << options.richardson_tol << " at dt=" << dt * 2.0;
  throw OracleError(msg.str());
}

}  // namespace lubstep
