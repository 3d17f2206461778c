#include "lubstep/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lubstep/errors.hpp"
#include "lubstep/root_find.hpp"

namespace lubstep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Step underflow guard for the adaptive controller.
constexpr double kMinAdaptiveStep = 1e-14;
// Growth factor used when the error indicator is exactly zero.
constexpr double kZeroErrorGrowth = 10.0;

class Recorder {
 public:
  Recorder(Trajectory& traj, std::size_t cap) : traj_(traj), cap_(cap) {}

  void reserve(std::size_t n) { traj_.samples.reserve(std::min(n, cap_)); }

  void push(const Sample& s) {
    if (traj_.samples.size() >= cap_) {
      throw CapacityError("run exceeds the sample budget of " + std::to_string(cap_));
    }
    traj_.samples.push_back(s);
  }

 private:
  Trajectory& traj_;
  std::size_t cap_;
};

// Uniform grid t_k = t_start + k dt; the last step is shortened to hit t_end
// unless the span is an integer multiple of dt (up to rounding).
struct UniformGrid {
  double t_start;
  double dt;
  std::size_t steps;
  double last_step;

  UniformGrid(const OdeProblem& p, double step) : t_start(p.t_start), dt(step) {
    const double span = p.t_end - p.t_start;
    const double ratio = span / dt;
    steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    steps = std::max<std::size_t>(steps, 1);
    last_step = span - static_cast<double>(steps - 1) * dt;
    if (std::abs(last_step - dt) <= 1e-9 * dt) last_step = dt;
  }

  [[nodiscard]] double time(std::size_t k) const {
    if (k == steps && last_step != dt) return t_start + static_cast<double>(k - 1) * dt + last_step;
    return t_start + static_cast<double>(k) * dt;
  }
  [[nodiscard]] double step(std::size_t k) const { return k == steps ? last_step : dt; }
};

void require_step(double dt, const char* what) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

bool finite(const StepResult& r) { return std::isfinite(r.q) && std::isfinite(r.v); }

template <class Stepper>
Trajectory run_fixed(const OdeProblem& problem, double dt, const RunLimits& limits,
                     Stepper&& stepper) {
  problem.validate();
  require_step(dt, "dt");
  const UniformGrid grid(problem, dt);
  Trajectory traj;
  Recorder rec(traj, limits.max_samples);
  rec.reserve(grid.steps + 1);
  rec.push({problem.t_start, problem.q0, problem.v0, 0.0, Mode::Free});
  SimState s{problem.t_start, problem.q0, problem.v0};
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    const double tn = grid.time(k);
    const double h = grid.step(k);
    const StepResult r = stepper(s, h, tn);
    if (!finite(r)) {
      traj.status = RunStatus::FailedNonFinite;
      break;
    }
    rec.push({tn, r.q, r.v, h, Mode::Free});
    if (!(r.q > 0.0)) {
      traj.status = RunStatus::FailedNonPositiveQ;
      break;
    }
    s = SimState{tn, r.q, r.v};
  }
  return traj;
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::Euler: return "euler";
    case Scheme::Implicit: return "implicit";
    case Scheme::Threshold: return "threshold";
    case Scheme::Adaptive: return "adaptive";
  }
  return "unknown";
}

void SchemeConfig::validate(const DragLaw& drag) const {
  switch (scheme) {
    case Scheme::Euler:
    case Scheme::Implicit:
      require_step(dt, "dt");
      return;
    case Scheme::Threshold:
      require_step(dt, "dt");
      if (q_s.has_value() == C.has_value()) {
        throw DomainError("threshold scheme needs exactly one of q_s or C");
      }
      if (q_s && !(*q_s > 0.0)) throw DomainError("q_s must be positive");
      if (C) {
        if (!(*C > 0.0)) throw DomainError("C must be positive");
        if (drag.as_power_law() == nullptr) {
          throw UnsupportedError("C needs a power-law drag; give q_s explicitly");
        }
      }
      return;
    case Scheme::Adaptive:
      if (!(tol > 0.0)) throw DomainError("tol must be positive");
      require_step(dt_init, "dt_init");
      if (!(dt_min >= 0.0)) throw DomainError("dt_min must be non-negative");
      return;
  }
}

double SchemeConfig::threshold(const DragLaw& drag) const {
  if (q_s) return *q_s;
  if (C) return threshold_from_step(drag, dt, *C);
  throw DomainError("threshold scheme needs q_s or C");
}

StepResult euler_step(const SimState& state, const OdeProblem& problem, double dt,
                      double t_next) {
  const double n = problem.drag.n(state.q);
  const double v = (state.v + dt * problem.forcing(t_next)) / (1.0 + dt * n);
  return {v, state.q + dt * v};
}

namespace {

// For n = eps x^-p with p > 1, h(x) = (x - q)(1 + a x^-p), a = dt eps, can
// rise, fall and rise again on x > q; h' has the sign of
// phi(x) = x^(p+1) + a((1 - p) x + p q), which is convex. Shrinks [lo, hi] to
// a bracket of the smallest root of h = rhs on which h is increasing.
void narrow_to_first_root(const PowerLaw& law, double dt, double q, double rhs, double& lo,
                          double& hi) {
  const double p = law.p;
  if (!(p > 1.0)) return;
  const double a = dt * law.epsilon;
  const double x_m = std::pow(a * (p - 1.0) / (p + 1.0), 1.0 / p);
  auto phi = [&](double x) { return std::pow(x, p + 1.0) + a * ((1.0 - p) * x + p * q); };
  auto dphi = [&](double x) { return (p + 1.0) * std::pow(x, p) + a * (1.0 - p); };
  if (!(x_m > q && x_m < hi) || !(phi(x_m) < 0.0)) return;
  const double ftol = 0.0;
  const RootResult x_a = safeguarded_newton([&](double x) { return -phi(x); },
                                            [&](double x) { return -dphi(x); }, q, x_m, q, ftol);
  auto h = [&](double x) { return (x - q) * (1.0 + a * std::pow(x, -p)); };
  if (h(x_a.x) >= rhs) {
    hi = x_a.x;
    return;
  }
  const RootResult x_b = safeguarded_newton(phi, dphi, x_m, hi, hi, ftol);
  lo = x_b.x;
}

}  // namespace

StepResult implicit_step(const SimState& state, const OdeProblem& problem, double dt,
                         double t_next) {
  const DragLaw& drag = problem.drag;
  if (drag.is_zero()) return euler_step(state, problem, dt, t_next);

  const double q_prev = state.q;
  (void)drag.n(q_prev);  // domain check
  const double g = problem.forcing(t_next);
  const double rhs = dt * (state.v + dt * g);

  double q = q_prev;
  const PowerLaw* law = drag.as_power_law();
  if (law != nullptr && law->p == 1.0) {
    // q^2 - b q - eps dt q_prev = 0, positive branch
    const double b = q_prev + rhs - law->epsilon * dt;
    const double c = law->epsilon * dt * q_prev;
    const double s = std::sqrt(b * b + 4.0 * c);
    q = b >= 0.0 ? 0.5 * (b + s) : 2.0 * c / (s - b);
  } else if (rhs != 0.0) {
    auto F = [&](double x) { return (x - q_prev) * (1.0 + dt * drag.n(x)) - rhs; };
    auto dF = [&](double x) {
      return 1.0 + dt * drag.n(x) + (x - q_prev) * dt * drag.derivative(x);
    };
    double lo = q_prev;
    double hi = q_prev;
    if (rhs > 0.0) {
      // F(q_prev + rhs) >= 0; the smallest root above q_prev is the physical one.
      hi = q_prev + rhs;
      if (law != nullptr) narrow_to_first_root(*law, dt, q_prev, rhs, lo, hi);
    } else {
      lo = q_prev * 1e-6;
      int guard = 0;
      while (!(F(lo) < 0.0)) {
        lo *= 1e-3;
        if (++guard > 100 || !(lo > 0.0)) {
          throw NumericalError("implicit_step: no lower bracket found");
        }
      }
    }
    const double ftol = 1e-13 * std::max(1.0, std::abs(q_prev));
    const RootResult root =
        safeguarded_newton(F, dF, lo, hi, q_prev, ftol, drag.has_derivative());
    if (!root.converged) {
      std::ostringstream msg;
      msg << "implicit_step: root-finder did not converge (q_prev=" << q_prev
          << ", v=" << state.v << ", dt=" << dt << ", g=" << g << ", residual="
          << root.residual << ", iterations=" << root.iterations << ")";
      throw NumericalError(msg.str());
    }
    q = root.x;
  }
  const double v = (state.v + dt * g) / (1.0 + dt * drag.n(q));
  return {v, q};
}

double error_estimate(const SimState& previous, const SimState& current,
                      const OdeProblem& problem, double dt) {
  const double n = problem.drag.n(current.q);
  const double n_prev = problem.drag.n(previous.q);
  const double g = problem.forcing(current.t);
  const double g_prev = problem.forcing(previous.t);
  const double v = current.v;
  const double qdd = -n * v + g;
  const double vdd = n * n * v - n * g - (n - n_prev) / dt * v + (g - g_prev) / dt;
  return std::max(std::abs(qdd), std::abs(vdd)) * dt * dt / 2.0;
}

Trajectory run_algorithm1(const OdeProblem& problem, double dt, const RunLimits& limits) {
  return run_fixed(problem, dt, limits, [&](const SimState& s, double h, double tn) {
    return euler_step(s, problem, h, tn);
  });
}

Trajectory run_implicit(const OdeProblem& problem, double dt, const RunLimits& limits) {
  return run_fixed(problem, dt, limits, [&](const SimState& s, double h, double tn) {
    return implicit_step(s, problem, h, tn);
  });
}

SchemeRun run_algorithm2(const OdeProblem& problem, double dt, double q_s,
                         const RunLimits& limits) {
  problem.validate();
  require_step(dt, "dt");
  if (!(q_s > 0.0) || !(q_s < problem.q0)) throw DomainError("q_s must satisfy 0 < q_s < q0");
  const UniformGrid grid(problem, dt);
  SchemeRun out;
  Trajectory& traj = out.trajectory;
  Recorder rec(traj, limits.max_samples);
  rec.reserve(grid.steps + 1);
  rec.push({problem.t_start, problem.q0, problem.v0, 0.0, Mode::Free});

  SimState s{problem.t_start, problem.q0, problem.v0};
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    const double tn = grid.time(k);
    const double h = grid.step(k);
    if (s.mode == Mode::Stuck) {
      s.vbar += problem.forcing(tn) * h;
      s.t = tn;
      rec.push({tn, s.q, 0.0, h, Mode::Stuck});
      if (s.vbar >= 0.0) {
        out.events.back().t_release = tn;
        s.mode = Mode::Free;
        s.v = 0.0;
      }
      continue;
    }
    const StepResult r = euler_step(s, problem, h, tn);
    if (!finite(r)) {
      traj.status = RunStatus::FailedNonFinite;
      break;
    }
    if (r.q <= q_s) {
      // Freeze at the last value above the floor.
      out.events.push_back({out.events.size(), s.t, s.q, s.v, std::nullopt});
      s.vbar = s.v + problem.forcing(tn) * h;
      s.mode = Mode::Stuck;
      s.v = 0.0;
      s.t = tn;
      rec.push({tn, s.q, 0.0, h, Mode::Stuck});
      continue;
    }
    s = SimState{tn, r.q, r.v};
    rec.push({tn, r.q, r.v, h, Mode::Free});
  }
  return out;
}

SchemeRun run_algorithm3(const OdeProblem& problem, double tol, double dt_init, double dt_min,
                         const RunLimits& limits) {
  problem.validate();
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  require_step(dt_init, "dt_init");
  if (!(dt_min >= 0.0)) throw DomainError("dt_min must be non-negative");

  SchemeRun out;
  Recorder rec(out.trajectory, limits.max_samples);
  rec.push({problem.t_start, problem.q0, problem.v0, 0.0, Mode::Free});

  const double t_end = problem.t_end;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_end));
  SimState cur{problem.t_start, problem.q0, problem.v0};
  double dt_trial = dt_init;
  std::optional<double> floor;

  while (t_end - cur.t > t_eps) {
    bool rejected = false;
    bool freeze = false;
    double h = dt_trial;
    double step = h;
    double err = kInf;
    StepResult r;
    for (;;) {
      step = std::min(h, t_end - cur.t);
      const double tn = cur.t + step;
      r = euler_step(cur, problem, step, tn);
      err = kInf;
      if (finite(r) && r.q > 0.0) {
        err = error_estimate(cur, SimState{tn, r.q, r.v}, problem, step);
      }
      if (err <= tol) {
        if (floor && r.q <= *floor) freeze = true;
        break;
      }
      h = (std::isfinite(err) && err > 0.0) ? std::min(std::sqrt(tol / err) * step, 0.5 * step)
                                            : 0.5 * step;
      rejected = true;
      if (h < dt_min) {
        freeze = true;
        step = h;
        floor = cur.q;
        break;
      }
      if (h < kMinAdaptiveStep) {
        std::ostringstream msg;
        msg << "adaptive step underflow at t=" << cur.t << " (q=" << cur.q << ", dt=" << h << ")";
        throw NumericalError(msg.str());
      }
    }

    if (!freeze) {
      cur = SimState{cur.t + step, r.q, r.v};
      rec.push({cur.t, cur.q, cur.v, step, Mode::Free});
      if (rejected) {
        dt_trial = step;
      } else {
        dt_trial = err > 0.0 ? std::sqrt(tol / err) * step : kZeroErrorGrowth * step;
      }
      continue;
    }

    // Frozen episode: hold q, integrate the surrogate velocity with a fixed step.
    const double frozen_dt = step;
    DipEvent event{out.events.size(), cur.t, cur.q, cur.v, std::nullopt};
    double vbar = cur.v;
    double t = cur.t;
    while (t_end - t > t_eps) {
      const double hs = std::min(frozen_dt, t_end - t);
      t += hs;
      vbar += problem.forcing(t) * hs;
      rec.push({t, cur.q, 0.0, hs, Mode::Stuck});
      if (vbar >= 0.0) {
        event.t_release = t;
        break;
      }
    }
    out.events.push_back(event);
    cur = SimState{t, cur.q, 0.0};
    dt_trial = frozen_dt;
  }
  return out;
}

SchemeRun run_scheme(const OdeProblem& problem, const SchemeConfig& config,
                     const RunLimits& limits) {
  config.validate(problem.drag);
  switch (config.scheme) {
    case Scheme::Euler: return {run_algorithm1(problem, config.dt, limits), {}};
    case Scheme::Implicit: return {run_implicit(problem, config.dt, limits), {}};
    case Scheme::Threshold:
      return run_algorithm2(problem, config.dt, config.threshold(problem.drag), limits);
    case Scheme::Adaptive:
      return run_algorithm3(problem, config.tol, config.dt_init, config.dt_min, limits);
  }
  throw DomainError("unknown scheme");
}

}  // namespace lubstep
