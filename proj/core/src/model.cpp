#include "lubstep/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lubstep/errors.hpp"
#include "lubstep/quadrature.hpp"

namespace lubstep {
namespace {

void require_gap(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError("gap q must be positive and finite, got " + std::to_string(q));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DragLaw DragLaw::power_law(double epsilon, double p) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("power-law drag needs epsilon > 0");
  }
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("power-law drag needs exponent p > 0");
  }
  return DragLaw(PowerLaw{epsilon, p});
}

DragLaw DragLaw::zero() { return DragLaw(ZeroDrag{}); }

DragLaw DragLaw::custom(std::function<double(double)> n,
                        std::function<double(double)> antiderivative,
                        std::function<double(double)> derivative) {
  if (!n || !antiderivative) {
    throw UnsupportedError("custom drag must provide both n and its antiderivative N");
  }
  return DragLaw(CustomDrag{std::move(n), std::move(antiderivative), std::move(derivative)});
}

double DragLaw::n(double q) const {
  require_gap(q);
  return std::visit(Overloaded{
                        [q](const PowerLaw& law) {
                          if (law.p == 1.0) return law.epsilon / q;
                          if (law.p == 1.5) return law.epsilon / (q * std::sqrt(q));
                          return law.epsilon * std::pow(q, -law.p);
                        },
                        [](const ZeroDrag&) { return 0.0; },
                        [q](const CustomDrag& law) { return law.n(q); },
                    },
                    kind_);
}

double DragLaw::antiderivative(double q) const {
  require_gap(q);
  return std::visit(Overloaded{
                        [q](const PowerLaw& law) {
                          if (law.p == 1.0) return law.epsilon * std::log(q);
                          if (law.p == 1.5) return -2.0 * law.epsilon / std::sqrt(q);
                          return law.epsilon * std::pow(q, 1.0 - law.p) / (1.0 - law.p);
                        },
                        [](const ZeroDrag&) { return 0.0; },
                        [q](const CustomDrag& law) { return law.antiderivative(q); },
                    },
                    kind_);
}

double DragLaw::derivative(double q) const {
  require_gap(q);
  return std::visit(Overloaded{
                        [this, q](const PowerLaw& law) { return -law.p * n(q) / q; },
                        [](const ZeroDrag&) { return 0.0; },
                        [q](const CustomDrag& law) {
                          if (!law.derivative) {
                            throw UnsupportedError("custom drag has no derivative");
                          }
                          return law.derivative(q);
                        },
                    },
                    kind_);
}

bool DragLaw::has_derivative() const noexcept {
  if (const auto* custom = std::get_if<CustomDrag>(&kind_)) {
    return static_cast<bool>(custom->derivative);
  }
  return true;
}

double eval_n(const DragLaw& drag, double q) { return drag.n(q); }
double eval_N(const DragLaw& drag, double q) { return drag.antiderivative(q); }

double threshold_from_step(const DragLaw& drag, double dt, double C) {
  const PowerLaw* law = drag.as_power_law();
  if (law == nullptr) {
    throw UnsupportedError("threshold_from_step needs a power-law drag; supply q_s explicitly");
  }
  if (!(dt > 0.0) || !(C > 0.0)) throw DomainError("threshold_from_step needs dt > 0 and C > 0");
  return std::pow(C * law->epsilon * dt, 1.0 / law->p);
}

// ---------------------------------------------------------------------------
// Forcing

Forcing Forcing::constant(double g) { return piecewise_constant({}, {g}); }

Forcing Forcing::piecewise_constant(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1) {
    throw DomainError("piecewise forcing needs exactly one more value than breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw DomainError("forcing breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("forcing values must be finite");
  }
  Forcing f;
  f.breakpoints_ = std::move(breakpoints);
  f.values_ = std::move(values);
  return f;
}

Forcing Forcing::step(double t0, double before, double after) {
  return piecewise_constant({t0}, {before, after});
}

Forcing Forcing::callable(std::function<double(double)> g) {
  if (!g) throw DomainError("callable forcing needs a function");
  Forcing f;
  f.fn_ = std::move(g);
  return f;
}

std::size_t Forcing::piece_index(double t) const {
  // first breakpoint >= t: t belongs to (b_{i-1}, b_i]
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

double Forcing::operator()(double t) const {
  if (fn_) return fn_(t);
  return values_[piece_index(t)];
}

double Forcing::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (b < a) return -integral(b, a);
  if (fn_) {
    const quad::Result r = quad::integrate(fn_, a, b, {.rel = 1e-13, .abs = 1e-15});
    return r.value;
  }
  double total = 0.0;
  double left = a;
  for (std::size_t i = piece_index(a); i < values_.size(); ++i) {
    const double right = i < breakpoints_.size() ? std::min(breakpoints_[i], b) : b;
    if (right > left) total += values_[i] * (right - left);
    left = right;
    if (left >= b) break;
  }
  return total;
}

double Forcing::positive_sup(double a, double b) const {
  if (b < a) std::swap(a, b);
  double sup = 0.0;
  if (fn_) {
    constexpr int kSamples = 4000;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = a + (b - a) * static_cast<double>(i) / kSamples;
      sup = std::max(sup, fn_(t));
    }
    return sup;
  }
  const std::size_t last = piece_index(b);
  for (std::size_t i = piece_index(a); i <= last && i < values_.size(); ++i) {
    sup = std::max(sup, values_[i]);
  }
  return sup;
}

std::optional<SignSwitch> Forcing::sign_switch() const {
  if (fn_ || breakpoints_.empty()) return std::nullopt;
  // Negative on every piece up to some breakpoint, then one positive constant.
  std::size_t first_positive = values_.size();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] < 0.0)) {
      first_positive = i;
      break;
    }
  }
  if (first_positive == 0 || first_positive == values_.size()) return std::nullopt;
  const double g_plus = values_[first_positive];
  if (!(g_plus > 0.0)) return std::nullopt;
  for (std::size_t i = first_positive; i < values_.size(); ++i) {
    if (values_[i] != g_plus) return std::nullopt;
  }
  return SignSwitch{breakpoints_[first_positive - 1], g_plus};
}

// ---------------------------------------------------------------------------

void OdeProblem::validate() const {
  if (!(q0 > 0.0) || !std::isfinite(q0)) throw DomainError("q0 must be positive");
  if (!std::isfinite(v0)) throw DomainError("v0 must be finite");
  if (!(t_end > t_start) || !std::isfinite(t_end)) {
    throw DomainError("t_end must be finite and greater than the start time");
  }
}

OdeProblem wall_rebound_problem(double epsilon, double t_end) {
  OdeProblem p;
  p.drag = DragLaw::disk(epsilon);
  p.forcing = Forcing::step(2.0, -2.0, 2.0);
  p.q0 = 1.0;
  p.v0 = 0.0;
  p.t_end = t_end;
  return p;
}

void PhysicalScenario::validate() const {
  if (!(rho_f > 0.0)) throw DomainError("fluid density must be positive");
  if (!(rho_s > rho_f)) {
    throw DomainError("particle must be denser than the fluid (rho_s > rho_f)");
  }
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  if (!(nu > 0.0)) throw DomainError("viscosity must be positive");
  if (!(g_char > 0.0)) throw DomainError("characteristic acceleration must be positive");
}

Nondimensional nondimensionalize(const PhysicalScenario& s) {
  s.validate();
  const double buoyancy = s.g_char * (s.rho_s - s.rho_f);
  const double r32 = s.radius * std::sqrt(s.radius);
  Nondimensional out;
  out.time_scale = std::sqrt(s.radius * s.rho_s / buoyancy);
  if (s.dimensionality == Dimensionality::TwoD) {
    out.epsilon = 3.0 * s.nu / (s.rho_s * r32) * std::sqrt(2.0 * s.rho_s / buoyancy);
  } else {
    out.epsilon = 9.0 * s.nu / (2.0 * s.rho_s * r32) * std::sqrt(s.rho_s / buoyancy);
  }
  return out;
}

PhysicalScenario make_scenario(const Fluid& fluid, double density_ratio, double radius,
                               Dimensionality dim) {
  PhysicalScenario s;
  s.rho_f = fluid.density;
  s.rho_s = density_ratio * fluid.density;
  s.radius = radius;
  s.nu = fluid.viscosity;
  s.g_char = kStandardGravity;
  s.dimensionality = dim;
  return s;
}

}  // namespace lubstep
