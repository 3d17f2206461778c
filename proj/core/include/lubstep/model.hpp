#pragma once

// Problem definition for the wall-approach ODE  q'' = -n(q) q' + g(t):
// drag laws, forcing terms, initial-value problems and the map from physical
// parameters to the single non-dimensional drag coefficient epsilon.

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace lubstep {

/// n(q) = epsilon * q^(-p).  p = 3/2 for a disk (2D), p = 1 for a sphere (3D).
struct PowerLaw {
  double epsilon = 0.0;
  double p = 1.5;
};

/// n(q) = 0: free flight, used for closed-form checks.
struct ZeroDrag {};

/// User-supplied drag. Both n and its antiderivative N are required; the
/// derivative n' is optional and only speeds up implicit root-finding.
struct CustomDrag {
  std::function<double(double)> n;
  std::function<double(double)> antiderivative;
  std::function<double(double)> derivative;
};

class DragLaw {
 public:
  using Kind = std::variant<PowerLaw, ZeroDrag, CustomDrag>;

  static DragLaw power_law(double epsilon, double p);
  static DragLaw disk(double epsilon) { return power_law(epsilon, 1.5); }
  static DragLaw sphere(double epsilon) { return power_law(epsilon, 1.0); }
  static DragLaw zero();
  static DragLaw custom(std::function<double(double)> n,
                        std::function<double(double)> antiderivative,
                        std::function<double(double)> derivative = {});

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] const PowerLaw* as_power_law() const noexcept {
    return std::get_if<PowerLaw>(&kind_);
  }
  [[nodiscard]] bool is_zero() const noexcept {
    return std::holds_alternative<ZeroDrag>(kind_);
  }

  /// Drag coefficient n(q). Throws DomainError for q <= 0 or non-finite q.
  [[nodiscard]] double n(double q) const;
  /// Antiderivative N with N' = n, in closed form for power laws.
  [[nodiscard]] double antiderivative(double q) const;
  /// n'(q). Throws UnsupportedError for a custom law without a derivative.
  [[nodiscard]] double derivative(double q) const;
  [[nodiscard]] bool has_derivative() const noexcept;

 private:
  explicit DragLaw(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

[[nodiscard]] double eval_n(const DragLaw& drag, double q);
[[nodiscard]] double eval_N(const DragLaw& drag, double q);

/// Threshold q_s solving n(q_s) = 1 / (C dt), i.e. q_s = (C eps dt)^(1/p).
/// Only defined for power laws; other kinds throw UnsupportedError.
[[nodiscard]] double threshold_from_step(const DragLaw& drag, double dt, double C);

/// Shape g = g_minus(t) < 0 for t <= t0, g = g_plus > 0 for t > t0.
struct SignSwitch {
  double t0 = 0.0;
  double g_plus = 0.0;
};

/// External (non-dimensional) acceleration g(t).
///
/// Piecewise-constant forcing uses breakpoints b_0 < ... < b_{m-1} and m + 1
/// values; g(t) = values[i] for b_{i-1} < t <= b_i (left-open, right-closed),
/// with b_{-1} = -inf and b_m = +inf.
class Forcing {
 public:
  static Forcing constant(double g);
  static Forcing piecewise_constant(std::vector<double> breakpoints,
                                    std::vector<double> values);
  /// g = before for t <= t0 and g = after for t > t0.
  static Forcing step(double t0, double before, double after);
  static Forcing callable(std::function<double(double)> g);

  [[nodiscard]] double operator()(double t) const;
  /// Integral of g over [a, b]; exact for piecewise-constant forcing.
  [[nodiscard]] double integral(double a, double b) const;
  /// sup of max(g, 0) over [a, b]. Sampled for callable forcing.
  [[nodiscard]] double positive_sup(double a, double b) const;
  /// Matches the negative-then-positive-constant shape, if this forcing has it.
  [[nodiscard]] std::optional<SignSwitch> sign_switch() const;

  [[nodiscard]] bool is_piecewise_constant() const noexcept { return !fn_; }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Index of the piece containing t.
  [[nodiscard]] std::size_t piece_index(double t) const;

 private:
  Forcing() = default;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::function<double(double)> fn_;
};

struct OdeProblem {
  DragLaw drag = DragLaw::zero();
  Forcing forcing = Forcing::constant(0.0);
  double q0 = 1.0;
  double v0 = 0.0;
  double t_end = 1.0;
  double t_start = 0.0;

  /// Throws DomainError when q0 <= 0 or the time window is empty.
  void validate() const;
};

/// Disk drag eps / q^(3/2), g = -2 up to t = 2 and +2 afterwards, q(0) = 1,
/// q'(0) = 0: the standard wall-approach and rebound test case.
[[nodiscard]] OdeProblem wall_rebound_problem(double epsilon, double t_end = 4.0);

enum class Dimensionality { TwoD, ThreeD };

/// Dimensional description of a particle settling in a viscous fluid (SI units).
struct PhysicalScenario {
  double rho_s = 0.0;   // particle density [kg/m^3]
  double rho_f = 0.0;   // fluid density [kg/m^3]
  double radius = 0.0;  // [m]
  double nu = 0.0;      // dynamic viscosity [Pa s]
  double g_char = 9.81; // characteristic acceleration [m/s^2]
  Dimensionality dimensionality = Dimensionality::TwoD;

  void validate() const;
};

struct Nondimensional {
  double epsilon = 0.0;
  double time_scale = 0.0;  // T with T^2 (rho_s - rho_f) g_char / (R rho_s) = 1
};

/// Throws DomainError unless rho_s > rho_f > 0 and R, nu, g_char > 0.
[[nodiscard]] Nondimensional nondimensionalize(const PhysicalScenario& s);

struct Fluid {
  std::string_view name;
  double density;    // kg/m^3
  double viscosity;  // Pa s
};

inline constexpr Fluid kWater{"water", 1000.0, 1.0e-3};
inline constexpr Fluid kGlycerin{"glycerin", 1260.0, 1.48};
inline constexpr double kStandardGravity = 9.81;

[[nodiscard]] PhysicalScenario make_scenario(const Fluid& fluid, double density_ratio,
                                             double radius, Dimensionality dim);

}  // namespace lubstep
