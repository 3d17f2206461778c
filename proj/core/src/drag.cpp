#include "lubstep/drag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "lubstep/csv.hpp"
#include "lubstep/errors.hpp"
#include "lubstep/quadrature.hpp"

namespace lubstep::drag {
namespace {

constexpr quad::Tolerance kPanelTol{1e-13, 0.0, 60};

double require_converged(const quad::Result& r, const char* what) {
  if (!r.converged || !std::isfinite(r.value)) {
    throw NumericalError(std::string(what) + ": quadrature did not converge");
  }
  return r.value;
}

// int over [lo, hi] with 0 <= lo, on panels [0, h], [h, 2h], [2h, 4h], ...
template <class F>
double graded_side(const F& f, double lo, double hi, double h, const char* what) {
  double total = 0.0;
  double edge = h;
  while (edge <= lo) edge *= 2.0;
  for (double left = lo; left < hi; edge *= 2.0) {
    const double right = std::min(edge, hi);
    total += require_converged(quad::integrate(f, left, right, kPanelTol), what);
    left = right;
  }
  return total;
}

// int_a^b f, graded geometrically away from 0 with base width h.
template <class F>
double graded_integral(const F& f, double a, double b, double h, const char* what) {
  double total = 0.0;
  if (a < 0.0) {
    auto mirrored = [&f](double x) { return f(-x); };
    total += graded_side(mirrored, b < 0.0 ? -b : 0.0, -a, h, what);
  }
  if (b > 0.0) total += graded_side(f, a > 0.0 ? a : 0.0, b, h, what);
  return total;
}

void require_gap(double q) {
  if (!(q > 0.0) || !(q <= 1.0)) throw DomainError("gap q must lie in (0, 1]");
}

}  // namespace

double gap_profile(double q, double x) {
  const double x2 = x * x;
  return q + x2 / (1.0 + std::sqrt(1.0 - x2));
}

double m_D_partial(double q, double a, double b) {
  require_gap(q);
  if (!(a >= -0.5 && a <= b && b <= 0.5)) throw DomainError("need -1/2 <= a <= b <= 1/2");
  auto f = [q](double x) {
    const double d = gap_profile(q, x);
    return x * x / (d * d * d);
  };
  return 12.0 * graded_integral(f, a, b, std::sqrt(q), "m_D");
}

double m_D(double q) { return 2.0 * m_D_partial(q, 0.0, 0.5); }

double m_D_rescaled(double q) {
  require_gap(q);
  const double s = std::sqrt(q);
  auto f = [q, s](double y) {
    const double d = gap_profile(q, s * y) / q;
    return y * y / (d * d * d);
  };
  const double half = graded_integral(f, 0.0, 0.5 / s, 1.0, "m_D_rescaled");
  return 12.0 / (q * s) * 2.0 * half;
}

double limit_integral(double X) {
  if (!(X >= 10.0)) throw DomainError("truncation point must be at least 10");
  auto f = [](double x) {
    const double d = 1.0 + 0.5 * x * x;
    return x * x / (d * d * d);
  };
  const double core = graded_integral(f, 0.0, X, 1.0, "limit_integral");
  // int_X^inf 8 x^-4 (1 + 2/x^2)^-3 dx, expanded in 1/X^2.
  const double u = 1.0 / (X * X);
  const double tail = 8.0 / (3.0 * X * X * X) * (1.0 - u * 18.0 / 5.0 + u * u * 72.0 / 7.0);
  return 2.0 * (core + tail);
}

double asymptote_2d(double nu, double R, double q) {
  if (!(nu > 0.0 && R > 0.0 && q > 0.0)) throw DomainError("nu, R, q must be positive");
  return 3.0 * std::numbers::sqrt2 * std::numbers::pi * nu * std::pow(R / q, 1.5);
}

double asymptote_3d(double nu, double R, double q) {
  if (!(nu > 0.0 && R > 0.0 && q > 0.0)) throw DomainError("nu, R, q must be positive");
  return 6.0 * std::numbers::pi * nu * R * R / q;
}

std::vector<ScanPoint> relative_error_scan(const std::vector<double>& q_list) {
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    if (!(q_list[i] > 0.0)) throw DomainError("q values must be positive");
    if (i > 0 && !(q_list[i] < q_list[i - 1])) {
      throw DomainError("q values must be strictly descending");
    }
  }
  std::vector<ScanPoint> out;
  out.reserve(q_list.size());
  const double lead = 3.0 * std::numbers::sqrt2 * std::numbers::pi;
  for (double q : q_list) out.push_back({q, m_D(q) * std::pow(q, 1.5) / lead - 1.0});
  return out;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& scan) {
  out << "q,deviation\n";
  for (const ScanPoint& p : scan) {
    out << csv::format_double(p.q) << ',' << csv::format_double(p.deviation) << '\n';
  }
}

double hermite_profile(double t) { return t * t * (3.0 - 2.0 * t); }

double hermite_profile_dd(double t) { return 6.0 - 12.0 * t; }

double hermite_bending_energy() {
  auto f = [](double t) {
    const double e = hermite_profile_dd(t);
    return e * e;
  };
  return require_converged(quad::integrate(f, 0.0, 1.0), "hermite_bending_energy");
}

}  // namespace lubstep::drag
