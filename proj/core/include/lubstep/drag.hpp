#pragma once

// Lubrication drag on a disk of unit radius at gap q above a flat wall.
// The lower energy bound
//   m_D(q) = 12 int_{-1/2}^{1/2} x^2 / delta_q(x)^3 dx,
//   delta_q(x) = 1 + q - sqrt(1 - x^2),
// behaves like 3 sqrt(2) pi q^{-3/2} as q -> 0.

#include <iosfwd>
#include <vector>

namespace lubstep::drag {

/// delta_q(x), evaluated without cancellation near x = 0. Requires |x| <= 1.
[[nodiscard]] double gap_profile(double q, double x);

/// m_D(q) for 0 < q <= 1, relative accuracy about 1e-10. Throws DomainError
/// outside (0, 1] and NumericalError when the quadrature does not converge.
[[nodiscard]] double m_D(double q);
/// 12 int_a^b x^2 / delta_q(x)^3 dx for -1/2 <= a <= b <= 1/2.
[[nodiscard]] double m_D_partial(double q, double a, double b);
/// m_D after the substitution x = sqrt(q) y.
[[nodiscard]] double m_D_rescaled(double q);

/// int_R x^2 / (1 + x^2/2)^3 dx (= pi / (2 sqrt 2)) by truncation at |x| = X
/// plus an asymptotic tail.
[[nodiscard]] double limit_integral(double X = 1.0e3);

/// Leading-order drag coefficients 3 sqrt(2) pi nu (R/q)^{3/2} and 6 pi nu R^2 / q.
[[nodiscard]] double asymptote_2d(double nu, double R, double q);
[[nodiscard]] double asymptote_3d(double nu, double R, double q);

struct ScanPoint {
  double q = 0.0;
  double deviation = 0.0;  // m_D(q) q^{3/2} / (3 sqrt(2) pi) - 1
};

/// Deviation from the asymptote at each q. Requires positive q in strictly
/// descending order.
[[nodiscard]] std::vector<ScanPoint> relative_error_scan(const std::vector<double>& q_list);
/// CSV with header `q,deviation`.
void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& scan);

/// Hermite blend eta(t) = t^2 (3 - 2t) and its second derivative.
[[nodiscard]] double hermite_profile(double t);
[[nodiscard]] double hermite_profile_dd(double t);
/// int_0^1 eta''(t)^2 dt, by quadrature.
[[nodiscard]] double hermite_bending_energy();

}  // namespace lubstep::drag
