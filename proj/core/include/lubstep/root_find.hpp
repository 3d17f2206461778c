#pragma once

#include <cmath>
#include <limits>

namespace lubstep {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton iteration kept inside a sign-change bracket [lo, hi] with
/// f(lo) < 0 < f(hi). Steps that leave the bracket, or any step after
/// `max_newton` iterations, fall back to bisection (geometric when the
/// bracket is positive and spans more than a factor of four).
/// Converges on |f| <= ftol or once the bracket has collapsed to a few ulps.
/// A null `df` (see has_derivative) means pure bisection.
template <class F, class DF>
RootResult safeguarded_newton(F&& f, DF&& df, double lo, double hi, double x0, double ftol,
                              bool use_newton = true, int max_newton = 50,
                              int max_total = 400) {
  RootResult r;
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int it = 0; it < max_total; ++it) {
    const double fx = f(x);
    r.iterations = it + 1;
    r.x = x;
    r.residual = fx;
    if (std::abs(fx) <= ftol) {
      r.converged = true;
      return r;
    }
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) {
      r.converged = true;
      return r;
    }
    double next = std::numeric_limits<double>::quiet_NaN();
    if (use_newton && it < max_newton) {
      const double d = df(x);
      if (d != 0.0 && std::isfinite(d)) next = x - fx / d;
    }
    if (!(next > lo && next < hi)) {
      next = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    }
    x = next;
  }
  return r;
}

}  // namespace lubstep
