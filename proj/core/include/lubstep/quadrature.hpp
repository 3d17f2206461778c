#pragma once

#include <functional>

namespace lubstep::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // sum of |K15 - G7| over accepted panels
  int evaluations = 0;
  bool converged = true;
};

struct Tolerance {
  double rel = 1e-12;
  double abs = 0.0;
  int max_depth = 60;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b] by recursive
/// bisection. A panel is accepted once |K15 - G7| drops below its share of
/// max(abs, rel * |I|), where I is the one-panel estimate over [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

/// Single 15-point Kronrod panel; `error` is |K15 - G7|.
Result kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace lubstep::quad
