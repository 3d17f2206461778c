#include "lubstep/quadrature.hpp"

#include <array>
#include <cmath>

namespace lubstep::quad {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Recursion {
  const std::function<double(double)>& f;
  int max_depth;
  int evaluations = 0;
  bool converged = true;
  double error = 0.0;

  double run(double a, double b, const Result& whole, double target, int depth) {
    if (whole.error <= target || depth >= max_depth || !(b > a)) {
      if (whole.error > target) converged = false;
      error += whole.error;
      return whole.value;
    }
    const double mid = 0.5 * (a + b);
    const Result left = kronrod15(f, a, mid);
    const Result right = kronrod15(f, mid, b);
    evaluations += left.evaluations + right.evaluations;
    return run(a, mid, left, 0.5 * target, depth + 1) +
           run(mid, b, right, 0.5 * target, depth + 1);
  }
};

}  // namespace

Result kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  Result r;
  r.value = kronrod * half;
  r.error = std::abs((kronrod - gauss) * half);
  r.evaluations = 15;
  return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, tol);
    r.value = -r.value;
    return r;
  }
  const Result whole = kronrod15(f, a, b);
  const double target = std::max(tol.abs, tol.rel * std::abs(whole.value));
  Recursion rec{f, tol.max_depth};
  rec.evaluations = whole.evaluations;
  Result out;
  out.value = rec.run(a, b, whole, target, 0);
  out.error = rec.error;
  out.evaluations = rec.evaluations;
  out.converged = rec.converged;
  return out;
}

}  // namespace lubstep::quad
