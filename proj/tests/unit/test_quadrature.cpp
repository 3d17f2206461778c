#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lubstep/quadrature.hpp"
#include "lubstep/root_find.hpp"

using namespace lubstep;

TEST(Kronrod, ExactForLowDegreePolynomials) {
  const auto r = quad::kronrod15([](double x) { return std::pow(x, 20) - 3.0 * x + 1.0; }, -1.0, 2.0);
  const double exact = (std::pow(2.0, 21) + 1.0) / 21.0 - 4.5 + 3.0;
  EXPECT_NEAR(r.value, exact, 1e-9 * exact);
}

TEST(Adaptive, SmoothIntegrands) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value,
              std::numbers::e - 1.0, 1e-14);
  EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
              2.0, 1e-14);
}

TEST(Adaptive, SharpPeak) {
  const double w = 1e-4;
  const auto r = quad::integrate([w](double x) { return w / (x * x + w * w); }, -1.0, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0 * std::atan(1.0 / w), 1e-10);
}

TEST(Adaptive, ReversedLimitsFlipSign) {
  const auto f = [](double x) { return x * x; };
  EXPECT_NEAR(quad::integrate(f, 1.0, 0.0).value, -1.0 / 3.0, 1e-15);
}

TEST(SafeguardedNewton, FindsBracketedRoot) {
  auto f = [](double x) { return x * x * x - 2.0; };
  auto df = [](double x) { return 3.0 * x * x; };
  const auto r = safeguarded_newton(f, df, 0.0, 5.0, 4.0, 1e-14);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x, std::cbrt(2.0), 1e-14);
}

TEST(SafeguardedNewton, BisectionOnlyMode) {
  auto f = [](double x) { return x - std::cos(x); };
  auto df = [](double) { return 0.0; };
  const auto r = safeguarded_newton(f, df, 0.0, 1.0, 0.5, 1e-15, false);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x, 0.7390851332151607, 1e-14);
}

TEST(SafeguardedNewton, NewtonLeavingBracketFallsBack) {
  // Newton from x0 = 0.1 on atan overshoots far outside the bracket.
  auto f = [](double x) { return std::atan(x - 1.3); };
  auto df = [](double x) { return 1.0 / (1.0 + (x - 1.3) * (x - 1.3)); };
  const auto r = safeguarded_newton(f, df, -10.0, 10.0, -9.0, 1e-14);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x, 1.3, 1e-13);
}
