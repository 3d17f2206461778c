#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lubstep/drag.hpp"
#include "lubstep/errors.hpp"

namespace drag = lubstep::drag;

namespace {

const double kLead = 3.0 * std::numbers::sqrt2 * std::numbers::pi;

double midpoint_m_D(double q, int panels) {
  const double h = 1.0 / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x = -0.5 + (i + 0.5) * h;
    const double d = 1.0 + q - std::sqrt(1.0 - x * x);
    sum += x * x / (d * d * d);
  }
  return 12.0 * h * sum;
}

}  // namespace

// Values from a 30-digit quadrature.
TEST(MD, FrozenValues) {
  const std::pair<double, double> cases[] = {
      {1.0, 0.80189142197308712},   {1e-1, 232.23612076131607},
      {1e-2, 12641.550561060585},   {1e-3, 419687.31488161819},
      {1e-4, 13323426.450937013},   {1e-5, 421472853.7955956},
  };
  for (const auto& [q, expected] : cases) {
    EXPECT_NEAR(drag::m_D(q) / expected, 1.0, 1e-10) << "q=" << q;
  }
}

TEST(MD, MatchesMidpointRule) {
  EXPECT_NEAR(drag::m_D(1.0) / midpoint_m_D(1.0, 1'000'000), 1.0, 1e-6);
}

TEST(MD, CloseToAsymptoteAtSmallGap) {
  const double q = 1e-4;
  const double ratio = drag::m_D(q) * std::pow(q, 1.5) / kLead;
  EXPECT_GE(ratio, 0.98);
  EXPECT_LE(ratio, 1.02);
}

TEST(MD, EvenIntegrand) {
  for (double q : {1.0, 1e-2, 1e-4}) {
    const double half = drag::m_D_partial(q, 0.0, 0.5);
    EXPECT_NEAR(2.0 * half / drag::m_D(q), 1.0, 1e-12);
    EXPECT_NEAR(drag::m_D_partial(q, -0.5, 0.0) / half, 1.0, 1e-12);
  }
}

TEST(MD, RescaledFormAgrees) {
  for (double q : {1.0, 0.3, 1e-2, 1e-3, 1e-5}) {
    EXPECT_NEAR(drag::m_D_rescaled(q) / drag::m_D(q), 1.0, 1e-8) << "q=" << q;
  }
}

TEST(MD, DecreasesWithGap) {
  double prev = drag::m_D(1e-5);
  for (double q : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const double v = drag::m_D(q);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(MD, RejectsOutOfRange) {
  EXPECT_THROW((void)drag::m_D(0.0), lubstep::DomainError);
  EXPECT_THROW((void)drag::m_D(-1e-3), lubstep::DomainError);
  EXPECT_THROW((void)drag::m_D(1.5), lubstep::DomainError);
  EXPECT_THROW((void)drag::m_D(std::nan("")), lubstep::DomainError);
  EXPECT_THROW((void)drag::m_D_partial(0.1, -0.6, 0.0), lubstep::DomainError);
}

TEST(GapProfile, LowerQuadraticBound) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-0.5, 0.5);
  std::uniform_real_distribution<double> ulq(-6.0, 0.0);
  for (int i = 0; i < 10'000; ++i) {
    const double x = ux(rng);
    const double q = std::pow(10.0, ulq(rng));
    ASSERT_GE(drag::gap_profile(q, x), q + 0.5 * x * x) << "q=" << q << " x=" << x;
  }
  EXPECT_EQ(drag::gap_profile(0.25, 0.0), 0.25);
  EXPECT_NEAR(drag::gap_profile(0.0, 0.5), 1.0 - std::sqrt(0.75), 1e-16);
}

TEST(LimitIntegral, ClosedForm) {
  const double exact = std::numbers::pi / (2.0 * std::numbers::sqrt2);
  EXPECT_NEAR(drag::limit_integral(), exact, 1e-8);
  EXPECT_NEAR(drag::limit_integral(), 1.1107207345, 1e-10);
  EXPECT_NEAR(drag::limit_integral(50.0), exact, 1e-8);
}

TEST(Hermite, Profile) {
  EXPECT_EQ(drag::hermite_profile(0.0), 0.0);
  EXPECT_EQ(drag::hermite_profile(1.0), 1.0);
  EXPECT_EQ(drag::hermite_profile(0.5), 0.5);
  EXPECT_EQ(drag::hermite_profile_dd(0.0), 6.0);
  EXPECT_EQ(drag::hermite_profile_dd(1.0), -6.0);
  const double h = 1e-4;
  for (double t : {0.2, 0.5, 0.9}) {
    const double fd = (drag::hermite_profile(t + h) - 2.0 * drag::hermite_profile(t) +
                       drag::hermite_profile(t - h)) /
                      (h * h);
    EXPECT_NEAR(fd, drag::hermite_profile_dd(t), 1e-6);
  }
  EXPECT_NEAR(drag::hermite_bending_energy(), 12.0, 1e-12);
}

TEST(Asymptotes, Examples) {
  EXPECT_NEAR(drag::asymptote_2d(1.0, 0.1, 0.01), 421.49, 5e-3);
  EXPECT_NEAR(drag::asymptote_2d(1.0, 0.3, 0.3), 13.3286, 5e-5);
  EXPECT_NEAR(drag::asymptote_2d(2.0, 1.0, 0.02) / drag::asymptote_2d(2.0, 1.0, 0.04),
              std::pow(2.0, 1.5), 1e-12);
  EXPECT_NEAR(drag::asymptote_3d(1.0, 1.0, 1.0), 18.8496, 5e-5);
  EXPECT_NEAR(drag::asymptote_3d(1e-3, 1e-3, 1e-3), 6.0 * std::numbers::pi * 1e-6, 1e-18);
  EXPECT_NEAR(drag::asymptote_3d(1.0, 1.0, 0.5) / drag::asymptote_3d(1.0, 1.0, 1.0), 2.0,
              1e-15);
  EXPECT_THROW((void)drag::asymptote_2d(0.0, 1.0, 1.0), lubstep::DomainError);
  EXPECT_THROW((void)drag::asymptote_3d(1.0, 1.0, -1.0), lubstep::DomainError);
}

TEST(Scan, DeviationShrinksTowardContact) {
  const auto scan = drag::relative_error_scan({1e-2, 1e-3, 1e-4, 1e-5});
  ASSERT_EQ(scan.size(), 4u);
  const double expected[] = {-0.051550480696, -0.00427429773311, -0.000391814925187,
                             -3.80320038362e-5};
  for (std::size_t i = 0; i < scan.size(); ++i) {
    EXPECT_NEAR(scan[i].deviation / expected[i], 1.0, 1e-8);
    if (i > 0) EXPECT_LT(std::abs(scan[i].deviation), std::abs(scan[i - 1].deviation));
  }
}

TEST(Scan, RequiresDescendingPositiveInput) {
  EXPECT_THROW((void)drag::relative_error_scan({1e-3, 1e-2}), lubstep::DomainError);
  EXPECT_THROW((void)drag::relative_error_scan({1e-2, 1e-2}), lubstep::DomainError);
  EXPECT_THROW((void)drag::relative_error_scan({1e-2, 0.0}), lubstep::DomainError);
  EXPECT_TRUE(drag::relative_error_scan({}).empty());
}

TEST(Scan, Csv) {
  std::ostringstream out;
  drag::write_scan_csv(out, {{0.5, -0.25}, {1e-4, 1.5e-3}});
  EXPECT_EQ(out.str(), "q,deviation\n0.5,-0.25\n1e-04,0.0015\n");
}
