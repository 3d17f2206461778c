#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lubstep/bounds.hpp"
#include "lubstep/errors.hpp"
#include "lubstep/quadrature.hpp"

using namespace lubstep;
using lubstep::testing::wall_reference;

TEST(Vbar, LinearRamp) {
  const Forcing g = Forcing::constant(2.0);
  EXPECT_DOUBLE_EQ(vbar_continuous(g, 1.0, -0.5, 1.5), 0.5);
  EXPECT_THROW((void)vbar_continuous(g, 1.0, -0.5, 0.5), DomainError);
}

TEST(Vbar, AcrossSignSwitch) {
  const Forcing g = Forcing::step(2.0, -2.0, 2.0);
  EXPECT_NEAR(vbar_continuous(g, 1.0, -0.1, 3.0), -0.1, 1e-15);
  EXPECT_DOUBLE_EQ(vbar_continuous(g, 1.0, 0.0, 2.0), -2.0);
}

TEST(Tbar2, Examples) {
  const Forcing g = Forcing::step(2.0, -2.0, 2.0);
  EXPECT_NEAR(*compute_tbar2(g, 1.0, -0.1, 10.0), 3.05, 1e-15);
  EXPECT_EQ(*compute_tbar2(Forcing::constant(2.0), 1.0, 0.0, 10.0), 1.0);
  EXPECT_NEAR(*compute_tbar2(Forcing::constant(2.0), 1.0, -0.5, 10.0), 1.25, 1e-15);
  EXPECT_FALSE(compute_tbar2(Forcing::constant(-1.0), 0.0, -1.0, 100.0).has_value());
  EXPECT_FALSE(compute_tbar2(g, 1.0, -0.1, 3.0).has_value());
  EXPECT_THROW((void)compute_tbar2(g, 1.0, 0.5, 10.0), DomainError);
}

TEST(Tbar2, ZeroVelocityWithNegativeForcingWaitsForRecovery) {
  const Forcing g = Forcing::step(2.0, -2.0, 2.0);
  EXPECT_NEAR(*compute_tbar2(g, 1.5, 0.0, 10.0), 2.5, 1e-15);
}

TEST(Tbar2, CallableForcingMatchesPiecewise) {
  const Forcing pw = Forcing::step(2.0, -2.0, 2.0);
  const Forcing fn = Forcing::callable([](double t) { return t <= 2.0 ? -2.0 : 2.0; });
  EXPECT_NEAR(*compute_tbar2(fn, 1.0, -0.1, 10.0), *compute_tbar2(pw, 1.0, -0.1, 10.0), 1e-9);
}

TEST(Ttilde2, SquareRootLaw) {
  const Forcing g = Forcing::constant(2.0);
  EXPECT_NEAR(*compute_ttilde2(g, 1.0, 0.01, 10.0) - 1.0, 0.1, 1e-15);
  EXPECT_NEAR(*compute_ttilde2(g, 1.0, 1e-4, 10.0) - 1.0, 0.01, 1e-15);
  EXPECT_FALSE(compute_ttilde2(Forcing::constant(0.0), 1.0, 0.01, 10.0).has_value());
  EXPECT_FALSE(compute_ttilde2(g, 1.0, 0.01, 1.05).has_value());
}

TEST(Ttilde2, ShrinksWithThreshold) {
  const Forcing g = Forcing::constant(1.5);
  double prev = 1e300;
  for (double q_s : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double gap = *compute_ttilde2(g, 0.0, q_s, 10.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

// Closed-form piecewise accumulation against quadrature plus bisection.
TEST(Ttilde2, MatchesQuadratureOracleOnRandomPieces) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bp;
    double t = 0.0;
    const int n = 1 + static_cast<int>(5 * u(rng));
    for (int i = 0; i < n; ++i) bp.push_back(t += 0.1 + u(rng));
    std::vector<double> vals;
    for (int i = 0; i <= n; ++i) vals.push_back(-1.0 + 4.0 * u(rng));
    const Forcing g = Forcing::piecewise_constant(bp, vals);
    const double tbar2 = 0.5 * u(rng);
    const double q_s = 0.01 + 0.5 * u(rng);
    const double t_end = t + 5.0;
    const auto got = compute_ttilde2(g, tbar2, q_s, t_end);

    // Quadrature split at the jumps of g.
    auto phi = [&](double T) {
      double sum = 0.0;
      double a = tbar2;
      auto piece = [&](double b) {
        if (b > a) {
          sum += quad::integrate([&](double s) { return (T - s) * g(s); }, a, b, {1e-14, 1e-15, 60})
                     .value;
        }
        a = std::max(a, b);
      };
      for (double b : bp) piece(std::min(b, T));
      piece(T);
      return sum - q_s;
    };
    // Oracle: fine scan for the first sign change, then bisection.
    std::optional<double> oracle;
    const int kScan = 4000;
    double lo = tbar2;
    for (int k = 1; k <= kScan && !oracle; ++k) {
      const double hi = tbar2 + (t_end - tbar2) * k / kScan;
      if (phi(hi) >= 0.0) {
        double a = lo;
        double b = hi;
        for (int it = 0; it < 100; ++it) {
          const double m = 0.5 * (a + b);
          (phi(m) >= 0.0 ? b : a) = m;
        }
        oracle = b;
      }
      lo = hi;
    }
    ASSERT_EQ(got.has_value(), oracle.has_value()) << "trial " << trial;
    if (got) {
      EXPECT_NEAR(*got, *oracle, 1e-10) << "trial " << trial;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(VelocityBound, Examples) {
  EXPECT_DOUBLE_EQ(velocity_bound(DragLaw::sphere(1.0), 0.02, Forcing::constant(2.0), 0.0, 1.0),
                   0.04);
  EXPECT_EQ(velocity_bound(DragLaw::disk(1.0), 0.02, Forcing::constant(-2.0), 0.0, 1.0), 0.0);
  const DragLaw d = DragLaw::disk(1e-3);
  const double q_s = threshold_from_step(d, 1e-3, 20.0);
  EXPECT_NEAR(velocity_bound(d, q_s, Forcing::step(2.0, -2.0, 2.0), 1.0, 4.0), 0.04, 1e-15);
}

TEST(Certificates, NoDipGivesEmptyReport) {
  const OdeProblem p = wall_rebound_problem(0.1);
  const Reference& ref = wall_reference(0.1);
  const auto certs = make_certificates(p, ref.trajectory, 1e-3);
  EXPECT_TRUE(certs.empty());
  const CertificateReport report = verify_certificates(p, ref, certs);
  EXPECT_TRUE(report.lines.empty());
  EXPECT_TRUE(report.all_pass());
  EXPECT_EQ(report.to_text(), "");
}

namespace {

void expect_all_checks_pass(double eps, double t1, double tbar2, double t2, double ttilde2) {
  const OdeProblem p = wall_rebound_problem(eps, 5.0);
  const Reference& ref = wall_reference(eps, 5.0);
  const double q_s = threshold_from_step(p.drag, 1e-3, 20.0);
  const auto certs = make_certificates(p, ref.trajectory, q_s);
  ASSERT_EQ(certs.size(), 1u);
  const DipCertificate& c = certs.front();
  EXPECT_NEAR(c.t1, t1, 1e-5);
  ASSERT_TRUE(c.tbar2 && c.ttilde2);
  EXPECT_NEAR(*c.tbar2, tbar2, 1e-5);
  EXPECT_NEAR(*c.ttilde2, ttilde2, 1e-5);
  EXPECT_LE(c.t1, *c.tbar2);
  EXPECT_LE(*c.tbar2, *c.ttilde2);
  EXPECT_NEAR(c.gap_bound, 0.02, 1e-15);
  EXPECT_NEAR(c.velocity_bound, 0.04, 1e-15);

  const CertificateReport report = verify_certificates(p, ref, certs);
  ASSERT_EQ(report.lines.size(), 6u);
  for (const CheckLine& line : report.lines) EXPECT_TRUE(line.pass) << line.name;
  EXPECT_NEAR(report.lines[0].measured, t2, 1e-5);
  EXPECT_LE(report.lines[2].measured, 0.02);
}

}  // namespace

// t1, tbar2, t2, ttilde2 from an independent implementation.
TEST(Certificates, ModerateDragAllChecksPass) {
  expect_all_checks_pass(0.1, 1.048392, 3.306299, 3.325065, 3.432292);
}

TEST(Certificates, WeakDragAllChecksPass) {
  expect_all_checks_pass(1e-3, 1.000177, 3.964160, 3.976217, 3.991304);
}

TEST(Certificates, ReportFormat) {
  CertificateReport r;
  r.lines.push_back({0, "gap", 0.02, 0.0125, true});
  r.lines.push_back({1, "sandwich_upper", 3.5, 4.0, false});
  EXPECT_EQ(r.to_text(),
            "dip=0 check=gap bound=0.02 measured=0.0125 pass=true\n"
            "dip=1 check=sandwich_upper bound=3.5 measured=4 pass=false\n");
  EXPECT_FALSE(r.all_pass());
}

TEST(Certificates, DetectsViolation) {
  const OdeProblem p = wall_rebound_problem(1e-3, 5.0);
  const Reference& ref = wall_reference(1e-3, 5.0);
  auto certs = make_certificates(p, ref.trajectory, threshold_from_step(p.drag, 1e-3, 20.0));
  ASSERT_FALSE(certs.empty());
  certs.front().ttilde2 = *certs.front().tbar2 + 1e-3;
  certs.front().velocity_bound = 1e-3;
  const CertificateReport report = verify_certificates(p, ref, certs);
  EXPECT_FALSE(report.all_pass());
}

TEST(Certificates, GeneralForcingSkipsShapeChecks) {
  OdeProblem p;
  p.drag = DragLaw::disk(0.1);
  p.forcing = Forcing::piecewise_constant({1.0, 2.0}, {-2.0, 2.0, 1.0});
  p.t_end = 4.0;
  ReferenceOptions opts;
  opts.dt = 1e-5;
  const Reference ref = reference_solve(p, opts);
  const auto certs = make_certificates(p, ref.trajectory, 0.1);
  ASSERT_FALSE(certs.empty());
  const CertificateReport report = verify_certificates(p, ref, certs);
  for (const CheckLine& line : report.lines) {
    EXPECT_TRUE(line.name == "sandwich_lower" || line.name == "sandwich_upper" ||
                line.name == "release_velocity")
        << line.name;
    EXPECT_TRUE(line.pass) << line.name;
  }
}
