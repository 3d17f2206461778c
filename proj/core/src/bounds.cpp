#include "lubstep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lubstep/csv.hpp"
#include "lubstep/errors.hpp"
#include "lubstep/quadrature.hpp"

namespace lubstep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 20000;

struct Piece {
  double g;
  double end;
};

// Constant piece of a piecewise-constant forcing just after t.
Piece piece_after(const Forcing& f, double t) {
  const auto bp = f.breakpoints();
  const auto idx = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), t) - bp.begin());
  return {f.values()[idx], idx < bp.size() ? bp[idx] : kInf};
}

// Smallest root u > 0 of a u^2 + b u + c = 0.
std::optional<double> smallest_positive_root(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return std::nullopt;
    const double u = -c / b;
    return u > 0.0 ? std::optional(u) : std::nullopt;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double qq = -0.5 * (b + (b >= 0.0 ? s : -s));
  std::optional<double> best;
  for (double u : {qq / a, qq != 0.0 ? c / qq : 0.0}) {
    if (u > 0.0 && (!best || u < *best)) best = u;
  }
  return best;
}

// First zero of f on (a, b] located by scanning and bisection; f(a) < 0.
template <class F>
std::optional<double> scan_root(F&& f, double a, double b) {
  const double h = (b - a) / kScanPoints;
  double lo = a;
  for (int k = 1; k <= kScanPoints; ++k) {
    const double hi = k == kScanPoints ? b : a + h * k;
    if (f(hi) >= 0.0) {
      double l = lo;
      double r = hi;
      for (int it = 0; it < 200 && r - l > 1e-14 * std::max(1.0, std::abs(r)); ++it) {
        const double m = 0.5 * (l + r);
        (f(m) >= 0.0 ? r : l) = m;
      }
      return r;
    }
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace

double vbar_continuous(const Forcing& forcing, double t1, double qdot_t1, double t) {
  if (t < t1) throw DomainError("vbar is defined for t >= t1 only");
  return qdot_t1 + forcing.integral(t1, t);
}

std::optional<double> compute_tbar2(const Forcing& forcing, double t1, double qdot_t1,
                                    double t_end) {
  if (qdot_t1 > 0.0) throw DomainError("qdot_t1 must be non-positive");
  if (t_end < t1) return std::nullopt;
  if (!forcing.is_piecewise_constant()) {
    if (qdot_t1 == 0.0 && forcing(t1 + 1e-12 * std::max(1.0, std::abs(t1))) >= 0.0) return t1;
    return scan_root(
        [&](double t) {
          const double v = vbar_continuous(forcing, t1, qdot_t1, t);
          return v == 0.0 && t > t1 ? 0.0 : v;
        },
        t1, t_end);
  }
  double cur = t1;
  double v = qdot_t1;
  for (;;) {
    const Piece piece = piece_after(forcing, cur);
    const double stop = std::min(piece.end, t_end);
    if (v >= 0.0 && piece.g >= 0.0) return cur;
    if (piece.g > 0.0) {
      const double tz = cur + (-v) / piece.g;
      if (tz <= stop) return tz;
    }
    if (piece.end >= t_end) return std::nullopt;
    v += piece.g * (piece.end - cur);
    cur = piece.end;
  }
}

std::optional<double> compute_ttilde2(const Forcing& forcing, double tbar2, double q_s,
                                      double t_end) {
  if (!(q_s > 0.0)) throw DomainError("q_s must be positive");
  if (t_end <= tbar2) return std::nullopt;
  if (!forcing.is_piecewise_constant()) {
    auto phi = [&](double T) {
      const auto r = quad::integrate([&](double s) { return (T - s) * forcing(s); }, tbar2, T,
                                     {1e-13, 1e-16, 60});
      return r.value - q_s;
    };
    return scan_root(phi, tbar2, t_end);
  }
  // Phi(cur + u) = phi + V u + g u^2 / 2 on each constant piece.
  double cur = tbar2;
  double phi = 0.0;
  double V = 0.0;
  for (;;) {
    const Piece piece = piece_after(forcing, cur);
    const double len = std::min(piece.end, t_end) - cur;
    if (const auto u = smallest_positive_root(0.5 * piece.g, V, phi - q_s); u && *u <= len) {
      return cur + *u;
    }
    if (piece.end >= t_end) return std::nullopt;
    phi += V * len + 0.5 * piece.g * len * len;
    V += piece.g * len;
    cur = piece.end;
  }
}

double velocity_bound(const DragLaw& drag, double q_s, const Forcing& forcing, double a,
                      double b) {
  return forcing.positive_sup(a, b) / drag.n(q_s);
}

std::vector<DipCertificate> make_certificates(const OdeProblem& problem,
                                              const Trajectory& reference, double q_s) {
  if (!(q_s > 0.0)) throw DomainError("q_s must be positive");
  std::vector<DipCertificate> certs;
  if (reference.empty()) return certs;
  const double n_qs = problem.drag.n(q_s);
  const double t_end = reference.t_last();
  double after = reference.t_begin();
  while (const auto t1 = first_down_crossing(reference, q_s, after)) {
    DipCertificate c;
    c.dip = certs.size();
    c.t1 = *t1;
    c.qdot_t1 = std::min(reference.v_at(*t1), 0.0);
    c.q_s = q_s;
    c.n_qs = n_qs;
    c.gap_bound = 1.0 / n_qs;
    c.tbar2 = compute_tbar2(problem.forcing, c.t1, c.qdot_t1, t_end);
    if (c.tbar2) c.ttilde2 = compute_ttilde2(problem.forcing, *c.tbar2, q_s, t_end);
    const auto t2 = first_up_crossing(reference, q_s, c.t1);
    c.velocity_bound = velocity_bound(problem.drag, q_s, problem.forcing, c.t1, t2.value_or(t_end));
    certs.push_back(c);
    if (!t2) break;
    after = *t2;
  }
  return certs;
}

bool CertificateReport::all_pass() const noexcept {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

std::string CertificateReport::to_text() const {
  std::ostringstream out;
  for (const CheckLine& l : lines) {
    out << "dip=" << l.dip << " check=" << l.name << " bound=" << csv::format_double(l.bound)
        << " measured=" << csv::format_double(l.measured) << " pass=" << (l.pass ? "true" : "false")
        << '\n';
  }
  return out.str();
}

CertificateReport verify_certificates(const OdeProblem& problem, const Reference& reference,
                                      const std::vector<DipCertificate>& certs) {
  CertificateReport report;
  const Trajectory& ref = reference.trajectory;
  const double tol_t = 2.0 * reference.dt;
  const double tol_q = 4.0 * reference.richardson_gap + 1e-12;
  constexpr double tol_v = 1e-5;
  const bool sign_switch = problem.forcing.sign_switch().has_value();
  auto add = [&](std::size_t dip, const char* name, double bound, double measured, bool pass) {
    report.lines.push_back({dip, name, bound, measured, pass});
  };

  for (const DipCertificate& c : certs) {
    const auto t2 = first_up_crossing(ref, c.q_s, c.t1);
    if (!t2) {
      // Still below the floor at the end of the window: only an upper bound
      // inside the window would be contradicted.
      if (c.ttilde2) add(c.dip, "sandwich_upper", *c.ttilde2, kInf, false);
      continue;
    }
    const double tbar2 = c.tbar2.value_or(kInf);
    add(c.dip, "sandwich_lower", tbar2, *t2, *t2 >= tbar2 - tol_t);
    const double ttilde2 = c.ttilde2.value_or(kInf);
    add(c.dip, "sandwich_upper", ttilde2, *t2, *t2 <= ttilde2 + tol_t);
    const double tau = *t2 - tbar2;
    if (sign_switch) add(c.dip, "gap", c.gap_bound, tau, tau <= c.gap_bound + tol_t);
    const double v2 = ref.v_at(*t2);
    add(c.dip, "release_velocity", c.velocity_bound, v2,
        v2 >= -tol_v && v2 <= c.velocity_bound + tol_v);
    if (!sign_switch || !c.tbar2) continue;

    double frozen = 0.0;
    for (const Sample& s : ref.samples) {
      if (s.t < c.t1) continue;
      if (s.t > tbar2) break;
      frozen = std::max(frozen, std::abs(s.q - c.q_s));
    }
    add(c.dip, "qbar_frozen", c.q_s, frozen, frozen <= c.q_s + tol_q);

    OdeProblem restarted = problem;
    restarted.t_start = tbar2;
    restarted.q0 = c.q_s;
    restarted.v0 = 0.0;
    restarted.t_end = ref.t_last();
    if (!(restarted.t_end > tbar2)) continue;
    ReferenceOptions opts;
    opts.dt = reference.dt;
    const Reference qbar = reference_solve(restarted, opts);
    const double tol_after = tol_q + 4.0 * qbar.richardson_gap;
    double worst_slack = kInf;
    double worst_bound = 0.0;
    double worst_measured = 0.0;
    for (const Sample& s : ref.samples) {
      if (s.t < tbar2) continue;
      const double qb = qbar.trajectory.q_at(s.t);
      const double bound = s.t < *t2 ? qb : qb - qbar.trajectory.q_at(s.t - tau);
      const double measured = std::abs(s.q - qb);
      if (bound - measured < worst_slack) {
        worst_slack = bound - measured;
        worst_bound = bound;
        worst_measured = measured;
      }
    }
    add(c.dip, "qbar_after", worst_bound, worst_measured, worst_slack >= -tol_after);
  }
  return report;
}

}  // namespace lubstep
