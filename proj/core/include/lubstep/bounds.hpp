#pragma once

// Certificates for a contact episode: with t1 the first time q reaches the
// floor q_s, the surrogate velocity  vbar(t) = q'(t1) + int_{t1}^t g  gives a
// lower bound tbar2 for the return time t2, and the root of
//   int_{tbar2}^{T} (T - s) g(s) ds = q_s
// gives an upper bound ttilde2.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lubstep/integrators.hpp"
#include "lubstep/model.hpp"
#include "lubstep/trajectory.hpp"

namespace lubstep {

struct DipCertificate {
  std::size_t dip = 0;
  double t1 = 0.0;
  double qdot_t1 = 0.0;
  std::optional<double> tbar2;
  std::optional<double> ttilde2;
  double q_s = 0.0;
  double n_qs = 0.0;
  double velocity_bound = 0.0;  // sup g+ / n(q_s)
  double gap_bound = 0.0;       // 1 / n(q_s)
};

/// vbar(t) = qdot_t1 + int_{t1}^{t} g. Throws DomainError for t < t1.
[[nodiscard]] double vbar_continuous(const Forcing& forcing, double t1, double qdot_t1,
                                     double t);

/// First t >= t1 (and <= t_end) at which vbar returns to zero and starts to
/// grow. Throws DomainError when qdot_t1 > 0.
[[nodiscard]] std::optional<double> compute_tbar2(const Forcing& forcing, double t1,
                                                  double qdot_t1, double t_end);

/// First T > tbar2 (and <= t_end) with int_{tbar2}^{T} (T - s) g(s) ds = q_s.
[[nodiscard]] std::optional<double> compute_ttilde2(const Forcing& forcing, double tbar2,
                                                    double q_s, double t_end);

/// sup_{[a, b]} max(g, 0) / n(q_s).
[[nodiscard]] double velocity_bound(const DragLaw& drag, double q_s, const Forcing& forcing,
                                    double a, double b);

/// Certificates for every passage of the reference below q_s.
[[nodiscard]] std::vector<DipCertificate> make_certificates(const OdeProblem& problem,
                                                            const Trajectory& reference,
                                                            double q_s);

struct CheckLine {
  std::size_t dip = 0;
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct CertificateReport {
  std::vector<CheckLine> lines;

  [[nodiscard]] bool all_pass() const noexcept;
  /// `dip=<i> check=<name> bound=<v> measured=<v> pass=<bool>`, one line per check.
  [[nodiscard]] std::string to_text() const;
};

/// Checks each certificate against the reference: sandwich_lower
/// (tbar2 <= t2), sandwich_upper (t2 <= ttilde2), release_velocity
/// (0 <= q'(t2) <= velocity_bound) and, for negative-then-positive forcing,
/// gap (t2 - tbar2 <= 1/n(q_s)), qbar_frozen (|q - q_s| <= q_s on
/// [t1, tbar2]) and qbar_after (distance to the trajectory restarted from
/// (q_s, 0) at tbar2). Tolerances scale with the reference step and its
/// Richardson gap.
[[nodiscard]] CertificateReport verify_certificates(const OdeProblem& problem,
                                                    const Reference& reference,
                                                    const std::vector<DipCertificate>& certs);

}  // namespace lubstep
