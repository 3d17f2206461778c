#include "lubstep/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lubstep {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::Free ? "free" : "stuck";
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::FailedNonPositiveQ: return "failed_nonpositive_q";
    case RunStatus::FailedNonFinite: return "failed_nonfinite";
  }
  return "unknown";
}

namespace {

template <class Get>
double interpolate(const std::vector<Sample>& s, double t, Get get) {
  if (t <= s.front().t) return get(s.front());
  if (t >= s.back().t) return get(s.back());
  const auto it = std::lower_bound(s.begin(), s.end(), t,
                                   [](const Sample& a, double x) { return a.t < x; });
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  if (hi.t == t) return get(hi);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return get(lo) + w * (get(hi) - get(lo));
}

}  // namespace

double Trajectory::q_at(double t) const {
  return interpolate(samples, t, [](const Sample& s) { return s.q; });
}

double Trajectory::v_at(double t) const {
  return interpolate(samples, t, [](const Sample& s) { return s.v; });
}

std::optional<Sample> Trajectory::smallest_free_step() const {
  if (samples.size() < 2) return std::nullopt;
  std::optional<Sample> best;
  // The last sample may carry a step clipped to t_end; skip it.
  const std::size_t end = samples.size() > 2 ? samples.size() - 1 : samples.size();
  for (std::size_t i = 1; i < end; ++i) {
    const Sample& s = samples[i];
    if (s.mode != Mode::Free || !(s.dt > 0.0)) continue;
    if (!best || s.dt < best->dt) best = s;
  }
  return best;
}

std::size_t Trajectory::count(Mode mode) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [mode](const Sample& s) { return s.mode == mode; }));
}

std::optional<double> first_down_crossing(const Trajectory& traj, double level, double after) {
  const auto& s = traj.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].t <= after) continue;
    if (s[i - 1].q > level && s[i].q <= level) {
      const double w = (s[i - 1].q - level) / (s[i - 1].q - s[i].q);
      return std::max(after, s[i - 1].t + w * (s[i].t - s[i - 1].t));
    }
  }
  return std::nullopt;
}

std::optional<double> first_up_crossing(const Trajectory& traj, double level, double after) {
  const auto& s = traj.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].t <= after) continue;
    if (s[i - 1].q < level && s[i].q >= level) {
      const double w = (level - s[i - 1].q) / (s[i].q - s[i - 1].q);
      return std::max(after, s[i - 1].t + w * (s[i].t - s[i - 1].t));
    }
  }
  return std::nullopt;
}

double sup_error(const Trajectory& run, const Trajectory& reference, double t_from, double t_to) {
  if (!run.completed()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Sample& s : run.samples) {
    if (s.t < t_from || s.t > t_to) continue;
    worst = std::max(worst, std::abs(s.q - reference.q_at(s.t)));
  }
  return worst;
}

}  // namespace lubstep
