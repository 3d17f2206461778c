#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace lubstep {

enum class Mode : std::uint8_t { Free, Stuck };

enum class RunStatus { Completed, FailedNonPositiveQ, FailedNonFinite };

[[nodiscard]] std::string_view to_string(Mode mode) noexcept;
[[nodiscard]] std::string_view to_string(RunStatus status) noexcept;

/// One recorded time level. `dt` is the step that produced it (0 for the
/// initial sample).
struct Sample {
  double t = 0.0;
  double q = 0.0;
  double v = 0.0;
  double dt = 0.0;
  Mode mode = Mode::Free;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Trajectory {
  std::vector<Sample> samples;
  RunStatus status = RunStatus::Completed;

  [[nodiscard]] bool completed() const noexcept { return status == RunStatus::Completed; }
  [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
  [[nodiscard]] double t_begin() const { return samples.front().t; }
  [[nodiscard]] double t_last() const { return samples.back().t; }

  /// Linear interpolation of q (resp. v) at t; clamps outside the sampled range.
  [[nodiscard]] double q_at(double t) const;
  [[nodiscard]] double v_at(double t) const;

  /// Smallest step of a Free-mode sample, ignoring the initial sample and a
  /// final step shortened to land on t_end.
  [[nodiscard]] std::optional<Sample> smallest_free_step() const;
  [[nodiscard]] std::size_t count(Mode mode) const noexcept;
};

/// First t > after at which q crosses `level` from above (q_prev > level >= q).
[[nodiscard]] std::optional<double> first_down_crossing(const Trajectory& traj, double level,
                                                        double after);
/// First t > after at which q crosses `level` from below (q_prev < level <= q).
[[nodiscard]] std::optional<double> first_up_crossing(const Trajectory& traj, double level,
                                                      double after);

/// A threshold-contact episode: the trajectory was frozen at `q_held` from
/// `t1` until `t_release`. `v_entry` is the last free velocity before the
/// freeze. `t_release` is empty when the run ended while still stuck.
struct DipEvent {
  std::size_t index = 0;
  double t1 = 0.0;
  double q_held = 0.0;
  double v_entry = 0.0;
  std::optional<double> t_release;

  friend bool operator==(const DipEvent&, const DipEvent&) = default;
};

using EventLog = std::vector<DipEvent>;

/// max |q_run(t_k) - q_ref(t_k)| over the run's samples, the reference being
/// linearly interpolated. Infinite when the run did not complete.
[[nodiscard]] double sup_error(const Trajectory& run, const Trajectory& reference,
                               double t_from = -1e300, double t_to = 1e300);

}  // namespace lubstep
