#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "lubstep/trajectory.hpp"

namespace lubstep::csv {

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] std::string format_double(double x);
/// Strict parse of a full token; throws std::invalid_argument on garbage.
[[nodiscard]] double parse_double(std::string_view text);

inline constexpr std::string_view kTrajectoryHeader = "t,q,v,dt,mode";
inline constexpr std::string_view kEventsHeader = "dip,t1,q_held,t_release";

void write_trajectory(std::ostream& out, const Trajectory& traj);
/// Inverse of write_trajectory. The status is not stored and reads back as Completed.
[[nodiscard]] Trajectory read_trajectory(std::istream& in);

/// One row per dip; an unreleased dip has an empty t_release field.
void write_events(std::ostream& out, const EventLog& events);
[[nodiscard]] EventLog read_events(std::istream& in);

}  // namespace lubstep::csv
