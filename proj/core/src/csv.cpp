#include "lubstep/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace lubstep::csv {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view chomp(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || chomp(line) != header) {
    throw std::invalid_argument("expected CSV header '" + std::string(header) + "'");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') {
    ++first;
    if (text.size() > 1 && text[1] == '-') first = text.data();
  }
  const auto res = std::from_chars(first, text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const Sample& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.q) << ',' << format_double(s.v) << ','
        << format_double(s.dt) << ',' << to_string(s.mode) << '\n';
  }
}

Trajectory read_trajectory(std::istream& in) {
  expect_header(in, kTrajectoryHeader);
  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view row = chomp(line);
    if (row.empty()) continue;
    const auto f = split(row);
    if (f.size() != 5) throw std::invalid_argument("trajectory row needs 5 fields");
    Mode mode;
    if (f[4] == "free") {
      mode = Mode::Free;
    } else if (f[4] == "stuck") {
      mode = Mode::Stuck;
    } else {
      throw std::invalid_argument("unknown mode '" + std::string(f[4]) + "'");
    }
    traj.samples.push_back(
        {parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), mode});
  }
  return traj;
}

void write_events(std::ostream& out, const EventLog& events) {
  out << kEventsHeader << '\n';
  for (const DipEvent& e : events) {
    out << e.index << ',' << format_double(e.t1) << ',' << format_double(e.q_held) << ',';
    if (e.t_release) out << format_double(*e.t_release);
    out << '\n';
  }
}

EventLog read_events(std::istream& in) {
  expect_header(in, kEventsHeader);
  EventLog events;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view row = chomp(line);
    if (row.empty()) continue;
    const auto f = split(row);
    if (f.size() != 4) throw std::invalid_argument("event row needs 4 fields");
    DipEvent e;
    e.index = static_cast<std::size_t>(parse_double(f[0]));
    e.t1 = parse_double(f[1]);
    e.q_held = parse_double(f[2]);
    if (!f[3].empty()) e.t_release = parse_double(f[3]);
    events.push_back(e);
  }
  return events;
}

}  // namespace lubstep::csv
