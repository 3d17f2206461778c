#pragma once

// Experiment configuration: `[section]` headers followed by `key = value`
// lines; `#` starts a comment. Lists are comma separated. See docs/config.md.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lubstep/integrators.hpp"
#include "lubstep/model.hpp"

namespace lubstep {

struct ConfigIssue {
  std::size_t line = 0;  // 1-based; 0 when the issue has no single location
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  [[nodiscard]] const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

enum class DragKind { Disk, Sphere, Power, Zero };

struct ProblemSpec {
  DragKind drag = DragKind::Disk;
  double epsilon = 0.0;
  double p = 1.5;
  std::vector<double> breakpoints;
  std::vector<double> values;
  double q0 = 1.0;
  double v0 = 0.0;
  double t_end = 4.0;

  [[nodiscard]] OdeProblem build() const;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
};

struct OutputSpec {
  std::string dir = "out";
  std::string name = "run";
  bool certificates = true;
};

struct ExperimentConfig {
  ProblemSpec problem;
  SchemeConfig scheme;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  ReferenceOptions reference;
};

/// Names accepted by `[sweep] param`.
[[nodiscard]] const std::vector<std::string_view>& sweepable_parameters();

/// Copy of `config` with one parameter overridden. Setting C clears q_s and
/// vice versa.
[[nodiscard]] ExperimentConfig with_parameter(const ExperimentConfig& config,
                                              std::string_view param, double value);

/// Parses and validates; throws ConfigError listing every problem found.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
/// Reads the file and parses it; an unreadable file is reported as a ConfigError.
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

}  // namespace lubstep
