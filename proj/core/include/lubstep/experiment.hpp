#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lubstep/bounds.hpp"
#include "lubstep/config.hpp"
#include "lubstep/integrators.hpp"

namespace lubstep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // run failed or a certificate check failed
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumerical = 4;

/// Creates `dir` if needed and probes it for writing; throws IoError otherwise.
void ensure_writable_dir(const std::filesystem::path& dir);

/// Floor used for certificates and return-time estimates: the threshold of a
/// Threshold run, the first frozen gap of an Adaptive run, else 0.01.
[[nodiscard]] double return_level(const ExperimentConfig& config, const OdeProblem& problem,
                                  const SchemeRun& run);
/// Return time seen by a run: the release of the first frozen episode ending
/// after the forcing turns positive, else the first up-crossing of `level`
/// after that switch (or after the start when the forcing has no switch).
[[nodiscard]] std::optional<double> estimate_return_time(const OdeProblem& problem,
                                                         const SchemeRun& run, double level);

struct ExperimentResult {
  SchemeRun run;
  std::optional<CertificateReport> certificates;
  std::filesystem::path trajectory_csv;
  std::filesystem::path events_csv;
  std::filesystem::path certificates_txt;
  int exit_code = kExitOk;
};

/// Runs the configured scheme and writes `<name>.trajectory.csv`,
/// `<name>.events.csv` and `<name>.certificates.txt` into the output
/// directory. The directory is checked before any computation. The
/// certificate report is empty when the run has no floor or certificates are
/// disabled.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string status;
  double sup_error = 0.0;
  std::optional<double> t2_estimate;
  double wall_time = 0.0;
  std::optional<double> min_dt;
};

/// Runs every sweep value on up to `jobs` threads. One reference per distinct
/// problem is shared by all rows. A numerical failure of a sub-run becomes a
/// row with status `failed_numerical`. Rows are sorted by value. Writes
/// `<name>.sweep.csv` and one trajectory CSV per value.
[[nodiscard]] std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned jobs = 1);
/// `param,value,status,sup_error_vs_reference,t2_estimate,wall_time,min_dt`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct VerifyResult {
  SchemeRun run;
  std::vector<DipCertificate> certificates;
  CertificateReport report;
  double sup_error = 0.0;
  int exit_code = kExitOk;
};

/// Scheme run, reference solve and certificate checks in one go. Exit code 0
/// only when the run completed and every check passed.
[[nodiscard]] VerifyResult run_verify(const ExperimentConfig& config);

struct Table1Row {
  std::string liquid;
  double density_ratio = 0.0;
  double radius = 0.0;  // m
  double eps_2d = 0.0;
  double eps_3d = 0.0;
  double published_2d = 0.0;
  double published_3d = 0.0;
  double deviation_2d = 0.0;  // |ours - published| / published
  double deviation_3d = 0.0;
};

[[nodiscard]] std::vector<Table1Row> table1_rows();
[[nodiscard]] std::string format_table1(const std::vector<Table1Row>& rows);

}  // namespace lubstep
