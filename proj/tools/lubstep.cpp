// lubstep command-line driver.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lubstep/config.hpp"
#include "lubstep/csv.hpp"
#include "lubstep/drag.hpp"
#include "lubstep/errors.hpp"
#include "lubstep/experiment.hpp"

namespace {

using namespace lubstep;

struct Common {
  std::optional<std::string> out;
  unsigned jobs = 1;
  std::optional<long long> seed;  // reserved
};

ExperimentConfig load(const std::string& path, const Common& common) {
  ExperimentConfig cfg = load_config(path);
  if (common.out) cfg.output.dir = *common.out;
  return cfg;
}

int cmd_run(const std::string& path, const Common& common) {
  const ExperimentConfig cfg = load(path, common);
  const ExperimentResult r = run_experiment(cfg);
  const Trajectory& traj = r.run.trajectory;
  std::cout << "status=" << to_string(traj.status) << " samples=" << traj.samples.size()
            << " dips=" << r.run.events.size() << '\n'
            << "trajectory=" << r.trajectory_csv.string() << '\n'
            << "events=" << r.events_csv.string() << '\n'
            << "certificates=" << r.certificates_txt.string() << '\n';
  if (r.certificates && !r.certificates->all_pass()) {
    std::cout << "warning: certificate checks failed\n";
  }
  return r.exit_code;
}

int cmd_sweep(const std::string& path, const Common& common) {
  const ExperimentConfig cfg = load(path, common);
  if (!cfg.sweep) throw ConfigError({{0, "missing [sweep] section"}});
  const auto rows = run_sweep(cfg, common.jobs);
  write_sweep_csv(std::cout, rows);
  return kExitOk;
}

int cmd_verify(const std::string& path, const Common& common) {
  const ExperimentConfig cfg = load(path, common);
  const std::filesystem::path dir(cfg.output.dir);
  ensure_writable_dir(dir);
  const VerifyResult r = run_verify(cfg);
  std::cout << "status=" << to_string(r.run.trajectory.status)
            << " sup_error=" << csv::format_double(r.sup_error)
            << " dips=" << r.certificates.size() << '\n'
            << r.report.to_text();
  const auto file = dir / (cfg.output.name + ".certificates.txt");
  std::ofstream out(file);
  out << r.report.to_text();
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  return r.exit_code;
}

int cmd_table1() {
  const auto rows = table1_rows();
  std::cout << format_table1(rows);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.deviation_2d <= 0.10 && r.deviation_3d <= 0.10;
  return ok ? kExitOk : kExitFailed;
}

int cmd_dragscan(double qmin, double qmax, int points, const Common& common) {
  if (!(qmin > 0.0) || !(qmax <= 1.0) || !(qmin < qmax) || points < 2) {
    throw DomainError("dragscan needs 0 < qmin < qmax <= 1 and at least 2 points");
  }
  std::vector<double> qs;
  const double a = std::log10(qmax);
  const double b = std::log10(qmin);
  for (int i = 0; i < points; ++i) qs.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
  qs.front() = qmax;
  qs.back() = qmin;
  if (common.out) {
    ensure_writable_dir(*common.out);
  }
  const auto scan = drag::relative_error_scan(qs);
  if (common.out) {
    const auto file = std::filesystem::path(*common.out) / "dragscan.csv";
    std::ofstream out(file);
    drag::write_scan_csv(out, scan);
    if (!out) throw IoError("cannot write '" + file.string() + "'");
  }
  drag::write_scan_csv(std::cout, scan);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.imbue(std::locale::classic());
  CLI::App app{"Lubricated wall-contact ODE experiments"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output directory (overrides [output] dir)");
    sub->add_option("--jobs", common.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "Reserved; no stochastic components");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one configured scheme and write CSV artifacts");
  run->add_option("config", config_path, "Configuration file")->required();
  add_common(run);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep against one reference");
  sweep->add_option("config", config_path, "Configuration file")->required();
  add_common(sweep);

  auto* verify = app.add_subcommand("verify", "Run scheme, reference and certificate checks");
  verify->add_option("config", config_path, "Configuration file")->required();
  add_common(verify);

  auto* table1 = app.add_subcommand("table1", "Print the epsilon table for water and glycerin");
  add_common(table1);

  double qmin = 1e-5;
  double qmax = 1e-2;
  int points = 4;
  auto* dragscan = app.add_subcommand("dragscan", "Deviation of m_D from its small-gap asymptote");
  dragscan->add_option("--qmin", qmin, "Smallest gap")->required();
  dragscan->add_option("--qmax", qmax, "Largest gap")->required();
  dragscan->add_option("--points", points, "Number of log-spaced gaps")->required();
  add_common(dragscan);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, common);
    if (*sweep) return cmd_sweep(config_path, common);
    if (*verify) return cmd_verify(config_path, common);
    if (*table1) return cmd_table1();
    if (*dragscan) return cmd_dragscan(qmin, qmax, points, common);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) {
      std::cerr << "config error";
      if (issue.line > 0) std::cerr << " (line " << issue.line << ")";
      std::cerr << ": " << issue.message << '\n';
    }
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitOk;
}
