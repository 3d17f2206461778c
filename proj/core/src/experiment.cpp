#include "lubstep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "lubstep/csv.hpp"
#include "lubstep/errors.hpp"

namespace lubstep {
namespace fs = std::filesystem;
namespace {

constexpr double kDefaultReturnLevel = 0.01;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.imbue(std::locale::classic());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

bool changes_problem(std::string_view param) { return param == "epsilon" || param == "t_end"; }

}  // namespace

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / ".lubstep-write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << 'x') || !out.flush()) {
      throw IoError("output directory '" + dir.string() + "' is not writable");
    }
  }
  fs::remove(probe, ec);
}

double return_level(const ExperimentConfig& config, const OdeProblem& problem,
                    const SchemeRun& run) {
  switch (config.scheme.scheme) {
    case Scheme::Threshold: return config.scheme.threshold(problem.drag);
    case Scheme::Adaptive:
      if (!run.events.empty()) return run.events.front().q_held;
      return kDefaultReturnLevel;
    default: return kDefaultReturnLevel;
  }
}

std::optional<double> estimate_return_time(const OdeProblem& problem, const SchemeRun& run,
                                           double level) {
  const auto sw = problem.forcing.sign_switch();
  const double after = sw ? sw->t0 : problem.t_start;
  for (const DipEvent& e : run.events) {
    if (e.t_release && *e.t_release > after) return e.t_release;
  }
  return first_up_crossing(run.trajectory, level, after);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const fs::path dir(config.output.dir);
  ensure_writable_dir(dir);
  ExperimentResult result;
  result.trajectory_csv = dir / (config.output.name + ".trajectory.csv");
  result.events_csv = dir / (config.output.name + ".events.csv");
  result.certificates_txt = dir / (config.output.name + ".certificates.txt");

  const OdeProblem problem = config.problem.build();
  result.run = run_scheme(problem, config.scheme);

  {
    auto out = open_output(result.trajectory_csv);
    csv::write_trajectory(out, result.run.trajectory);
    finish(out, result.trajectory_csv);
  }
  {
    auto out = open_output(result.events_csv);
    csv::write_events(out, result.run.events);
    finish(out, result.events_csv);
  }

  CertificateReport report;
  const bool has_floor = config.scheme.scheme == Scheme::Threshold ||
                         (config.scheme.scheme == Scheme::Adaptive && !result.run.events.empty());
  if (config.output.certificates && has_floor) {
    const Reference ref = reference_solve(problem, config.reference);
    const double q_s = return_level(config, problem, result.run);
    report = verify_certificates(problem, ref, make_certificates(problem, ref.trajectory, q_s));
    result.certificates = report;
  }
  {
    auto out = open_output(result.certificates_txt);
    out << report.to_text();
    finish(out, result.certificates_txt);
  }
  result.exit_code = result.run.trajectory.completed() ? kExitOk : kExitFailed;
  return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned jobs) {
  if (!config.sweep) throw DomainError("configuration has no [sweep] section");
  const SweepSpec& sweep = *config.sweep;
  const fs::path dir(config.output.dir);
  ensure_writable_dir(dir);

  std::vector<double> values = sweep.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // One reference per distinct problem.
  std::map<double, std::shared_ptr<const Reference>> references;
  std::mutex ref_mutex;
  std::shared_ptr<const Reference> shared_ref;
  if (!changes_problem(sweep.param)) {
    shared_ref = std::make_shared<Reference>(reference_solve(config.problem.build(), config.reference));
  }
  auto reference_for = [&](double value, const OdeProblem& problem) {
    if (shared_ref) return shared_ref;
    std::lock_guard lock(ref_mutex);
    auto& slot = references[value];
    if (!slot) slot = std::make_shared<Reference>(reference_solve(problem, config.reference));
    return slot;
  };

  std::vector<SweepRow> rows(values.size());
  std::vector<Trajectory> trajectories(values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        const ExperimentConfig sub = with_parameter(config, sweep.param, values[i]);
        const OdeProblem problem = sub.problem.build();
        SweepRow& row = rows[i];
        row.param = sweep.param;
        row.value = values[i];
        try {
          const auto start = std::chrono::steady_clock::now();
          SchemeRun run = run_scheme(problem, sub.scheme);
          row.wall_time =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          const auto ref = reference_for(values[i], problem);
          row.status = std::string(to_string(run.trajectory.status));
          row.sup_error = sup_error(run.trajectory, ref->trajectory);
          row.t2_estimate = estimate_return_time(problem, run, return_level(sub, problem, run));
          if (auto s = run.trajectory.smallest_free_step()) row.min_dt = s->dt;
          trajectories[i] = std::move(run.trajectory);
        } catch (const OracleError&) {
          throw;
        } catch (const NumericalError&) {
          row.status = "failed_numerical";
          row.sup_error = std::numeric_limits<double>::infinity();
        } catch (const CapacityError&) {
          row.status = "failed_capacity";
          row.sup_error = std::numeric_limits<double>::infinity();
        }
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next = values.size();
        return;
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (fatal) std::rethrow_exception(fatal);

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (trajectories[i].empty()) continue;
    const fs::path path = dir / (config.output.name + "." + sweep.param + "-" +
                                 csv::format_double(values[i]) + ".trajectory.csv");
    auto out = open_output(path);
    csv::write_trajectory(out, trajectories[i]);
    finish(out, path);
  }
  const fs::path summary = dir / (config.output.name + ".sweep.csv");
  auto out = open_output(summary);
  write_sweep_csv(out, rows);
  finish(out, summary);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,value,status,sup_error_vs_reference,t2_estimate,wall_time,min_dt\n";
  for (const SweepRow& r : rows) {
    out << r.param << ',' << csv::format_double(r.value) << ',' << r.status << ','
        << csv::format_double(r.sup_error) << ','
        << (r.t2_estimate ? csv::format_double(*r.t2_estimate) : "none") << ','
        << csv::format_double(r.wall_time) << ','
        << (r.min_dt ? csv::format_double(*r.min_dt) : "none") << '\n';
  }
}

VerifyResult run_verify(const ExperimentConfig& config) {
  const OdeProblem problem = config.problem.build();
  VerifyResult result;
  result.run = run_scheme(problem, config.scheme);
  const Reference ref = reference_solve(problem, config.reference);
  result.sup_error = sup_error(result.run.trajectory, ref.trajectory);
  const double q_s = return_level(config, problem, result.run);
  result.certificates = make_certificates(problem, ref.trajectory, q_s);
  result.report = verify_certificates(problem, ref, result.certificates);
  result.exit_code =
      result.run.trajectory.completed() && result.report.all_pass() ? kExitOk : kExitFailed;
  return result;
}

std::vector<Table1Row> table1_rows() {
  struct Case {
    const Fluid* fluid;
    double ratio;
    double radius;
    double published_2d;
    double published_3d;
  };
  const Case cases[] = {
      {&kWater, 1.1, 1e-3, 0.13, 0.14},
      {&kWater, 1.5, 1e-4, 1.55, 1.64},
      {&kGlycerin, 1.1, 1e-3, 152.0, 161.0},
      {&kGlycerin, 1.5, 1e-4, 1843.0, 1954.0},
  };
  std::vector<Table1Row> rows;
  for (const Case& c : cases) {
    Table1Row row;
    row.liquid = std::string(c.fluid->name);
    row.density_ratio = c.ratio;
    row.radius = c.radius;
    row.eps_2d =
        nondimensionalize(make_scenario(*c.fluid, c.ratio, c.radius, Dimensionality::TwoD)).epsilon;
    row.eps_3d = nondimensionalize(make_scenario(*c.fluid, c.ratio, c.radius, Dimensionality::ThreeD))
                     .epsilon;
    row.published_2d = c.published_2d;
    row.published_3d = c.published_3d;
    row.deviation_2d = std::abs(row.eps_2d - c.published_2d) / c.published_2d;
    row.deviation_3d = std::abs(row.eps_3d - c.published_3d) / c.published_3d;
    rows.push_back(row);
  }
  return rows;
}

std::string format_table1(const std::vector<Table1Row>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::left << std::setw(10) << "liquid" << std::right << std::setw(8) << "ratio"
      << std::setw(8) << "R[mm]" << std::setw(12) << "eps_2d" << std::setw(10) << "published"
      << std::setw(10) << "dev" << std::setw(12) << "eps_3d" << std::setw(10) << "published"
      << std::setw(10) << "dev" << '\n';
  for (const Table1Row& r : rows) {
    out << std::left << std::setw(10) << r.liquid << std::right << std::setw(8)
        << std::setprecision(3) << r.density_ratio << std::setw(8) << r.radius * 1e3
        << std::setw(12) << std::setprecision(4) << r.eps_2d << std::setw(10) << r.published_2d
        << std::setw(10) << std::setprecision(2) << r.deviation_2d << std::setw(12)
        << std::setprecision(4) << r.eps_3d << std::setw(10) << r.published_3d << std::setw(10)
        << std::setprecision(2) << r.deviation_3d << '\n';
  }
  return out.str();
}

}  // namespace lubstep
