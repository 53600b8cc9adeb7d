#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "thickflow/config.hpp"
#include "thickflow/report.hpp"

namespace thickflow {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_solver = 3, exit_check = 4 };

struct RunOptions {
  int jobs = 1;
  /// Replaces config.output_dir when not empty.
  std::string output_dir;
  bool quiet = false;
};

/// Checks applied to a single run: conservation, energy, and per model the
/// stress and density bounds (power law), the barrier (singular), the L-inf
/// growth (2D); time-mean continuity and linearity when s_list is set.
std::vector<CheckReport> run_checks(const Config& cfg, const Trajectory& traj);
std::vector<CheckReport> run_checks(const Config& cfg, const Trajectory2D& traj);

/// Runs the configured model once and writes snapshots, diag.csv,
/// checks.json and manifest.json. Returns an ExitCode.
int run_experiment(const Config& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);
/// Runs the sweeps of the [sweep] section; one directory per member plus
/// sweep_*.json, sweep_*.csv, sweep_checks.json and manifest.json.
int run_sweep_experiment(const Config& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);

enum class Policy { strict, tolerant };

/// Reads every *checks.json under dir. Strict: any non-skipped failure gives
/// exit 4. Tolerant: a failure only counts when it also fails with every
/// tolerance widened tenfold. Unreadable or missing reports give exit 2.
int verify(const std::string& dir, Policy policy, std::ostream& out, std::ostream& err);

/// JSON dump of the seeded test banks (bank_size fields, phi_count test functions, horizon T).
nlohmann::json banks_json(const Config& cfg);

/// Human-readable table of reports.
void print_reports(const std::vector<CheckReport>& reports, std::ostream& out);

}  // namespace thickflow
