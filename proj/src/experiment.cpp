#include "thickflow/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>

#include "thickflow/diagnostics.hpp"
#include "thickflow/errors.hpp"
#include "thickflow/io.hpp"
#include "thickflow/limit_extraction.hpp"
#include "thickflow/transport_check.hpp"

namespace thickflow {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::string out_dir(const Config& cfg, const RunOptions& opts) {
  return opts.output_dir.empty() ? cfg.output_dir : opts.output_dir;
}

std::string tag(const char* prefix, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%g", prefix, v);
  return buf;
}

nlohmann::json error_json(const std::exception& e) {
  nlohmann::json j = {{"message", e.what()}};
  if (auto nd = dynamic_cast<const NewtonDivergence*>(&e)) {
    j["class"] = "NewtonDivergence";
    j["last_residual"] = nd->last_residual;
    j["damping"] = nd->damping;
  } else if (auto sd = dynamic_cast<const SolverDivergence*>(&e)) {
    j["class"] = "SolverDivergence";
    j["trace"] = sd->trace;
  } else if (dynamic_cast<const FluxOverflow*>(&e)) {
    j["class"] = "FluxOverflow";
  } else if (dynamic_cast<const VacuumError*>(&e)) {
    j["class"] = "VacuumError";
  } else if (dynamic_cast<const ConstraintViolation*>(&e)) {
    j["class"] = "ConstraintViolation";
  } else {
    j["class"] = "Error";
  }
  return j;
}

void add_time_mean(const Config& cfg, std::vector<CheckReport>& out, const std::vector<double>& m) {
  out.push_back(time_mean_continuity(cfg.s_list, m));
  if (cfg.s_list.size() >= 2) out.push_back(time_mean_linearity(cfg.s_list, m));
}

template <class Traj>
nlohmann::json transport_json(const Config& cfg, const Traj& traj) {
  nlohmann::json rows = nlohmann::json::array();
  const double T = traj.snapshots.back().t;
  if (T <= 0.0) return rows;
  for (const auto& phi : make_phi_bank(cfg.seed, cfg.phi_count, T))
    rows.push_back({{"continuity", continuity_residual(traj, phi)},
                    {"renormalized", renormalized_residual(traj, cfg.gamma, phi)}});
  return rows;
}

struct Artifacts {
  std::string root;
  std::vector<std::string> files;
  void add(const std::string& rel) { files.push_back(rel); }
  void add_all(const std::string& sub, const std::vector<std::string>& names) {
    for (const auto& n : names) files.push_back(sub.empty() ? n : sub + "/" + n);
  }
  std::string path(const std::string& rel) const { return (fs::path(root) / rel).string(); }
};

void write_manifest(const Artifacts& a, const Config& cfg, Clock::time_point start, const std::string& command,
                    int status) {
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  std::vector<std::string> files = a.files;
  files.push_back("manifest.json");
  write_json(a.path("manifest.json"), {{"command", command},
                                       {"version", kVersion},
                                       {"config", cfg.to_json()},
                                       {"wall_time_s", wall},
                                       {"exit_status", status},
                                       {"files", files}});
}

int status_of(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.skipped && !r.pass) return exit_check;
  return exit_ok;
}

}  // namespace

std::vector<CheckReport> run_checks(const Config& cfg, const Trajectory& traj) {
  std::vector<CheckReport> out = check_conservation(traj);
  out.push_back(check_energy_inequality(traj, cfg.energy_tol));
  if (traj.model.law.barrier()) {
    out.push_back(check_barrier(traj));
  } else {
    for (auto& r : check_stress_max_principle(traj, cfg.C)) out.push_back(r);
    for (auto& r : check_density_bounds(traj, cfg.C)) out.push_back(r);
  }
  if (!cfg.s_list.empty()) add_time_mean(cfg, out, time_mean_profile(traj, cfg.gamma, cfg.s_list));
  return out;
}

std::vector<CheckReport> run_checks(const Config& cfg, const Trajectory2D& traj) {
  std::vector<CheckReport> out = check_conservation(traj);
  out.push_back(check_energy_inequality(traj, cfg.energy_tol));
  out.push_back(check_linf_growth(traj));
  if (!cfg.s_list.empty()) add_time_mean(cfg, out, time_mean_profile(traj, cfg.gamma, cfg.s_list));
  return out;
}

void print_reports(const std::vector<CheckReport>& reports, std::ostream& out) {
  out << std::left << std::setw(36) << "check" << std::setw(16) << "measured" << std::setw(16) << "bound"
      << std::setw(10) << "tol"
      << "status\n";
  for (const auto& r : reports) {
    out << std::setw(36) << r.check << std::setw(16) << r.measured << std::setw(16) << r.bound << std::setw(10)
        << r.tol << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "\n";
  }
}

int run_experiment(const Config& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  Artifacts art{out_dir(cfg, opts), {}};
  fs::create_directories(art.root);
  std::vector<CheckReport> reports;
  try {
    if (cfg.is_1d()) {
      const Trajectory traj = run_1d(cfg.run_1d(), cfg.model_1d());
      art.add_all("", write_trajectory(art.root, traj));
      reports = run_checks(cfg, traj);
      write_json(art.path("transport.json"), transport_json(cfg, traj));
    } else {
      const Trajectory2D traj = run_2d(cfg.run_2d(), cfg.params_2d());
      art.add_all("", write_trajectory(art.root, traj));
      reports = run_checks(cfg, traj);
      write_json(art.path("transport.json"), transport_json(cfg, traj));
    }
    art.add("transport.json");
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    write_json(art.path("error.json"), error_json(e));
    art.add("error.json");
    write_manifest(art, cfg, start, "run", exit_solver);
    return exit_solver;
  }
  write_json(art.path("checks.json"), to_json(reports));
  art.add("checks.json");
  const int status = status_of(reports);
  write_manifest(art, cfg, start, "run", status);
  if (!opts.quiet) print_reports(reports, out);
  return status;
}

int run_sweep_experiment(const Config& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (cfg.p_values.empty() && cfg.eps_values.empty()) {
    err << "config has no [sweep] values\n";
    return exit_config;
  }
  const auto start = Clock::now();
  Artifacts art{out_dir(cfg, opts), {}};
  fs::create_directories(art.root);
  std::vector<CheckReport> reports;
  bool solver_failed = false;
  const auto bank_seed = cfg.seed;

  auto note_failures = [&](const SweepReport& rep) {
    for (const auto& e : rep.entries)
      if (!e.ok) {
        solver_failed = true;
        err << "solver failure at " << rep.mode << "=" << e.param << ": " << e.error << "\n";
      }
  };
  auto write_sweep = [&](const SweepReport& rep) {
    write_json(art.path("sweep_" + rep.mode + ".json"), rep.to_json());
    write_text(art.path("sweep_" + rep.mode + ".csv"), rep.to_csv());
    art.add("sweep_" + rep.mode + ".json");
    art.add("sweep_" + rep.mode + ".csv");
  };

  if (cfg.is_1d()) {
    std::optional<Trajectory> p_finest, eps_finest;
    std::optional<SweepReport> p_rep;
    const Model1D base = cfg.model_1d();
    auto one = [&](SweepMode mode, const std::vector<double>& values, const char* prefix) {
      std::vector<std::optional<Trajectory>> runs;
      SweepReport rep = run_sweep(cfg.run_1d(), base, mode, values, opts.jobs, &runs);
      note_failures(rep);
      write_sweep(rep);
      for (std::size_t k = 0; k < runs.size(); ++k) {
        if (!runs[k]) continue;
        const std::string sub = tag(prefix, rep.param_values[k]);
        art.add_all(sub, write_trajectory(art.path(sub), *runs[k]));
        for (auto r : run_checks(cfg, *runs[k])) {
          r.check += "@" + sub;
          reports.push_back(std::move(r));
        }
      }
      for (auto& r : check_sweep(rep, 0.01)) reports.push_back(std::move(r));
      if (runs.back()) {
        auto bank = admissible_bank_1d(bank_seed, cfg.bank_size, *runs.back());
        CheckReport v = variational_residual(*runs.back(), bank, cfg.variational_tol);
        v.check += "@" + tag(prefix, rep.param_values.back());
        reports.push_back(std::move(v));
      }
      return std::make_pair(std::move(rep), std::move(runs.back()));
    };
    try {
      if (!cfg.p_values.empty() && cfg.model == ModelKind::powerlaw1d) {
        auto [rep, fin] = one(SweepMode::p, cfg.p_values, "p");
        p_rep = std::move(rep);
        p_finest = std::move(fin);
      }
      if (!cfg.eps_values.empty()) {
        auto [rep, fin] = one(SweepMode::eps, cfg.eps_values, "eps");
        eps_finest = std::move(fin);
      }
      if (p_rep && p_finest && eps_finest) {
        const double d = cross_model_distance(*p_finest, *eps_finest);
        reports.push_back(check_cross_model(*p_rep, d, cfg.C));
      }
    } catch (const Error& e) {
      err << "solver failure: " << e.what() << "\n";
      solver_failed = true;
    }
  } else if (!cfg.p_values.empty()) {
    try {
      std::vector<std::optional<Trajectory2D>> runs;
      SweepReport rep = run_sweep_2d(cfg.run_2d(), cfg.params_2d(), cfg.p_values, opts.jobs, &runs);
      note_failures(rep);
      write_sweep(rep);
      for (std::size_t k = 0; k < runs.size(); ++k) {
        if (!runs[k]) continue;
        const std::string sub = tag("p", rep.param_values[k]);
        art.add_all(sub, write_trajectory(art.path(sub), *runs[k]));
        for (auto r : run_checks(cfg, *runs[k])) {
          r.check += "@" + sub;
          reports.push_back(std::move(r));
        }
      }
      for (auto& r : check_sweep(rep, 0.05)) reports.push_back(std::move(r));
      if (runs.back()) {
        auto bank = admissible_bank_2d(bank_seed, cfg.bank_size, *runs.back());
        CheckReport v = variational_residual(*runs.back(), bank, cfg.variational_tol);
        v.check += "@" + tag("p", rep.param_values.back());
        reports.push_back(std::move(v));
      }
    } catch (const Error& e) {
      err << "solver failure: " << e.what() << "\n";
      solver_failed = true;
    }
  }

  write_json(art.path("sweep_checks.json"), to_json(reports));
  art.add("sweep_checks.json");
  const int status = solver_failed ? exit_solver : status_of(reports);
  write_manifest(art, cfg, start, "sweep", status);
  if (!opts.quiet) print_reports(reports, out);
  return status;
}

int verify(const std::string& dir, Policy policy, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << "not a directory: " << dir << "\n";
    return exit_config;
  }
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() >= 11 && name.compare(name.size() - 11, 11, "checks.json") == 0)
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "no reports found under " << dir << "\n";
    return exit_config;
  }
  std::vector<CheckReport> all;
  for (const auto& f : files) {
    try {
      const nlohmann::json j = read_json(f.string());
      if (!j.is_array()) throw Error("report is not a JSON array");
      for (const auto& r : j) all.push_back(report_from_json(r));
    } catch (const std::exception& e) {
      err << "unreadable report " << f.string() << ": " << e.what() << "\n";
      return exit_config;
    }
  }
  int passed = 0, failed = 0, skipped = 0;
  std::vector<std::string> failures;
  for (auto& r : all) {
    if (r.skipped) {
      ++skipped;
      continue;
    }
    bool ok = r.pass;
    if (!ok && policy == Policy::tolerant) ok = r.measured <= r.bound * (1.0 + 10.0 * r.tol) + 10.0 * r.tol;
    if (ok) {
      ++passed;
    } else {
      ++failed;
      failures.push_back(r.check);
    }
  }
  print_reports(all, out);
  out << all.size() << " checks: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  for (const auto& f : failures) out << "FAILED " << f << "\n";
  return failed ? exit_check : exit_ok;
}

nlohmann::json banks_json(const Config& cfg) {
  const double T = cfg.T > 0.0 ? cfg.T : 1.0;
  auto mode = [](const Mode2D& m) {
    return nlohmann::json{{"k1", m.k1}, {"k2", m.k2}, {"sin1", m.sin1}, {"sin2", m.sin2}, {"coeff", m.coeff}};
  };
  auto modes = [&](const std::vector<Mode2D>& ms) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& m : ms) a.push_back(mode(m));
    return a;
  };
  nlohmann::json b1 = nlohmann::json::array(), b2 = nlohmann::json::array(), ph = nlohmann::json::array();
  for (const auto& v : make_bank_1d(cfg.seed, cfg.bank_size, T))
    b1.push_back({{"a0", v.a0}, {"a1", v.a1}, {"b0", v.b0}, {"b1", v.b1}});
  for (const auto& v : make_bank_2d(cfg.seed, cfg.bank_size, T))
    b2.push_back({{"c1_t0", modes(v.modes1_c0)},
                  {"c1_t1", modes(v.modes1_c1)},
                  {"c2_t0", modes(v.modes2_c0)},
                  {"c2_t1", modes(v.modes2_c1)}});
  for (const auto& f : make_phi_bank(cfg.seed, cfg.phi_count, T))
    ph.push_back({{"mean_1d", f.spatial_1d.mean},
                  {"cos_1d", f.spatial_1d.cos_coeffs},
                  {"sin_1d", f.spatial_1d.sin_coeffs},
                  {"mean_2d", f.spatial_2d.mean},
                  {"modes_2d", modes(f.spatial_2d.modes)}});
  return {{"seed", cfg.seed}, {"horizon", T}, {"bank_1d", b1}, {"bank_2d", b2}, {"phi", ph}};
}

}  // namespace thickflow
