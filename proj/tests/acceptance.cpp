// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "thickflow/config.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/io.hpp"
#include "thickflow/limit_extraction.hpp"
#include "thickflow/powerlaw_1d.hpp"
#include "thickflow/semistationary_2d.hpp"
#include "thickflow/transport_check.hpp"

using namespace thickflow;
using namespace thickflow::oracles;

namespace {

using Runs1D = std::vector<std::optional<Trajectory>>;
using Runs2D = std::vector<std::optional<Trajectory2D>>;

struct Gate {
  int failed = 0;
  void line(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  // A criterion that throws is a failure, not a crash.
  void run(int id, const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream os;
    os.precision(4);
    bool ok = false;
    try {
      ok = body(os);
    } catch (const std::exception& e) {
      os << "exception: " << e.what();
    }
    line(id, name, ok, os.str());
  }
};

const CheckReport& named(const std::vector<CheckReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.check == name) return r;
  throw std::runtime_error("no report named " + name);
}

bool complete(const Runs1D& rs) {
  for (const auto& r : rs)
    if (!r) return false;
  return true;
}

bool complete(const Runs2D& rs) {
  for (const auto& r : rs)
    if (!r) return false;
  return true;
}

std::string csv_of(const Trajectory& tr) {
  std::string s = diag_csv(tr.records);
  for (const auto& snap : tr.snapshots) s += snapshot_csv(snap, tr.grid, tr.model);
  return s;
}

std::string csv_of(const Trajectory2D& tr) {
  std::string s = diag_csv(tr.records);
  for (const auto& snap : tr.snapshots) s += snapshot_csv(snap, tr.grid);
  return s;
}

std::vector<double> equispaced(double T, int k) {
  std::vector<double> t;
  for (int i = 1; i <= k; ++i) t.push_back(T * i / k);
  return t;
}

double max_abs_diff(const Field1D& a, const Field1D& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::string dir = THICKFLOW_SOURCE_DIR "/configs/";
  const Config pc = load_config(dir + "powerlaw_reference.ini");
  const Config sc = load_config(dir + "semistationary_reference.ini");
  const Model1D base = pc.model_1d();

  Runs1D p_runs, e_runs, p512;
  Runs2D runs2d;
  const SweepReport prep = run_sweep(pc.run_1d(), base, SweepMode::p, pc.p_values, 1, &p_runs);
  const SweepReport erep = run_sweep(pc.run_1d(), base, SweepMode::eps, pc.eps_values, 1, &e_runs);
  Config pc512 = pc;
  pc512.n = 512;
  run_sweep(pc512.run_1d(), pc512.model_1d(), SweepMode::p, pc.p_values, 1, &p512);
  const SweepReport rep2d = run_sweep_2d(sc.run_2d(), sc.params_2d(), sc.p_values, 1, &runs2d);
  std::printf("reference runs done in %.1f s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

  const bool all_1d = complete(p_runs) && complete(e_runs) && complete(p512);
  const bool all_2d = complete(runs2d);
  const auto p_checks = check_sweep(prep, 0.01);
  const auto checks2d = check_sweep(rep2d, 0.05);

  Gate gate;

  gate.run(1, "conservation", [&](std::ostringstream& os) {
    bool ok = all_1d && all_2d;
    double dm = 0.0, dp = 0.0;
    for (const Runs1D* rs : {&p_runs, &e_runs, &p512})
      for (const auto& tr : *rs) {
        const auto c = check_conservation(*tr);
        ok = ok && c[0].measured < 1e-12 && c[1].measured < 1e-8;
        dm = std::max(dm, c[0].measured);
        dp = std::max(dp, c[1].measured);
      }
    for (const auto& tr : runs2d) {
      const auto c = check_conservation(*tr);
      ok = ok && c[0].measured < 1e-12;
      dm = std::max(dm, c[0].measured);
    }
    os << "max mass drift " << dm << ", max momentum drift " << dp << " over 16 runs";
    return ok;
  });

  gate.run(2, "energy inequality", [&](std::ostringstream& os) {
    bool ok = all_1d && all_2d;
    double worst = -1.0;
    for (const Runs1D* rs : {&p_runs, &e_runs})
      for (const auto& tr : *rs) {
        const CheckReport r = check_energy_inequality(*tr, 1e-6);
        ok = ok && r.pass;
        worst = std::max(worst, r.measured);
      }
    for (const auto& tr : runs2d) {
      const CheckReport r = check_energy_inequality(*tr, 1e-6);
      ok = ok && r.pass;
      worst = std::max(worst, r.measured);
    }
    os << "max (E+D-E0)/E0 = " << worst << " (limit 1e-6)";
    return ok;
  });

  gate.run(3, "density bounds", [&](std::ostringstream& os) {
    bool ok = all_1d;
    double worst256 = -1e300, worst512 = -1e300;
    for (const Runs1D* rs : {&p_runs, &e_runs})
      for (const auto& tr : *rs)
        for (const auto& r : check_density_bounds(*tr, pc.C)) {
          ok = ok && r.pass;
          worst256 = std::max(worst256, r.measured / r.tol);
        }
    for (std::size_t k = 0; k < p512.size(); ++k) {
      const auto coarse = check_density_bounds(*p_runs[k], pc.C);
      const auto fine = check_density_bounds(*p512[k], pc.C);
      for (std::size_t j = 0; j < fine.size(); ++j) {
        ok = ok && fine[j].pass && fine[j].tol < coarse[j].tol;
        worst512 = std::max(worst512, fine[j].measured / fine[j].tol);
      }
    }
    os << "max excess/slack " << worst256 << " at n=256, " << worst512 << " at n=512";
    return ok;
  });

  gate.run(4, "stress maximum principle", [&](std::ostringstream& os) {
    bool ok = all_1d;
    double e256 = -1e300, e512 = -1e300;
    for (std::size_t k = 0; k < p_runs.size(); ++k) {
      if (!p_runs[k]->max_principle_hypothesis) continue;
      const CheckReport c = named(check_stress_max_principle(*p_runs[k], pc.C), "stress_max_principle_mu");
      const CheckReport f = named(check_stress_max_principle(*p512[k], pc.C), "stress_max_principle_mu");
      ok = ok && c.pass && f.pass && std::max(f.measured, 0.0) <= std::max(c.measured, 0.0);
      e256 = std::max(e256, c.measured);
      e512 = std::max(e512, f.measured);
    }
    os << "max sigma - mu: " << e256 << " at n=256, " << e512 << " at n=512";
    return ok;
  });

  gate.run(5, "constraint emergence", [&](std::ostringstream& os) {
    const CheckReport& dec = named(p_checks, "violation_decreasing_p");
    const CheckReport& fin = named(p_checks, "violation_finest_p");
    const CheckReport& fin2 = named(checks2d, "violation_finest_p2d");
    os << "1D viol(0.05):";
    for (const auto& e : prep.entries) os << " " << e.viol_005;
    os << "; 2D at p=16: " << fin2.measured;
    return dec.pass && fin.measured < 0.01 && fin2.measured < 0.05;
  });

  gate.run(6, "complementarity", [&](std::ostringstream& os) {
    const CheckReport& dec = named(p_checks, "complementarity_decreasing_p");
    const CheckReport& drop = named(p_checks, "complementarity_drop_p");
    os << "residual " << prep.entries.front().compl_resid << " -> " << prep.entries.back().compl_resid << ", drop "
       << drop.context["drop"].get<double>() << "x";
    return dec.pass && drop.pass;
  });

  gate.run(7, "entropy gap decrease", [&](std::ostringstream& os) {
    const CheckReport& d1 = named(p_checks, "entropy_gap_decreasing_p");
    const CheckReport& d2 = named(checks2d, "entropy_gap_decreasing_p2d");
    os << "1D pairwise X:";
    for (const auto& pr : prep.pairwise) os << " " << pr.entropy_gap;
    os << "; 2D:";
    for (const auto& pr : rep2d.pairwise) os << " " << pr.entropy_gap;
    return d1.pass && d2.pass;
  });

  gate.run(8, "cross-model agreement", [&](std::ostringstream& os) {
    const double d = cross_model_distance(*p_runs.back(), *e_runs.back());
    const CheckReport r = check_cross_model(prep, d, 5.0);
    os << "distance " << d << " vs 5 x gap " << 5.0 * prep.pairwise.back().u_dist;
    return all_1d && r.pass;
  });

  gate.run(9, "Hoff band", [&](std::ostringstream& os) {
    const CheckReport& r = named(p_checks, "hoff_band_p");
    os << "Y(T):";
    for (const auto& e : prep.entries) os << " " << e.hoff_Y;
    os << "; spread " << r.measured << " (limit 2)";
    return r.pass;
  });

  gate.run(10, "singular barrier", [&](std::ostringstream& os) {
    bool ok = all_1d;
    double worst = 0.0;
    std::size_t steps = 0;
    for (const auto& tr : e_runs) {
      const CheckReport r = check_barrier(*tr);
      ok = ok && r.pass;
      worst = std::max(worst, r.measured);
      steps += tr->records.size();
      for (const auto& s : tr->snapshots)
        for (double x : face_shear(s.u, tr->grid)) ok = ok && std::abs(x) < 1.0;
    }
    os.precision(10);
    os << "max |u_x| = " << worst << " over " << steps << " records";
    return ok;
  });

  gate.run(11, "variational inequalities", [&](std::ostringstream& os) {
    const CheckReport r1 = variational_residual(*p_runs.back(), admissible_bank_1d(pc.seed, 20, *p_runs.back()), 1e-3);
    const CheckReport r2 = variational_residual(*runs2d.back(), admissible_bank_2d(sc.seed, 20, *runs2d.back()), 1e-3);
    os << "-min/E0: 1D " << r1.measured << ", 2D " << r2.measured << " (limit 1e-3)";
    return r1.pass && r2.pass;
  });

  gate.run(12, "L-inf growth", [&](std::ostringstream& os) {
    const CheckReport r = check_linf_growth(*runs2d.back());
    os << "max rho(t)/(max rho0 e^t) - 1 = " << r.measured << " (slack " << r.tol << ")";
    return all_2d && r.pass;
  });

  gate.run(13, "time-mean linearity", [&](std::ostringstream& os) {
    bool ok = all_2d;
    Config shrt = pc;
    shrt.T = 0.004;
    shrt.snapshot_times = equispaced(shrt.T, 32);
    const std::vector<double> s1 = {0.002, 0.001, 0.0005}, s2 = {0.16, 0.08, 0.04};
    Runs1D short_runs;
    run_sweep(shrt.run_1d(), shrt.model_1d(), SweepMode::p, pc.p_values, 1, &short_runs);
    double lo = 1.0, hi = 0.0;
    auto take = [&](const std::vector<double>& s, const std::vector<double>& m) {
      ok = ok && time_mean_linearity(s, m).pass && time_mean_continuity(s, m).pass;
      for (std::size_t k = 1; k < m.size(); ++k) {
        lo = std::min(lo, m[k] / m[k - 1]);
        hi = std::max(hi, m[k] / m[k - 1]);
      }
    };
    for (const auto& tr : short_runs) {
      ok = ok && tr.has_value();
      if (tr) take(s1, time_mean_profile(*tr, pc.gamma, s1));
    }
    for (const auto& tr : runs2d) take(s2, time_mean_profile(*tr, sc.gamma, s2));
    os << "halving ratios in [" << lo << ", " << hi << "] (target 0.5 +- 30%)";
    return ok;
  });

  gate.run(14, "oracle equivalences", [&](std::ostringstream& os) {
    // 1D p = 2 against a dense linear solve
    Grid1D g(256);
    PowerLawParams prm;
    prm.p = 2.0;
    prm.mu = 1.0;
    const double dt = 1e-3;
    Field1D rho = pc.rho0.sample(g), up = pc.u0.sample(g), rhs(g.n);
    for (int i = 0; i < g.n; ++i) rhs[i] = std::sin(3.0 * kTwoPi * g.x(i));
    const double e1 = max_abs_diff(implicit_viscous_solve(up, rho, dt, prm, g, &rhs),
                                   p2_viscous_oracle(up, rho, rhs, dt, prm.mu, g));
    // 2D p = 2 against Fourier diagonalization
    Grid2D g2(32, 32);
    SemiStationaryParams p2;
    p2.p = 2.0;
    p2.delta = 0.0;
    Field2D r2(g2.size());
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) r2[g2.idx(i, j)] = sc.rho0_2d.value(g2.x1(i), g2.x2(j));
    const VectorField2D u2 = solve_momentum(r2, g2, p2);
    const VectorField2D f2 = fourier_oracle(r2, g2, p2.gamma);
    const double e2 = std::max(max_abs_diff(u2.c1, f2.c1), max_abs_diff(u2.c2, f2.c2));
    // manufactured solution
    const double m1 = manufactured_error(128), m2 = manufactured_error(256), m3 = manufactured_error(512);
    const double o1 = std::log2(m1 / m2), o2 = std::log2(m2 / m3);
    os.precision(3);
    os << "1D " << e1 << ", 2D " << e2 << ", MMS orders " << o1 << " " << o2;
    return e1 < 1e-10 && e2 < 1e-8 && std::min(o1, o2) >= 0.9;
  });

  gate.run(15, "determinism", [&](std::ostringstream& os) {
    const Trajectory a = run_1d(pc.run_1d(), pc.model_1d());
    const Trajectory b = run_1d(pc.run_1d(), pc.model_1d());
    std::size_t k8 = 0;
    while (prep.param_values[k8] != pc.p) ++k8;
    Runs1D again;
    run_sweep(pc.run_1d(), base, SweepMode::eps, {pc.eps_values.back()}, 1, &again);
    const Trajectory2D c = run_2d(sc.run_2d(), sc.params_2d());
    const bool same1 = csv_of(a) == csv_of(b) && csv_of(a) == csv_of(*p_runs[k8]);
    const bool same_s = again[0] && csv_of(*again[0]) == csv_of(*e_runs.back());
    const bool same2 = csv_of(c) == csv_of(*runs2d.back());
    os << "power law " << (same1 ? "identical" : "differs") << ", singular " << (same_s ? "identical" : "differs")
       << ", 2D " << (same2 ? "identical" : "differs") << " (" << csv_of(a).size() + csv_of(c).size() << " bytes)";
    return same1 && same_s && same2;
  });

  std::printf("%d of 15 criteria failed, %.1f s\n", gate.failed,
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return gate.failed == 0 ? 0 : 1;
}
