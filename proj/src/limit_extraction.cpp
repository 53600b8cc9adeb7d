#include "thickflow/limit_extraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

namespace {

template <class Snap>
void require_aligned(const std::vector<Snap>& a, const std::vector<Snap>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectories have different snapshot counts");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k].t - b[k].t) > 1e-12 * std::max(1.0, std::abs(a[k].t)))
      throw std::invalid_argument("trajectories have different snapshot times");
}

// Trapezoid rule over snapshot times of per-snapshot values.
template <class Snap>
double trapezoid(const std::vector<Snap>& snaps, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t k = 1; k < snaps.size(); ++k) s += 0.5 * (snaps[k].t - snaps[k - 1].t) * (f[k] + f[k - 1]);
  return s;
}

template <class Snap>
double time_mean(const std::vector<Snap>& snaps, const std::vector<double>& f) {
  const double T = snaps.back().t - snaps.front().t;
  if (T <= 0.0) return f.front();
  return trapezoid(snaps, f) / T;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

double violation_fraction(const std::vector<double>& shear_abs, double eta) {
  if (shear_abs.empty()) return 0.0;
  std::size_t c = 0;
  for (double s : shear_abs)
    if (std::abs(s) > 1.0 + eta) ++c;
  return static_cast<double>(c) / static_cast<double>(shear_abs.size());
}

double constraint_violation_measure(const Field1D& u, const Grid1D& g, double eta) {
  return violation_fraction(face_shear(u, g), eta);
}

double constraint_violation_measure(const VectorField2D& u, const Grid2D& g, double eta) {
  return violation_fraction(p1_strain_norm(u, g), eta);
}

Multiplier lagrange_multiplier(const Field1D& shear, const Field1D& tau, const Grid1D& g) {
  Multiplier m;
  m.pi.resize(tau.size());
  double r = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    m.pi[i] = std::abs(tau[i]);
    r += m.pi[i] * std::max(0.0, 1.0 - std::abs(shear[i]));
  }
  m.residual = r * g.dx;
  return m;
}

Multiplier lagrange_multiplier(const Field1D& u, const Grid1D& g, const ViscousLaw& law) {
  const Field1D s = face_shear(u, g);
  Field1D tau(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) tau[i] = law.flux(s[i]);
  return lagrange_multiplier(s, tau, g);
}

double entropy_gap(const std::vector<double>& r1, const std::vector<double>& r2, double gamma, double cell) {
  double x = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double b2 = std::pow(r2[i], gamma);
    x += std::pow(r1[i], gamma) - b2 - gamma * (b2 / r2[i]) * (r1[i] - r2[i]);
  }
  return x * cell;
}

double u_distance(const Trajectory& a, const Trajectory& b) {
  require_aligned(a.snapshots, b.snapshots);
  std::vector<double> f;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k)
    f.push_back(sq_dist(a.snapshots[k].u, b.snapshots[k].u) * a.grid.dx);
  return std::sqrt(trapezoid(a.snapshots, f));
}

double rho_distance(const Trajectory& a, const Trajectory& b, double gamma) {
  require_aligned(a.snapshots, b.snapshots);
  std::vector<double> f;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    double s = 0.0;
    for (int i = 0; i < a.grid.n; ++i) s += std::pow(std::abs(a.snapshots[k].rho[i] - b.snapshots[k].rho[i]), gamma);
    f.push_back(s * a.grid.dx);
  }
  return std::pow(trapezoid(a.snapshots, f), 1.0 / gamma);
}

double u_distance(const Trajectory2D& a, const Trajectory2D& b) {
  require_aligned(a.snapshots, b.snapshots);
  std::vector<double> f;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k)
    f.push_back((sq_dist(a.snapshots[k].u.c1, b.snapshots[k].u.c1) + sq_dist(a.snapshots[k].u.c2, b.snapshots[k].u.c2)) *
                a.grid.cell_area());
  return std::sqrt(trapezoid(a.snapshots, f));
}

double entropy_gap_mean(const Trajectory& coarse, const Trajectory& ref) {
  require_aligned(coarse.snapshots, ref.snapshots);
  std::vector<double> f;
  for (std::size_t k = 0; k < coarse.snapshots.size(); ++k)
    f.push_back(entropy_gap(coarse.snapshots[k].rho, ref.snapshots[k].rho, coarse.model.gamma, coarse.grid.dx));
  return time_mean(coarse.snapshots, f);
}

double entropy_gap_mean(const Trajectory2D& coarse, const Trajectory2D& ref) {
  require_aligned(coarse.snapshots, ref.snapshots);
  std::vector<double> f;
  for (std::size_t k = 0; k < coarse.snapshots.size(); ++k)
    f.push_back(
        entropy_gap(coarse.snapshots[k].rho, ref.snapshots[k].rho, coarse.params.gamma, coarse.grid.cell_area()));
  return time_mean(coarse.snapshots, f);
}

std::vector<SpaceTimeField1D> admissible_bank_1d(std::uint64_t seed, int count, const Trajectory& traj) {
  const double T = traj.snapshots.back().t;
  auto bank = make_bank_1d(seed, count, T > 0.0 ? T : 1.0);
  for (auto& v : bank) {
    double m = 0.0;
    for (const auto& s : traj.snapshots)
      for (double x : face_shear(v.sample(s.t, traj.grid), traj.grid)) m = std::max(m, std::abs(x));
    v.scale = 0.99 / m;
  }
  return bank;
}

std::vector<SpaceTimeField2D> admissible_bank_2d(std::uint64_t seed, int count, const Trajectory2D& traj) {
  const double T = traj.snapshots.back().t;
  auto bank = make_bank_2d(seed, count, T > 0.0 ? T : 1.0);
  for (auto& v : bank) {
    double m = 0.0;
    for (const auto& s : traj.snapshots)
      for (double x : p1_strain_norm(v.sample(s.t, traj.grid), traj.grid)) m = std::max(m, x);
    v.scale = 0.99 / m;
  }
  return bank;
}

CheckReport variational_residual(const Trajectory& traj, const std::vector<SpaceTimeField1D>& bank, double tol) {
  const Grid1D& g = traj.grid;
  const Model1D& model = traj.model;
  const auto& snaps = traj.snapshots;
  const double e0 = traj.records.front().energy;
  double min_res = std::numeric_limits<double>::infinity();
  double min_limit = std::numeric_limits<double>::infinity();
  nlohmann::json per_field = nlohmann::json::array();
  for (const auto& v : bank) {
    std::vector<double> f(snaps.size()), lim(snaps.size(), 0.0);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      const Field1D su = face_shear(snaps[k].u, g);
      const Field1D vk = v.sample(snaps[k].t, g);
      const Field1D sv = face_shear(vk, g);
      double acc = 0.0;
      for (int i = 0; i < g.n; ++i) acc += model.law.flux(su[i]) * (su[i] - sv[i]);
      f[k] = acc * g.dx;
      if (k > 0) {
        // Direct form with u_dot from snapshot differences, reported for reference.
        const double h = snaps[k].t - snaps[k - 1].t;
        const Field1D ux = ddx_periodic(snaps[k].u, g, DiffScheme::central);
        double l = 0.0;
        for (int i = 0; i < g.n; ++i) {
          const double udot = (snaps[k].u[i] - snaps[k - 1].u[i]) / h + snaps[k].u[i] * ux[i];
          const double pf = 0.5 * model.a *
                            (std::pow(snaps[k].rho[i], model.gamma) + std::pow(snaps[k].rho[g.wrap(i + 1)], model.gamma));
          l += snaps[k].rho[i] * udot * (vk[i] - snaps[k].u[i]) - pf * (sv[i] - su[i]);
        }
        lim[k] = l * g.dx;
      }
    }
    const double r = trapezoid(snaps, f);
    double rl = 0.0;
    for (std::size_t k = 1; k < snaps.size(); ++k) rl += (snaps[k].t - snaps[k - 1].t) * lim[k];
    min_res = std::min(min_res, r);
    min_limit = std::min(min_limit, rl);
    per_field.push_back(r);
  }
  return CheckReport::make("variational_residual_1d", 0.0, -min_res / e0, tol,
                           {{"law", model.law.describe()},
                            {"n", g.n},
                            {"E0", e0},
                            {"min_residual", min_res},
                            {"min_residual_direct_form", min_limit},
                            {"per_field", per_field}});
}

CheckReport variational_residual(const Trajectory2D& traj, const std::vector<SpaceTimeField2D>& bank, double tol) {
  const Grid2D& g = traj.grid;
  const auto& snaps = traj.snapshots;
  const double e0 = traj.records.front().energy;
  double min_res = std::numeric_limits<double>::infinity();
  double min_limit = std::numeric_limits<double>::infinity();
  nlohmann::json per_field = nlohmann::json::array();
  std::vector<double> ju(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) ju[k] = functional_J(snaps[k].u, snaps[k].rho, g, traj.params);
  for (const auto& v : bank) {
    std::vector<double> f(snaps.size()), lim(snaps.size());
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      const VectorField2D vk = v.sample(snaps[k].t, g);
      f[k] = functional_J(vk, snaps[k].rho, g, traj.params) - ju[k];
      // Limit form: int rho^gamma (div u - div v), with the same P1 pressure weights.
      const TensorField2D du = p1_strain(snaps[k].u, g);
      const TensorField2D dv = p1_strain(vk, g);
      const Field2D pt = triangle_pressure(snaps[k].rho, g, traj.params.gamma);
      double l = 0.0;
      for (std::size_t t = 0; t < pt.size(); ++t) l += pt[t] * (du.d11[t] + du.d22[t] - dv.d11[t] - dv.d22[t]);
      lim[k] = 0.5 * g.cell_area() * l;
    }
    const double r = trapezoid(snaps, f);
    min_res = std::min(min_res, r);
    min_limit = std::min(min_limit, trapezoid(snaps, lim));
    per_field.push_back(r);
  }
  return CheckReport::make("variational_residual_2d", 0.0, -min_res / e0, tol,
                           {{"p", traj.params.p},
                            {"n", g.nx},
                            {"E0", e0},
                            {"min_residual", min_res},
                            {"min_residual_limit_form", min_limit},
                            {"per_field", per_field}});
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode;
  j["param_values"] = param_values;
  nlohmann::json e = nlohmann::json::array();
  for (const auto& x : entries) {
    e.push_back({{"param", x.param},
                 {"ok", x.ok},
                 {"error", x.error},
                 {"u_dist", x.u_dist},
                 {"rho_dist", x.rho_dist},
                 {"viol_001", x.viol_001},
                 {"viol_005", x.viol_005},
                 {"viol_01", x.viol_01},
                 {"compl_resid", x.compl_resid},
                 {"entropy_gap", x.entropy_gap},
                 {"hoff_Y", x.hoff_Y},
                 {"max_tau", x.max_tau}});
  }
  j["entries"] = e;
  nlohmann::json pw = nlohmann::json::array();
  for (const auto& p : pairwise)
    pw.push_back({{"from", p.from}, {"to", p.to}, {"u_dist", p.u_dist}, {"rho_dist", p.rho_dist},
                  {"entropy_gap", p.entropy_gap}});
  j["pairwise"] = pw;
  if (cross_model_distance) j["cross_model_distance"] = *cross_model_distance;
  return j;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os << "param,u_dist,rho_dist,viol_001,viol_005,viol_01,compl_resid,entropy_gap\n";
  char buf[512];
  for (const auto& x : entries) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x.param, x.u_dist, x.rho_dist,
                  x.viol_001, x.viol_005, x.viol_01, x.compl_resid, x.entropy_gap);
    os << buf;
  }
  return os.str();
}

SweepReport assemble_sweep(SweepMode mode, const std::vector<double>& values,
                           const std::vector<std::optional<Trajectory>>& runs, const std::vector<std::string>& errors) {
  SweepReport rep;
  rep.mode = mode == SweepMode::p ? "p" : "eps";
  rep.param_values = values;
  const std::optional<Trajectory>& finest = runs.back();
  for (std::size_t k = 0; k < values.size(); ++k) {
    SweepEntry e;
    e.param = values[k];
    e.ok = runs[k].has_value();
    if (!e.ok) {
      e.error = k < errors.size() ? errors[k] : "run failed";
      rep.entries.push_back(e);
      continue;
    }
    const Trajectory& tr = *runs[k];
    std::vector<double> v1, v5, v10, cr;
    for (const auto& s : tr.snapshots) {
      const Field1D sh = face_shear(s.u, tr.grid);
      v1.push_back(violation_fraction(sh, 0.01));
      v5.push_back(violation_fraction(sh, 0.05));
      v10.push_back(violation_fraction(sh, 0.1));
      cr.push_back(lagrange_multiplier(s.u, tr.grid, tr.model.law).residual);
    }
    e.viol_001 = time_mean(tr.snapshots, v1);
    e.viol_005 = time_mean(tr.snapshots, v5);
    e.viol_01 = time_mean(tr.snapshots, v10);
    e.compl_resid = time_mean(tr.snapshots, cr);
    e.hoff_Y = hoff_functional(tr);
    e.max_tau = max_viscous_flux(tr);
    if (finest) {
      e.u_dist = u_distance(tr, *finest);
      e.rho_dist = rho_distance(tr, *finest, tr.model.gamma);
      e.entropy_gap = entropy_gap_mean(tr, *finest);
    }
    rep.entries.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!runs[k] || !runs[k + 1]) continue;
    SweepPair p;
    p.from = values[k];
    p.to = values[k + 1];
    p.u_dist = u_distance(*runs[k], *runs[k + 1]);
    p.rho_dist = rho_distance(*runs[k], *runs[k + 1], runs[k]->model.gamma);
    p.entropy_gap = entropy_gap_mean(*runs[k], *runs[k + 1]);
    rep.pairwise.push_back(p);
  }
  return rep;
}

SweepReport run_sweep(const Run1DConfig& config, const Model1D& base, SweepMode mode, std::vector<double> values,
                      int jobs, std::vector<std::optional<Trajectory>>* runs_out) {
  if (values.empty()) throw std::invalid_argument("empty sweep");
  if (mode == SweepMode::p)
    std::sort(values.begin(), values.end());
  else
    std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<std::optional<Trajectory>> runs(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      Model1D m = base;
      if (mode == SweepMode::p) {
        m.law.kind = ViscousLaw::Kind::power_law;
        m.law.p = values[k];
      } else {
        m.law.kind = ViscousLaw::Kind::singular;
        m.law.eps = values[k];
      }
      try {
        runs[k] = run_1d(config, m);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  SweepReport rep = assemble_sweep(mode, values, runs, errors);
  if (runs_out) *runs_out = std::move(runs);
  return rep;
}

SweepReport assemble_sweep(const std::vector<double>& values, const std::vector<std::optional<Trajectory2D>>& runs,
                           const std::vector<std::string>& errors) {
  SweepReport rep;
  rep.mode = "p2d";
  rep.param_values = values;
  const std::optional<Trajectory2D>& finest = runs.back();
  for (std::size_t k = 0; k < values.size(); ++k) {
    SweepEntry e;
    e.param = values[k];
    e.ok = runs[k].has_value();
    if (!e.ok) {
      e.error = k < errors.size() ? errors[k] : "run failed";
      rep.entries.push_back(e);
      continue;
    }
    const Trajectory2D& tr = *runs[k];
    std::vector<double> v1, v5, v10;
    for (const auto& s : tr.snapshots) {
      v1.push_back(constraint_violation_measure(s.u, tr.grid, 0.01));
      v5.push_back(constraint_violation_measure(s.u, tr.grid, 0.05));
      v10.push_back(constraint_violation_measure(s.u, tr.grid, 0.1));
    }
    e.viol_001 = time_mean(tr.snapshots, v1);
    e.viol_005 = time_mean(tr.snapshots, v5);
    e.viol_01 = time_mean(tr.snapshots, v10);
    for (const auto& r : tr.records) e.max_tau = std::max(e.max_tau, r.sigma_max);
    if (finest) {
      e.u_dist = u_distance(tr, *finest);
      e.entropy_gap = entropy_gap_mean(tr, *finest);
    }
    rep.entries.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!runs[k] || !runs[k + 1]) continue;
    SweepPair p;
    p.from = values[k];
    p.to = values[k + 1];
    p.u_dist = u_distance(*runs[k], *runs[k + 1]);
    p.entropy_gap = entropy_gap_mean(*runs[k], *runs[k + 1]);
    rep.pairwise.push_back(p);
  }
  return rep;
}

SweepReport run_sweep_2d(const Run2DConfig& config, const SemiStationaryParams& base, std::vector<double> values,
                         int jobs, std::vector<std::optional<Trajectory2D>>* runs_out) {
  if (values.empty()) throw std::invalid_argument("empty sweep");
  std::sort(values.begin(), values.end());
  std::vector<std::optional<Trajectory2D>> runs(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      SemiStationaryParams prm = base;
      prm.p = values[k];
      try {
        runs[k] = run_2d(config, prm);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  SweepReport rep = assemble_sweep(values, runs, errors);
  if (runs_out) *runs_out = std::move(runs);
  return rep;
}

namespace {

// Excess form of "x decreases along the sweep": measured is the largest
// x[k+1] - x[k]; strict requires every step to be negative.
CheckReport decreasing(const std::string& name, const std::vector<double>& params, const std::vector<double>& x,
                       bool strict) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < x.size(); ++k) worst = std::max(worst, x[k] - x[k - 1]);
  if (x.size() < 2) worst = 0.0;
  CheckReport r = CheckReport::make(name, 0.0, worst, 0.0, {{"params", params}, {"values", x}, {"strict", strict}});
  if (strict && x.size() >= 2) r.pass = worst < 0.0;
  return r;
}

}  // namespace

std::vector<CheckReport> check_sweep(const SweepReport& rep, double viol_limit) {
  std::vector<CheckReport> out;
  std::vector<double> params, v5, cr, hy;
  bool all_ok = true;
  for (const auto& e : rep.entries) {
    all_ok = all_ok && e.ok;
    if (!e.ok) continue;
    params.push_back(e.param);
    v5.push_back(e.viol_005);
    cr.push_back(e.compl_resid);
    hy.push_back(e.hoff_Y);
  }
  const std::string tag = "_" + rep.mode;
  if (!all_ok || params.empty()) {
    out.push_back(CheckReport::make("sweep_runs" + tag, 0.0, 1.0, 0.0, {{"reason", "a sweep member failed"}}));
    return out;
  }
  if (rep.mode == "p") out.push_back(decreasing("violation_decreasing" + tag, params, v5, true));
  if (rep.mode != "eps") {
    out.push_back(CheckReport::make("violation_finest" + tag, viol_limit, v5.back(), 0.0,
                                    {{"param", params.back()}, {"eta", 0.05}}));
  }
  if (rep.mode == "p") {
    out.push_back(decreasing("complementarity_decreasing" + tag, params, cr, false));
    const double ratio = cr.back() > 0.0 ? cr.front() / cr.back() : std::numeric_limits<double>::infinity();
    // drop factor >= 5 written as 5 / ratio <= 1
    out.push_back(CheckReport::make("complementarity_drop" + tag, 1.0, 5.0 / ratio, 0.0,
                                    {{"first", cr.front()}, {"last", cr.back()}, {"drop", ratio}}));
    out.push_back(check_band("hoff_band" + tag, params, hy));
  }
  std::vector<double> pp, gaps;
  for (const auto& p : rep.pairwise) {
    pp.push_back(p.to);
    gaps.push_back(p.entropy_gap);
  }
  out.push_back(decreasing("entropy_gap_decreasing" + tag, pp, gaps, false));
  return out;
}

CheckReport check_cross_model(const SweepReport& p_sweep, double distance, double C) {
  if (p_sweep.pairwise.empty()) return CheckReport::skip("cross_model", "p-sweep has no consecutive pair");
  const double gap = p_sweep.pairwise.back().u_dist;
  return CheckReport::make("cross_model", 1.0, distance / (C * gap), 0.0,
                           {{"distance", distance}, {"finest_gap", gap}, {"C", C}});
}

double cross_model_distance(const Trajectory& p_finest, const Trajectory& eps_finest) {
  return u_distance(p_finest, eps_finest);
}

}  // namespace thickflow
