#include "thickflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thickflow {

namespace {

double max_dt(const Trajectory& traj) {
  double d = 0.0;
  for (const auto& r : traj.records) d = std::max(d, r.dt);
  return d;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

nlohmann::json base_context(const Trajectory& traj) {
  return {{"law", traj.model.law.describe()}, {"a", traj.model.a}, {"gamma", traj.model.gamma},
          {"n", traj.grid.n},                 {"dt_max", max_dt(traj)},
          {"T", traj.records.empty() ? 0.0 : traj.records.back().t}};
}

}  // namespace

Field1D cauchy_stress(const State1D& state, const Model1D& model) {
  return face_stress(state.rho, state.u, state.grid, model);
}

Field1D cauchy_stress(const State1D& state, const PowerLawParams& params) {
  return cauchy_stress(state, params.model());
}

double density_lower_bound(double t, double c1, double c2, double a, double mu, double gamma) {
  return c1 * std::exp(-2.0 * t) / std::max(1.0, std::pow(a / mu, 1.0 / gamma) * c2);
}

double density_upper_bound(double t, double c2, double e0, double mu, double gamma, double p) {
  return c2 * std::exp(e0 / mu + ((2.0 + gamma) * e0 / mu + 1.0 + 1.0 / p) * t);
}

std::vector<CheckReport> check_stress_max_principle(const Trajectory& traj, double C) {
  nlohmann::json ctx = base_context(traj);
  const double tol = C * (traj.grid.dx + max_dt(traj));
  ctx["C"] = C;
  if (!traj.max_principle_hypothesis) {
    return {CheckReport::skip("stress_max_principle_initial", "p < 1 + gamma", ctx),
            CheckReport::skip("stress_max_principle_mu", "p < 1 + gamma", ctx)};
  }
  const double sigma0 = traj.records.front().sigma_max;
  double smax = -std::numeric_limits<double>::infinity(), t_at = 0.0;
  for (const auto& r : traj.records) {
    if (r.sigma_max > smax) {
      smax = r.sigma_max;
      t_at = r.t;
    }
  }
  ctx["max_sigma"] = smax;
  ctx["t_of_max"] = t_at;
  ctx["max_sigma0"] = sigma0;
  std::vector<CheckReport> out;
  ctx["paper_bound"] = sigma0;
  out.push_back(CheckReport::make("stress_max_principle_initial", 0.0, smax - sigma0, tol, ctx));
  const double mu = traj.model.law.mu;
  ctx["paper_bound"] = mu;
  if (traj.records.front().dudx_maxabs <= 1.0)
    out.push_back(CheckReport::make("stress_max_principle_mu", 0.0, smax - mu, tol, ctx));
  else
    out.push_back(CheckReport::skip("stress_max_principle_mu", "initial shear exceeds 1", ctx));
  return out;
}

std::vector<CheckReport> check_density_bounds(const Trajectory& traj, double c1, double c2, double C) {
  const Model1D& m = traj.model;
  const double mu = m.law.barrier() ? m.law.eps : m.law.mu;
  const double p = m.law.barrier() ? std::numeric_limits<double>::infinity() : m.law.p;
  const double e0 = traj.records.front().energy;
  const double tol = C * (traj.grid.dx + max_dt(traj));
  double low_excess = -std::numeric_limits<double>::infinity();
  double up_excess = -std::numeric_limits<double>::infinity();
  double t_low = 0.0, t_up = 0.0, lb_at = 0.0, ub_at = 0.0;
  for (const auto& r : traj.records) {
    const double lb = density_lower_bound(r.t, c1, c2, m.a, mu, m.gamma);
    const double ub = density_upper_bound(r.t, c2, e0, mu, m.gamma, p);
    if (lb - r.rho_min > low_excess) {
      low_excess = lb - r.rho_min;
      t_low = r.t;
      lb_at = lb;
    }
    if (r.rho_max - ub > up_excess) {
      up_excess = r.rho_max - ub;
      t_up = r.t;
      ub_at = ub;
    }
  }
  nlohmann::json ctx = base_context(traj);
  ctx["c1"] = c1;
  ctx["c2"] = c2;
  ctx["E0"] = e0;
  ctx["C"] = C;
  nlohmann::json lo = ctx, up = ctx;
  lo["t_worst"] = t_low;
  lo["paper_bound"] = lb_at;
  up["t_worst"] = t_up;
  up["paper_bound"] = ub_at;
  return {CheckReport::make("density_lower_bound", 0.0, low_excess, tol, lo),
          CheckReport::make("density_upper_bound", 0.0, up_excess, tol, up)};
}

std::vector<CheckReport> check_density_bounds(const Trajectory& traj, double C) {
  const auto& r0 = traj.snapshots.front().rho;
  return check_density_bounds(traj, *std::min_element(r0.begin(), r0.end()),
                              *std::max_element(r0.begin(), r0.end()), C);
}

CheckReport check_energy_inequality(const Trajectory& traj, double tol) {
  const double e0 = traj.records.front().energy;
  double worst = -std::numeric_limits<double>::infinity(), t_at = 0.0;
  for (const auto& r : traj.records) {
    const double x = (r.energy + r.dissipation_cum - e0) / e0;
    if (x > worst) {
      worst = x;
      t_at = r.t;
    }
  }
  nlohmann::json ctx = base_context(traj);
  ctx["E0"] = e0;
  ctx["t_worst"] = t_at;
  ctx["records"] = traj.records.size();
  return CheckReport::make("energy_inequality", 0.0, worst, tol, ctx);
}

CheckReport check_energy_inequality(const Trajectory2D& traj, double tol) {
  const double e0 = traj.records.front().energy;
  double worst = -std::numeric_limits<double>::infinity(), t_at = 0.0, dtmax = 0.0;
  for (const auto& r : traj.records) {
    const double x = (r.energy + r.dissipation_cum - e0) / e0;
    dtmax = std::max(dtmax, r.dt);
    if (x > worst) {
      worst = x;
      t_at = r.t;
    }
  }
  return CheckReport::make("energy_inequality_2d", 0.0, worst, tol,
                           {{"p", traj.params.p}, {"n", traj.grid.nx}, {"E0", e0}, {"t_worst", t_at},
                            {"dt_max", dtmax}});
}

std::vector<CheckReport> check_conservation(const Trajectory& traj) {
  const auto& r0 = traj.records.front();
  double dm = 0.0, dp = 0.0;
  for (const auto& r : traj.records) {
    dm = std::max(dm, std::abs(r.mass - r0.mass) / r0.mass);
    dp = std::max(dp, std::abs(r.momentum - r0.momentum) / std::max(std::abs(r0.momentum), r0.mass));
  }
  const nlohmann::json ctx = base_context(traj);
  return {CheckReport::make("mass_conservation", 0.0, dm, 1e-12, ctx),
          CheckReport::make("momentum_conservation", 0.0, dp, 1e-8, ctx)};
}

std::vector<CheckReport> check_conservation(const Trajectory2D& traj) {
  const auto& r0 = traj.records.front();
  double dm = 0.0;
  for (const auto& r : traj.records) dm = std::max(dm, std::abs(r.mass - r0.mass) / r0.mass);
  return {CheckReport::make("mass_conservation_2d", 0.0, dm, 1e-12, {{"p", traj.params.p}, {"n", traj.grid.nx}})};
}

CheckReport check_barrier(const Trajectory& traj) {
  double m = 0.0, t_at = 0.0;
  for (const auto& r : traj.records)
    if (r.dudx_maxabs > m) {
      m = r.dudx_maxabs;
      t_at = r.t;
    }
  nlohmann::json ctx = base_context(traj);
  ctx["t_worst"] = t_at;
  ctx["records"] = traj.records.size();
  CheckReport r = CheckReport::make("barrier", 1.0, m, 0.0, ctx);
  r.pass = m < 1.0;
  return r;
}

double hoff_functional(const Trajectory& traj) {
  const auto& r = traj.records.back();
  return r.hoff_cum + 0.5 * r.lpnorm_term;
}

CheckReport check_band(const std::string& name, const std::vector<double>& params, const std::vector<double>& values) {
  const double med = median(values);
  const double hi = *std::max_element(values.begin(), values.end());
  const double lo = *std::min_element(values.begin(), values.end());
  const double spread = std::max(hi / med, lo > 0.0 ? med / lo : std::numeric_limits<double>::infinity());
  return CheckReport::make(name, 2.0, spread, 0.0,
                           {{"params", params}, {"values", values}, {"median", med},
                            {"note", "factor-2 band around the sweep median, a uniformity proxy"}});
}

double max_viscous_flux(const Trajectory& traj) {
  double m = 0.0;
  for (const auto& s : traj.snapshots)
    for (double x : face_shear(s.u, traj.grid)) m = std::max(m, std::abs(traj.model.law.flux(x)));
  return m;
}

double stress_balance_residual(const Trajectory& traj) {
  const Grid1D& g = traj.grid;
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const auto& a = traj.snapshots[k - 1];
    const auto& b = traj.snapshots[k];
    const double h = b.t - a.t;
    const Field1D sigma = face_stress(b.rho, b.u, g, traj.model);
    const Field1D ux = ddx_periodic(b.u, g, DiffScheme::central);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double dsig = (sigma[i] - sigma[g.wrap(i - 1)]) / g.dx;
      const double udot = (b.u[i] - a.u[i]) / h + b.u[i] * ux[i];
      num += (dsig - b.rho[i] * udot) * (dsig - b.rho[i] * udot);
      den += dsig * dsig;
    }
    if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
  }
  return worst;
}

}  // namespace thickflow
