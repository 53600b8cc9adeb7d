#include "thickflow/model_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thickflow/errors.hpp"

namespace thickflow {

namespace {

const double kLogFluxCap = std::log(1e300);

double max_abs(const Field1D& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

struct ResidualEval {
  Field1D residual;
  Field1D tau;
  Field1D shear;
};

// F_i = rho_i v_i - m_i - dt/dx (tau_{i+1/2} - tau_{i-1/2}).
ResidualEval residual(const Field1D& v, const Field1D& rho, const Field1D& m, double dt, const Grid1D& g,
                      const ViscousLaw& law) {
  const int n = g.n;
  ResidualEval r{Field1D(n), Field1D(n), face_shear(v, g)};
  for (int i = 0; i < n; ++i) r.tau[i] = law.flux(r.shear[i]);
  const double c = dt / g.dx;
  for (int i = 0; i < n; ++i) {
    const int im = g.wrap(i - 1);
    r.residual[i] = rho[i] * v[i] - m[i] - c * (r.tau[i] - r.tau[im]);
  }
  return r;
}

double norm2(const Field1D& f) {
  double s = 0.0;
  for (double v : f) s += v * v;
  return std::sqrt(s);
}

// Step functional whose gradient is the residual; convex for both laws.
double step_functional(const Field1D& v, const Field1D& rho, const Field1D& m, double dt, const Grid1D& g,
                       const ViscousLaw& law) {
  const int n = g.n;
  double phi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ut = m[i] / rho[i];
    const double s = (v[g.wrap(i + 1)] - v[i]) / g.dx;
    phi += 0.5 * rho[i] * (v[i] - ut) * (v[i] - ut) + dt * law.potential(s);
  }
  return phi;
}

template <class E>
[[noreturn]] void rethrow_at(const E& e, double t) {
  std::ostringstream os;
  os << "t=" << t << ": " << e.what();
  throw E(os.str());
}

}  // namespace

double ViscousLaw::flux(double s) const {
  if (kind == Kind::singular) {
    if (!(std::abs(s) < 1.0)) {
      std::ostringstream os;
      os << "shear " << s << " outside the barrier domain |s| < 1";
      throw ConstraintViolation(os.str());
    }
    return eps * s / std::sqrt(1.0 - s * s);
  }
  if (s == 0.0) return 0.0;
  const double q = s * s + delta * delta;
  const double e = 0.5 * (p - 2.0) * std::log(q);
  if (e + std::log(std::abs(s)) + std::log(mu) > kLogFluxCap) {
    std::ostringstream os;
    os << "viscous flux overflow at s=" << s << ", p=" << p;
    throw FluxOverflow(os.str());
  }
  return mu * s * std::exp(e);
}

double ViscousLaw::dflux(double s) const {
  if (kind == Kind::singular) {
    const double w = 1.0 - s * s;
    if (!(w > 0.0)) throw ConstraintViolation("shear outside the barrier domain");
    return eps / (w * std::sqrt(w));
  }
  const double q = s * s + delta * delta;
  if (q == 0.0) return p == 2.0 ? mu : 0.0;
  const double e = 0.5 * (p - 2.0) * std::log(q);
  const double factor = 1.0 + (p - 2.0) * s * s / q;
  if (e + std::log(factor) + std::log(mu) > kLogFluxCap) throw FluxOverflow("viscous flux derivative overflow");
  return mu * std::exp(e) * factor;
}

double ViscousLaw::potential(double s) const {
  if (kind == Kind::singular) {
    if (!(std::abs(s) < 1.0)) return std::numeric_limits<double>::infinity();
    return -eps * std::sqrt(1.0 - s * s);
  }
  const double q = s * s + delta * delta;
  if (q == 0.0) return 0.0;
  const double e = 0.5 * p * std::log(q);
  if (e > kLogFluxCap) return std::numeric_limits<double>::infinity();
  return mu / p * std::exp(e);
}

std::string ViscousLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::singular)
    os << "singular eps=" << eps << " theta=" << theta;
  else
    os << "power_law p=" << p << " mu=" << mu << " delta=" << delta;
  return os.str();
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                             const std::vector<double>& upper, const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  // Sherman-Morrison on the corner entries: A = T + w z^T.
  const double alpha = upper[n - 1];  // A(n-1, 0)
  const double beta = lower[0];       // A(0, n-1)
  const double gam = -diag[0];
  std::vector<double> bb(diag);
  bb[0] = diag[0] - gam;
  bb[n - 1] = diag[n - 1] - alpha * beta / gam;

  auto thomas = [&](std::vector<double> r) {
    std::vector<double> c(n), x(n);
    double den = bb[0];
    c[0] = upper[0] / den;
    r[0] /= den;
    for (std::size_t i = 1; i < n; ++i) {
      den = bb[i] - lower[i] * c[i - 1];
      c[i] = upper[i] / den;
      r[i] = (r[i] - lower[i] * r[i - 1]) / den;
    }
    x[n - 1] = r[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = r[i] - c[i] * x[i + 1];
    return x;
  };

  std::vector<double> x = thomas(rhs);
  std::vector<double> w(n, 0.0);
  w[0] = gam;
  w[n - 1] = alpha;
  const std::vector<double> z = thomas(w);
  const double fact = (x[0] + beta * x[n - 1] / gam) / (1.0 + z[0] + beta * z[n - 1] / gam);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

Field1D solve_viscous_momentum(const Field1D& v_start, const Field1D& rho, const Field1D& m, double dt,
                               const Grid1D& g, const Model1D& model, NewtonTrace* trace) {
  const ViscousLaw& law = model.law;
  const int n = g.n;
  const double c = dt / g.dx;
  const double c2 = dt / (g.dx * g.dx);

  Field1D v = v_start;
  if (law.barrier()) {
    // Prefer the transported velocity m/rho as a start when it is admissible.
    Field1D ut(n);
    for (int i = 0; i < n; ++i) ut[i] = m[i] / rho[i];
    bool ok = true;
    for (double s : face_shear(ut, g)) ok = ok && std::abs(s) < 1.0;
    if (ok) v = ut;
  }

  std::vector<double> damping;
  double last = std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  ResidualEval r = residual(v, rho, m, dt, g, law);
  for (; it < model.newton_max_iter; ++it) {
    double scale = 1e-300;
    for (int i = 0; i < n; ++i) scale = std::max({scale, std::abs(rho[i] * v[i]), std::abs(m[i])});
    scale = std::max(scale, c * max_abs(r.tau));
    const double res_inf = max_abs(r.residual);
    const double res_2 = norm2(r.residual);
    last = res_inf / scale;
    if (trace) trace->residual_norms.push_back(res_2);
    if (last <= model.newton_tol) {
      converged = true;
      break;
    }

    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = law.dflux(r.shear[i]) * c2;
    for (int i = 0; i < n; ++i) {
      const int im = g.wrap(i - 1);
      diag[i] = rho[i] + d[i] + d[im];
      upper[i] = -d[i];
      lower[i] = -d[im];
      rhs[i] = -r.residual[i];
    }
    const std::vector<double> dv = solve_cyclic_tridiagonal(lower, diag, upper, rhs);

    double alpha = 1.0;
    if (law.barrier()) {
      // Fraction to the boundary, face by face: 1-|s_new| >= (1-theta)(1-|s|).
      for (int i = 0; i < n; ++i) {
        const double ds = (dv[g.wrap(i + 1)] - dv[i]) / g.dx;
        const double s = r.shear[i];
        const double lim = 1.0 - (1.0 - law.theta) * (1.0 - std::abs(s));
        if (ds > 0.0)
          alpha = std::min(alpha, (lim - s) / ds);
        else if (ds < 0.0)
          alpha = std::min(alpha, (-lim - s) / ds);
      }
      alpha = std::max(alpha, 0.0);
    }

    Field1D w(n);
    ResidualEval rn;
    bool accepted = false;
    if (law.barrier()) {
      const double phi0 = step_functional(v, rho, m, dt, g, law);
      double slope = 0.0;
      for (int i = 0; i < n; ++i) slope += r.residual[i] * dv[i];
      while (alpha > 1e-14) {
        for (int i = 0; i < n; ++i) w[i] = v[i] + alpha * dv[i];
        const double phi = step_functional(w, rho, m, dt, g, law);
        if (phi <= phi0 + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
    } else {
      while (alpha > 1e-14) {
        for (int i = 0; i < n; ++i) w[i] = v[i] + alpha * dv[i];
        try {
          ResidualEval trial = residual(w, rho, m, dt, g, law);
          if (norm2(trial.residual) <= (1.0 - 1e-4 * alpha) * res_2) {
            rn = std::move(trial);
            accepted = true;
            break;
          }
        } catch (const FluxOverflow&) {
        }
        alpha *= 0.5;
      }
    }
    damping.push_back(alpha);
    if (trace) trace->damping.push_back(alpha);

    double step = 0.0;
    for (int i = 0; i < n; ++i) step = std::max(step, std::abs(w[i] - v[i]));
    const bool stagnated = step <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(max_abs(v), 1e-300);
    if (!accepted || stagnated) {
      // At the roundoff floor no descent step exists; accept when the residual is already tiny.
      if (last <= 1e4 * model.newton_tol) {
        converged = true;
        break;
      }
      if (!accepted) break;
    }
    v = w;
    r = law.barrier() ? residual(v, rho, m, dt, g, law) : std::move(rn);
  }
  if (trace) trace->iterations = it;
  if (!converged) {
    std::ostringstream os;
    os << "viscous Newton solve failed after " << it << " iterations (" << law.describe()
       << "), scaled residual " << last;
    throw NewtonDivergence(os.str(), last, damping);
  }

  r = residual(v, rho, m, dt, g, law);
  double sf = 0.0, sr = 0.0;
  for (int i = 0; i < n; ++i) {
    sf += r.residual[i];
    sr += rho[i];
  }
  const double shift = sf / sr;
  for (double& x : v) x -= shift;
  return v;
}

double energy_1d(const State1D& s, const Model1D& model) {
  double e = 0.0;
  for (int i = 0; i < s.grid.n; ++i)
    e += 0.5 * s.rho[i] * s.u[i] * s.u[i] + model.a * std::pow(s.rho[i], model.gamma) / (model.gamma - 1.0);
  return e * s.grid.dx;
}

Field1D face_stress(const Field1D& rho, const Field1D& u, const Grid1D& g, const Model1D& model) {
  const Field1D s = face_shear(u, g);
  Field1D sigma(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double pf =
        0.5 * model.a * (std::pow(rho[i], model.gamma) + std::pow(rho[g.wrap(i + 1)], model.gamma));
    sigma[i] = model.law.flux(s[i]) - pf;
  }
  return sigma;
}

DiagnosticsRecord make_record(const State1D& s, const Model1D& model, double dt, double dissipation_cum,
                              double hoff_cum) {
  const Grid1D& g = s.grid;
  DiagnosticsRecord r;
  r.t = s.t;
  r.dt = dt;
  r.mass = integrate(s.rho, g);
  double mom = 0.0;
  for (int i = 0; i < g.n; ++i) mom += s.rho[i] * s.u[i];
  r.momentum = mom * g.dx;
  r.energy = energy_1d(s, model);
  r.dissipation_cum = dissipation_cum;
  r.hoff_cum = hoff_cum;
  r.rho_min = *std::min_element(s.rho.begin(), s.rho.end());
  r.rho_max = *std::max_element(s.rho.begin(), s.rho.end());
  const Field1D shear = face_shear(s.u, g);
  r.dudx_maxabs = max_abs(shear);
  const Field1D sigma = face_stress(s.rho, s.u, g, model);
  r.sigma_max = *std::max_element(sigma.begin(), sigma.end());
  double lp = 0.0, bar = 0.0;
  for (double x : shear) {
    if (model.law.barrier())
      bar += 1.0 / std::sqrt(1.0 - x * x);
    else
      lp += std::pow(std::abs(x), model.law.p);
  }
  if (model.law.barrier())
    r.barrier_term = model.law.eps * bar * g.dx;
  else
    r.lpnorm_term = model.law.mu / model.law.p * lp * g.dx;
  return r;
}

double stable_dt(const State1D& s, const Model1D& model) {
  const double rmax = *std::max_element(s.rho.begin(), s.rho.end());
  const double cs = std::sqrt(model.a * model.gamma * std::pow(rmax, model.gamma - 1.0));
  return model.cfl * s.grid.dx / (max_abs(s.u) + cs);
}

StepResult advance_1d(const State1D& s, const Model1D& model, double dt, const Forcing1D* forcing) {
  const Grid1D& g = s.grid;
  const int n = g.n;
  const double c = dt / g.dx;

  // Explicit pressure gradient on the velocity.
  Field1D pf(n);
  for (int i = 0; i < n; ++i)
    pf[i] = 0.5 * model.a * (std::pow(s.rho[i], model.gamma) + std::pow(s.rho[g.wrap(i + 1)], model.gamma));
  Field1D up(n);
  for (int i = 0; i < n; ++i) up[i] = s.u[i] - c * (pf[i] - pf[g.wrap(i - 1)]) / s.rho[i];

  // Conservative upwind transport of mass and momentum with the updated velocity.
  Field1D fm(n), fq(n);
  for (int i = 0; i < n; ++i) {
    const int ip = g.wrap(i + 1);
    const double uf = 0.5 * (up[i] + up[ip]);
    double r_up, u_up;
    if (uf > 0.0) {
      r_up = s.rho[i];
      u_up = up[i];
    } else if (uf < 0.0) {
      r_up = s.rho[ip];
      u_up = up[ip];
    } else {
      r_up = 0.5 * (s.rho[i] + s.rho[ip]);
      u_up = 0.5 * (up[i] + up[ip]);
    }
    fm[i] = uf * r_up;
    fq[i] = fm[i] * u_up;
  }
  Field1D rho(n), m(n);
  for (int i = 0; i < n; ++i) {
    const int im = g.wrap(i - 1);
    rho[i] = s.rho[i] - c * (fm[i] - fm[im]);
    m[i] = s.rho[i] * up[i] - c * (fq[i] - fq[im]);
  }
  if (forcing && *forcing) {
    Field1D sm(n, 0.0), sq(n, 0.0);
    (*forcing)(s.t, g, sm, sq);
    for (int i = 0; i < n; ++i) {
      rho[i] += dt * sm[i];
      m[i] += dt * sq[i];
    }
  }
  const double rmin = *std::min_element(rho.begin(), rho.end());
  if (!(rmin > 0.0)) {
    std::ostringstream os;
    os << "density reached " << rmin << " after transport";
    throw VacuumError(os.str());
  }

  NewtonTrace trace;
  Field1D v = solve_viscous_momentum(s.u, rho, m, dt, g, model, &trace);

  StepResult out;
  out.state.grid = g;
  out.state.t = s.t + dt;
  out.newton_iterations = trace.iterations;
  const Field1D shear = face_shear(v, g);
  double diss = 0.0;
  for (double x : shear) diss += model.law.flux(x) * x;
  out.dissipation = dt * diss * g.dx;

  const Field1D ux = ddx_periodic(s.u, g, DiffScheme::central);
  double hoff = 0.0;
  for (int i = 0; i < n; ++i) {
    const double udot = (v[i] - s.u[i]) / dt + s.u[i] * ux[i];
    hoff += rho[i] * udot * udot;
  }
  out.hoff = dt * hoff * g.dx;
  out.state.rho = std::move(rho);
  out.state.u = std::move(v);
  return out;
}

Trajectory run_1d(const Run1DConfig& cfg, const Model1D& model) {
  Trajectory tr;
  tr.grid = Grid1D(cfg.n);
  tr.model = model;
  tr.max_principle_hypothesis = !model.law.barrier() && model.law.p >= 1.0 + model.gamma;

  State1D s;
  s.grid = tr.grid;
  s.rho = cfg.rho0.sample(tr.grid);
  s.u = cfg.u0.sample(tr.grid);
  if (!(*std::min_element(s.rho.begin(), s.rho.end()) > 0.0)) throw VacuumError("initial density not positive");
  if (model.law.barrier()) {
    for (double x : face_shear(s.u, tr.grid))
      if (!(std::abs(x) < 1.0)) throw ConstraintViolation("initial shear violates |u_x| < 1");
  }

  std::vector<double> times;
  for (double t : cfg.snapshot_times)
    if (t > 0.0 && t <= cfg.T && (times.empty() || t > times.back())) times.push_back(t);
  if (cfg.T > 0.0 && (times.empty() || times.back() < cfg.T)) times.push_back(cfg.T);

  double diss = 0.0, hoff = 0.0;
  tr.snapshots.push_back({0.0, s.rho, s.u});
  tr.records.push_back(make_record(s, model, 0.0, 0.0, 0.0));

  const double t_eps = 1e-13 * std::max(cfg.T, 1.0);
  std::size_t k = 0;
  while (k < times.size()) {
    const double remaining = times[k] - s.t;
    if (remaining <= t_eps) {
      s.t = times[k];
      tr.snapshots.push_back({s.t, s.rho, s.u});
      ++k;
      continue;
    }
    double dt = stable_dt(s, model);
    bool hit = false;
    if (dt >= remaining) {
      dt = remaining;
      hit = true;
    }
    StepResult res;
    for (int h = 0;; ++h) {
      try {
        res = advance_1d(s, model, dt, cfg.forcing ? &cfg.forcing : nullptr);
        break;
      } catch (const NewtonDivergence& e) {
        if (h >= cfg.max_halvings) {
          std::ostringstream os;
          os << "t=" << s.t << ": " << e.what();
          throw NewtonDivergence(os.str(), e.last_residual, e.damping);
        }
        dt *= 0.5;
        hit = false;
        ++tr.dt_halvings;
      } catch (const VacuumError& e) {
        rethrow_at(e, s.t);
      } catch (const ConstraintViolation& e) {
        rethrow_at(e, s.t);
      } catch (const FluxOverflow& e) {
        rethrow_at(e, s.t);
      }
    }
    s = std::move(res.state);
    if (hit) s.t = times[k];
    diss += res.dissipation;
    hoff += res.hoff;
    DiagnosticsRecord rec = make_record(s, model, dt, diss, hoff);
    rec.newton_iterations = res.newton_iterations;
    tr.records.push_back(rec);
    if (hit) {
      tr.snapshots.push_back({s.t, s.rho, s.u});
      ++k;
    }
  }
  return tr;
}

}  // namespace thickflow
