#include "thickflow/powerlaw_1d.hpp"

#include <sstream>
#include <stdexcept>

namespace thickflow {

void PowerLawParams::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("p must be at least 2");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (p > 2.0 && delta == 0.0) throw std::invalid_argument("delta must be positive when p > 2");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0,1]");
  if (!(newton_tol > 0.0) || newton_max_iter < 1) throw std::invalid_argument("invalid Newton settings");
}

Model1D PowerLawParams::model() const {
  Model1D m;
  m.law.kind = ViscousLaw::Kind::power_law;
  m.law.p = p;
  m.law.mu = mu;
  m.law.delta = delta;
  m.a = a;
  m.gamma = gamma;
  m.cfl = cfl;
  m.newton_tol = newton_tol;
  m.newton_max_iter = newton_max_iter;
  return m;
}

double viscous_flux(double s, const PowerLawParams& params) { return params.model().law.flux(s); }

State1D step(const State1D& state, const PowerLawParams& params, double dt) {
  params.validate();
  const Model1D model = params.model();
  const double limit = stable_dt(state, model);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt << " exceeds the CFL limit " << limit;
    throw std::invalid_argument(os.str());
  }
  return advance_1d(state, model, dt).state;
}

Field1D implicit_viscous_solve(const Field1D& u_prev, const Field1D& rho, double dt, const PowerLawParams& params,
                               const Grid1D& g, const Field1D* rhs, NewtonTrace* trace) {
  params.validate();
  Field1D m(g.n);
  for (int i = 0; i < g.n; ++i) m[i] = rho[i] * u_prev[i] + (rhs ? dt * (*rhs)[i] : 0.0);
  return solve_viscous_momentum(u_prev, rho, m, dt, g, params.model(), trace);
}

Trajectory run(const Run1DConfig& config, const PowerLawParams& params) {
  params.validate();
  if (config.paper_initial_conditions) {
    const int dense = 8 * config.n;
    if (config.u0.max_abs_derivative(dense) > 1.0)
      throw std::invalid_argument("initial data violates |d_x u0| <= 1");
    if (!(config.rho0.min_value(dense) > 0.0)) throw std::invalid_argument("initial density not positive");
  }
  return run_1d(config, params.model());
}

}  // namespace thickflow
