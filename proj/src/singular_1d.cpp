#include "thickflow/singular_1d.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "thickflow/errors.hpp"

namespace thickflow {

void SingularParams::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0,1]");
  if (!(newton_tol > 0.0) || newton_max_iter < 1) throw std::invalid_argument("invalid Newton settings");
}

Model1D SingularParams::model() const {
  Model1D m;
  m.law.kind = ViscousLaw::Kind::singular;
  m.law.eps = eps;
  m.law.theta = theta;
  m.a = a;
  m.gamma = gamma;
  m.cfl = cfl;
  m.newton_tol = newton_tol;
  m.newton_max_iter = newton_max_iter;
  return m;
}

double singular_flux(double s, double eps) {
  ViscousLaw law;
  law.kind = ViscousLaw::Kind::singular;
  law.eps = eps;
  return law.flux(s);
}

State1D step_singular(const State1D& state, const SingularParams& params, double dt) {
  params.validate();
  for (double s : face_shear(state.u, state.grid))
    if (!(std::abs(s) < 1.0)) throw ConstraintViolation("entry state violates |u_x| < 1");
  const Model1D model = params.model();
  const double limit = stable_dt(state, model);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt << " exceeds the CFL limit " << limit;
    throw std::invalid_argument(os.str());
  }
  State1D out = advance_1d(state, model, dt).state;
  for (double s : face_shear(out.u, out.grid))
    if (!(std::abs(s) < 1.0)) throw ConstraintViolation("barrier solve returned |u_x| >= 1");
  return out;
}

Trajectory run_singular(const Run1DConfig& config, const SingularParams& params) {
  params.validate();
  Trajectory tr = run_1d(config, params.model());
  for (const auto& r : tr.records)
    if (!(r.dudx_maxabs < 1.0)) throw ConstraintViolation("accepted step with |u_x| >= 1");
  return tr;
}

}  // namespace thickflow
