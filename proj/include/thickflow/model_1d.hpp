#pragma once

#include <functional>
#include <string>
#include <vector>

#include "thickflow/fourier.hpp"
#include "thickflow/grid.hpp"

namespace thickflow {

/// Viscous flux tau(s) of a 1D model, s the shear d_x u.
struct ViscousLaw {
  enum class Kind { power_law, singular };
  Kind kind = Kind::power_law;
  double p = 2.0;
  double mu = 1.0;
  double delta = 1e-8;
  double eps = 1.0;
  double theta = 0.95;

  /// Power law: mu (s^2+delta^2)^{(p-2)/2} s. Singular: eps s / sqrt(1-s^2).
  double flux(double s) const;
  double dflux(double s) const;
  /// Convex potential whose derivative is flux.
  double potential(double s) const;
  bool barrier() const { return kind == Kind::singular; }
  /// Strict admissibility of a shear value (always true for the power law).
  bool admissible(double s) const { return !barrier() || (s > -1.0 && s < 1.0); }
  std::string describe() const;
};

struct Model1D {
  ViscousLaw law;
  double a = 1.0;
  double gamma = 2.0;
  double cfl = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 200;
};

struct State1D {
  Grid1D grid{8};
  Field1D rho;
  Field1D u;
  double t = 0.0;
};

/// Per-step diagnostics. dudx_maxabs and sigma_max are taken over faces.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
  double dissipation_cum = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double dudx_maxabs = 0.0;
  double sigma_max = 0.0;
  double hoff_cum = 0.0;
  /// (mu/p) int |u_x|^p; zero for the singular law.
  double lpnorm_term = 0.0;
  /// eps int 1/sqrt(1-|u_x|^2); zero for the power law.
  double barrier_term = 0.0;
  int newton_iterations = 0;
};

struct Snapshot1D {
  double t = 0.0;
  Field1D rho;
  Field1D u;
};

struct Trajectory {
  Grid1D grid{8};
  Model1D model;
  std::vector<Snapshot1D> snapshots;
  std::vector<DiagnosticsRecord> records;
  /// p >= 1 + gamma, the hypothesis of the stress maximum principle.
  bool max_principle_hypothesis = false;
  int dt_halvings = 0;
};

/// Source terms added to the mass and momentum equations, evaluated at time t.
using Forcing1D = std::function<void(double t, const Grid1D& g, Field1D& mass_src, Field1D& mom_src)>;

struct Run1DConfig {
  int n = 256;
  double T = 0.25;
  /// Output times in (0,T]; the final time is appended when missing.
  std::vector<double> snapshot_times;
  FourierSeries1D rho0;
  FourierSeries1D u0;
  bool paper_initial_conditions = false;
  int max_halvings = 10;
  Forcing1D forcing;
};

struct NewtonTrace {
  std::vector<double> residual_norms;
  std::vector<double> damping;
  int iterations = 0;
};

/// Solves rho v - m - dt d_x tau(d_x v) = 0 on the periodic grid by damped
/// Newton, then shifts v by a constant so that sum(rho v) = sum(m) exactly.
Field1D solve_viscous_momentum(const Field1D& v_start, const Field1D& rho, const Field1D& m, double dt,
                               const Grid1D& g, const Model1D& model, NewtonTrace* trace = nullptr);

struct StepResult {
  State1D state;
  double dissipation = 0.0;
  double hoff = 0.0;
  int newton_iterations = 0;
};

/// One split step: pressure velocity update, upwind transport, implicit viscosity.
StepResult advance_1d(const State1D& s, const Model1D& model, double dt, const Forcing1D* forcing = nullptr);

double stable_dt(const State1D& s, const Model1D& model);

Trajectory run_1d(const Run1DConfig& cfg, const Model1D& model);

double energy_1d(const State1D& s, const Model1D& model);
/// Face Cauchy stress tau(s_f) - a (rho_i^g + rho_{i+1}^g)/2, face i+1/2 at index i.
Field1D face_stress(const Field1D& rho, const Field1D& u, const Grid1D& g, const Model1D& model);
DiagnosticsRecord make_record(const State1D& s, const Model1D& model, double dt, double dissipation_cum,
                              double hoff_cum);

/// Periodic tridiagonal solve: lower[i] multiplies x[i-1], upper[i] multiplies x[i+1].
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                             const std::vector<double>& upper, const std::vector<double>& rhs);

}  // namespace thickflow
