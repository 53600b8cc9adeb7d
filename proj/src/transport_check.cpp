#include "thickflow/transport_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thickflow {

namespace {

// Per-snapshot spatial integrals paired with the envelope (A) and with its derivative (B):
// residual = int env'(t) A(t) + env(t) B(t) dt, A and B linear between snapshots.
double gauss_time_integral(const std::vector<double>& times, const std::vector<double>& a_dt,
                           const std::vector<double>& b_env, const TestFunction& phi) {
  static const double xg[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  static const double wg[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double r = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double h = times[k] - times[k - 1];
    for (int q = 0; q < 3; ++q) {
      const double th = xg[q];
      const double t = times[k - 1] + th * h;
      const double a = (1.0 - th) * a_dt[k - 1] + th * a_dt[k];
      const double b = (1.0 - th) * b_env[k - 1] + th * b_env[k];
      r += wg[q] * h * (phi.envelope_dt(t) * a + phi.envelope(t) * b);
    }
  }
  return std::abs(r);
}

double weak_1d(const Trajectory& traj, double gamma, bool renormalized, const TestFunction& phi) {
  const Grid1D& g = traj.grid;
  std::vector<double> times, a, b;
  Field1D ps(g.n), pd(g.n);
  for (int i = 0; i < g.n; ++i) {
    ps[i] = phi.spatial_1d.value(g.x(i));
    pd[i] = phi.spatial_1d.derivative(g.x(i));
  }
  for (const auto& s : traj.snapshots) {
    const Field1D ux = ddx_periodic(s.u, g, DiffScheme::central);
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double beta = renormalized ? std::pow(s.rho[i], gamma) : s.rho[i];
      sa += beta * ps[i];
      sb += beta * s.u[i] * pd[i];
      if (renormalized) sb -= (gamma - 1.0) * beta * ux[i] * ps[i];
    }
    times.push_back(s.t);
    a.push_back(sa * g.dx);
    b.push_back(sb * g.dx);
  }
  return gauss_time_integral(times, a, b, phi);
}

double weak_2d(const Trajectory2D& traj, double gamma, bool renormalized, const TestFunction& phi) {
  const Grid2D& g = traj.grid;
  std::vector<double> times, a, b;
  Field2D ps(g.size()), p1(g.size()), p2(g.size());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      ps[k] = phi.spatial_2d.value(g.x1(i), g.x2(j));
      phi.spatial_2d.gradient(g.x1(i), g.x2(j), p1[k], p2[k]);
    }
  for (const auto& s : traj.snapshots) {
    const Field2D div = divergence_2d(s.u, g);
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double beta = renormalized ? std::pow(s.rho[k], gamma) : s.rho[k];
      sa += beta * ps[k];
      sb += beta * (s.u.c1[k] * p1[k] + s.u.c2[k] * p2[k]);
      if (renormalized) sb -= (gamma - 1.0) * beta * div[k] * ps[k];
    }
    times.push_back(s.t);
    a.push_back(sa * g.cell_area());
    b.push_back(sb * g.cell_area());
  }
  return gauss_time_integral(times, a, b, phi);
}

}  // namespace

double continuity_residual(const Trajectory& traj, const TestFunction& phi) { return weak_1d(traj, 1.0, false, phi); }

double continuity_residual(const Trajectory2D& traj, const TestFunction& phi) {
  return weak_2d(traj, 1.0, false, phi);
}

double renormalized_residual(const Trajectory& traj, double gamma, const TestFunction& phi) {
  return weak_1d(traj, gamma, true, phi);
}

double renormalized_residual(const Trajectory2D& traj, double gamma, const TestFunction& phi) {
  return weak_2d(traj, gamma, true, phi);
}

std::vector<double> time_mean_profile(const std::vector<double>& times, const std::vector<double>& I,
                                      const std::vector<double>& s_list) {
  std::vector<double> out;
  for (double s : s_list) {
    if (!(s > 0.0) || s > times.back() * (1.0 + 1e-12))
      throw std::invalid_argument("s outside (0, T] in time-mean continuity");
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size() && times[k - 1] < s; ++k) {
      const double t1 = std::min(times[k], s);
      const double h = times[k] - times[k - 1];
      const double th = (t1 - times[k - 1]) / h;
      const double f0 = I[k - 1] - I[0];
      const double f1 = (1.0 - th) * f0 + th * (I[k] - I[0]);
      acc += 0.5 * (t1 - times[k - 1]) * (f0 + f1);
    }
    out.push_back(std::abs(acc / s));
  }
  return out;
}

std::vector<double> time_mean_profile(const Trajectory& traj, double gamma, const std::vector<double>& s_list) {
  std::vector<double> t, I;
  for (const auto& s : traj.snapshots) {
    double a = 0.0;
    for (double r : s.rho) a += std::pow(r, gamma);
    t.push_back(s.t);
    I.push_back(a * traj.grid.dx);
  }
  return time_mean_profile(t, I, s_list);
}

std::vector<double> time_mean_profile(const Trajectory2D& traj, double gamma, const std::vector<double>& s_list) {
  std::vector<double> t, I;
  for (const auto& s : traj.snapshots) {
    double a = 0.0;
    for (double r : s.rho) a += std::pow(r, gamma);
    t.push_back(s.t);
    I.push_back(a * traj.grid.cell_area());
  }
  return time_mean_profile(t, I, s_list);
}

CheckReport time_mean_continuity(const std::vector<double>& s_list, const std::vector<double>& m) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < m.size(); ++k) {
    const double ratio = m[k - 1] > 0.0 ? m[k] / m[k - 1] : (m[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    worst = std::max(worst, ratio - 1.0);
  }
  if (m.size() < 2) worst = 0.0;
  if (m.back() > m.front()) worst = std::numeric_limits<double>::infinity();
  return CheckReport::make("time_mean_continuity", 0.0, worst, 0.2, {{"s", s_list}, {"m", m}});
}

CheckReport time_mean_continuity(const Trajectory& traj, double gamma, const std::vector<double>& s_list) {
  return time_mean_continuity(s_list, time_mean_profile(traj, gamma, s_list));
}

CheckReport time_mean_continuity(const Trajectory2D& traj, double gamma, const std::vector<double>& s_list) {
  return time_mean_continuity(s_list, time_mean_profile(traj, gamma, s_list));
}

CheckReport time_mean_linearity(const std::vector<double>& s_list, const std::vector<double>& m, double rel) {
  double worst = 0.0;
  nlohmann::json ratios = nlohmann::json::array();
  for (std::size_t k = 1; k < m.size(); ++k) {
    const double r = m[k - 1] > 0.0 ? m[k] / m[k - 1] : std::numeric_limits<double>::infinity();
    ratios.push_back(r);
    worst = std::max(worst, std::abs(r - 0.5) / 0.5);
  }
  return CheckReport::make("time_mean_linearity", 0.0, worst, rel, {{"s", s_list}, {"m", m}, {"ratios", ratios}});
}

}  // namespace thickflow
