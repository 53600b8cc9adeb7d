#include "thickflow/semistationary_2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "thickflow/errors.hpp"

namespace thickflow {

namespace {

// Node indices of each triangle: gradient pairs (plus, minus) per axis and the three vertices.
struct Mesh {
  std::size_t nodes = 0;
  std::vector<std::size_t> xp, xm, yp, ym, v0, v1, v2;
  double hx = 0.0, hy = 0.0, area = 0.0;
};

Mesh build_mesh(const Grid2D& g) {
  Mesh m;
  m.nodes = g.size();
  m.hx = g.hx;
  m.hy = g.hy;
  m.area = 0.5 * g.hx * g.hy;
  const std::size_t nt = 2 * g.size();
  for (auto* a : {&m.xp, &m.xm, &m.yp, &m.ym, &m.v0, &m.v1, &m.v2}) a->resize(nt);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      const std::size_t lo = 2 * k, up = 2 * k + 1;
      const std::size_t a0 = k, ax = g.idx(i + 1, j), ay = g.idx(i, j + 1), b0 = g.idx(i + 1, j + 1);
      m.xp[lo] = ax, m.xm[lo] = a0, m.yp[lo] = ay, m.ym[lo] = a0;
      m.v0[lo] = a0, m.v1[lo] = ax, m.v2[lo] = ay;
      m.xp[up] = b0, m.xm[up] = ay, m.yp[up] = b0, m.ym[up] = ax;
      m.v0[up] = b0, m.v1[up] = ay, m.v2[up] = ax;
    }
  }
  return m;
}

struct Strain {
  std::vector<double> d11, d22, d12;
};

Strain strain(const Mesh& m, const double* v1, const double* v2) {
  const std::size_t nt = m.xp.size();
  Strain s{std::vector<double>(nt), std::vector<double>(nt), std::vector<double>(nt)};
  for (std::size_t t = 0; t < nt; ++t) {
    s.d11[t] = (v1[m.xp[t]] - v1[m.xm[t]]) / m.hx;
    s.d22[t] = (v2[m.yp[t]] - v2[m.ym[t]]) / m.hy;
    s.d12[t] = 0.5 * ((v1[m.yp[t]] - v1[m.ym[t]]) / m.hy + (v2[m.xp[t]] - v2[m.xm[t]]) / m.hx);
  }
  return s;
}

std::vector<double> tri_pressure(const Mesh& m, const Field2D& rho, double gamma) {
  std::vector<double> pn(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) pn[k] = std::pow(rho[k], gamma);
  std::vector<double> pt(m.xp.size());
  for (std::size_t t = 0; t < pt.size(); ++t) pt[t] = (pn[m.v0[t]] + pn[m.v1[t]] + pn[m.v2[t]]) / 3.0;
  return pt;
}

double eval_J(const Mesh& m, const Eigen::VectorXd& v, const std::vector<double>& pt, double p, double delta) {
  const Strain s = strain(m, v.data(), v.data() + m.nodes);
  double j = 0.0;
  for (std::size_t t = 0; t < pt.size(); ++t) {
    const double q = s.d11[t] * s.d11[t] + s.d22[t] * s.d22[t] + 2.0 * s.d12[t] * s.d12[t] + delta * delta;
    j += std::pow(q, 0.5 * p) / p - pt[t] * (s.d11[t] + s.d22[t]);
  }
  return m.area * j;
}

Eigen::VectorXd eval_grad(const Mesh& m, const Eigen::VectorXd& v, const std::vector<double>& pt, double p,
                          double delta) {
  const std::size_t n = m.nodes;
  const Strain s = strain(m, v.data(), v.data() + n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
  for (std::size_t t = 0; t < pt.size(); ++t) {
    const double q = s.d11[t] * s.d11[t] + s.d22[t] * s.d22[t] + 2.0 * s.d12[t] * s.d12[t] + delta * delta;
    const double w = q > 0.0 ? std::pow(q, 0.5 * (p - 2.0)) : (p == 2.0 ? 1.0 : 0.0);
    const double s11 = m.area * (w * s.d11[t] - pt[t]) / m.hx;
    const double s22 = m.area * (w * s.d22[t] - pt[t]) / m.hy;
    const double s12 = m.area * w * s.d12[t];  // d/d(d12) of W is 2 w d12, times 1/2 from the stencil
    g[m.xp[t]] += s11;
    g[m.xm[t]] -= s11;
    g[n + m.yp[t]] += s22;
    g[n + m.ym[t]] -= s22;
    g[m.yp[t]] += s12 / m.hy;
    g[m.ym[t]] -= s12 / m.hy;
    g[n + m.xp[t]] += s12 / m.hx;
    g[n + m.xm[t]] -= s12 / m.hx;
  }
  return g;
}

Eigen::SparseMatrix<double> eval_hessian(const Mesh& m, const Eigen::VectorXd& v, double p, double delta) {
  const std::size_t n = m.nodes;
  const Strain s = strain(m, v.data(), v.data() + n);
  const std::size_t nt = s.d11.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(64 * nt + 2);
  struct Entry {
    std::size_t dof;
    double c;
  };
  for (std::size_t t = 0; t < nt; ++t) {
    const double q = s.d11[t] * s.d11[t] + s.d22[t] * s.d22[t] + 2.0 * s.d12[t] * s.d12[t] + delta * delta;
    const double w = q > 0.0 ? std::pow(q, 0.5 * (p - 2.0)) : (p == 2.0 ? 1.0 : 0.0);
    const double w2 = q > 0.0 ? (p - 2.0) * w / q : 0.0;
    const double md[3] = {s.d11[t], s.d22[t], 2.0 * s.d12[t]};
    const double mdiag[3] = {w, w, 2.0 * w};
    const Entry e11[2] = {{m.xp[t], 1.0 / m.hx}, {m.xm[t], -1.0 / m.hx}};
    const Entry e22[2] = {{n + m.yp[t], 1.0 / m.hy}, {n + m.ym[t], -1.0 / m.hy}};
    const Entry e12[4] = {{m.yp[t], 0.5 / m.hy},
                          {m.ym[t], -0.5 / m.hy},
                          {n + m.xp[t], 0.5 / m.hx},
                          {n + m.xm[t], -0.5 / m.hx}};
    const Entry* rows[3] = {e11, e22, e12};
    const int len[3] = {2, 2, 4};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double c = m.area * (w2 * md[a] * md[b] + (a == b ? mdiag[a] : 0.0));
        if (c == 0.0) continue;
        for (int ia = 0; ia < len[a]; ++ia) {
          const std::size_t ra = rows[a][ia].dof;
          if (ra == 0 || ra == n) continue;
          for (int ib = 0; ib < len[b]; ++ib) {
            const std::size_t cb = rows[b][ib].dof;
            if (cb == 0 || cb == n) continue;
            trip.emplace_back(ra, cb, c * rows[a][ia].c * rows[b][ib].c);
          }
        }
      }
    }
  }
  // Pinned gauge nodes; explicit zeros keep every diagonal entry in the pattern.
  trip.emplace_back(0, 0, 1.0);
  trip.emplace_back(n, n, 1.0);
  for (std::size_t k = 0; k < 2 * n; ++k) trip.emplace_back(k, k, 0.0);
  Eigen::SparseMatrix<double> h(2 * n, 2 * n);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
};

NewtonOutcome newton(const Mesh& m, Eigen::VectorXd& v, const std::vector<double>& pt, double p, double delta,
                     double tol, int max_iter, std::vector<double>& trace) {
  const std::size_t n = m.nodes;
  const double cell = 2.0 * m.area;
  NewtonOutcome out;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd g = eval_grad(m, v, pt, p, delta);
    out.grad_norm = g.cwiseAbs().maxCoeff() / cell;
    out.iterations = it;
    trace.push_back(out.grad_norm);
    if (out.grad_norm < tol) {
      out.converged = true;
      return out;
    }
    g[0] = 0.0;
    g[n] = 0.0;
    Eigen::SparseMatrix<double> h = eval_hessian(m, v, p, delta);
    double dmax = 0.0;
    for (Eigen::Index k = 0; k < h.rows(); ++k) dmax = std::max(dmax, h.coeff(k, k));
    // Small diagonal shift keeps the factorization defined where the strain vanishes at large p.
    double shift = 1e-12 * dmax;
    Eigen::VectorXd dv;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::SparseMatrix<double> hs = h;
      for (Eigen::Index k = 0; k < hs.rows(); ++k) hs.coeffRef(k, k) += shift;
      ldlt.compute(hs);
      if (ldlt.info() == Eigen::Success) {
        dv = -ldlt.solve(g);
        if (ldlt.info() == Eigen::Success && dv.allFinite()) break;
      }
      dv.resize(0);
      shift = std::max(shift * 100.0, 1e-300);
    }
    if (dv.size() == 0) return out;

    const double j0 = eval_J(m, v, pt, p, delta);
    const double slope = g.dot(dv);
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd w;
    while (alpha > 1e-12) {
      w = v + alpha * dv;
      const double j = eval_J(m, w, pt, p, delta);
      if (std::isfinite(j) && j <= j0 + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      // At the roundoff floor of J, accept a step that does not raise it measurably and lowers the gradient.
      if (std::isfinite(j) && std::abs(j - j0) <= 1e-14 * std::max(std::abs(j0), 1e-300)) {
        const double gn = eval_grad(m, w, pt, p, delta).cwiseAbs().maxCoeff() / cell;
        if (gn < out.grad_norm) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return out;
    v = w;
  }
  Eigen::VectorXd g = eval_grad(m, v, pt, p, delta);
  out.grad_norm = g.cwiseAbs().maxCoeff() / cell;
  out.iterations = max_iter;
  out.converged = out.grad_norm < tol;
  return out;
}

Eigen::VectorXd pack(const VectorField2D& u) {
  const std::size_t n = u.c1.size();
  Eigen::VectorXd v(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = u.c1[k];
    v[n + k] = u.c2[k];
  }
  return v;
}

VectorField2D unpack(const Eigen::VectorXd& v) {
  const std::size_t n = v.size() / 2;
  VectorField2D u{Field2D(n), Field2D(n)};
  for (std::size_t k = 0; k < n; ++k) {
    u.c1[k] = v[k];
    u.c2[k] = v[n + k];
  }
  return u;
}

}  // namespace

void SemiStationaryParams::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("p must be at least 2");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (p > 2.0 && delta == 0.0) throw std::invalid_argument("delta must be positive when p > 2");
  if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("cfl must lie in (0,0.5]");
  if (!(newton_tol > 0.0) || newton_max_iter < 1) throw std::invalid_argument("invalid Newton settings");
}

TensorField2D p1_strain(const VectorField2D& u, const Grid2D& g) {
  const Mesh m = build_mesh(g);
  Strain s = strain(m, u.c1.data(), u.c2.data());
  return {std::move(s.d11), std::move(s.d22), std::move(s.d12)};
}

Field2D p1_strain_norm(const VectorField2D& u, const Grid2D& g) {
  const TensorField2D d = p1_strain(u, g);
  Field2D out(d.d11.size());
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = std::sqrt(d.d11[t] * d.d11[t] + d.d22[t] * d.d22[t] + 2.0 * d.d12[t] * d.d12[t]);
  return out;
}

Field2D triangle_pressure(const Field2D& rho, const Grid2D& g, double gamma) {
  return tri_pressure(build_mesh(g), rho, gamma);
}

double functional_J(const VectorField2D& v, const Field2D& rho, const Grid2D& g, const SemiStationaryParams& params) {
  const Mesh m = build_mesh(g);
  return eval_J(m, pack(v), tri_pressure(m, rho, params.gamma), params.p, params.delta);
}

VectorField2D gradient_J(const VectorField2D& v, const Field2D& rho, const Grid2D& g,
                         const SemiStationaryParams& params) {
  const Mesh m = build_mesh(g);
  return unpack(eval_grad(m, pack(v), tri_pressure(m, rho, params.gamma), params.p, params.delta));
}

VectorField2D solve_momentum(const Field2D& rho, const Grid2D& g, const SemiStationaryParams& params,
                             const VectorField2D* warm_start, MomentumSolveInfo* info) {
  params.validate();
  const Mesh m = build_mesh(g);
  const std::vector<double> pt = tri_pressure(m, rho, params.gamma);
  const std::size_t n = g.size();
  std::vector<double> trace;
  Eigen::VectorXd v;
  NewtonOutcome res;
  bool done = false;
  int total = 0;
  if (warm_start) {
    v = pack(*warm_start);
    res = newton(m, v, pt, params.p, params.delta, params.newton_tol, params.newton_max_iter, trace);
    total += res.iterations;
    done = res.converged;
  }
  if (!done) {
    v = Eigen::VectorXd::Zero(2 * n);
    static const double ladder[] = {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};
    for (double pc : ladder) {
      if (pc >= params.p) break;
      res = newton(m, v, pt, pc, params.delta, 100.0 * params.newton_tol, params.newton_max_iter, trace);
      total += res.iterations;
    }
    res = newton(m, v, pt, params.p, params.delta, params.newton_tol, params.newton_max_iter, trace);
    total += res.iterations;
    if (!res.converged) {
      std::ostringstream os;
      os << "momentum minimization did not converge at p=" << params.p << ", gradient norm " << res.grad_norm;
      throw SolverDivergence(os.str(), trace);
    }
  }
  double mean1 = 0.0, mean2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mean1 += v[k];
    mean2 += v[n + k];
  }
  mean1 /= static_cast<double>(n);
  mean2 /= static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] -= mean1;
    v[n + k] -= mean2;
  }
  if (info) {
    info->iterations = total;
    info->grad_norm = res.grad_norm;
    info->J = eval_J(m, v, pt, params.p, params.delta);
    info->trace = std::move(trace);
  }
  return unpack(v);
}

Field2D transport_density(const Field2D& rho, const VectorField2D& u, double dt, const Grid2D& g) {
  Field2D fx(g.size()), fy(g.size());
  auto upwind = [](double vel, double left, double right) {
    if (vel > 0.0) return vel * left;
    if (vel < 0.0) return vel * right;
    return 0.0;
  };
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      const double ufx = (2.0 * u.c1[k] + 2.0 * u.c1[g.idx(i + 1, j)] + u.c1[g.idx(i + 1, j - 1)] +
                          u.c1[g.idx(i, j + 1)]) /
                         6.0;
      const double ufy = (2.0 * u.c2[k] + 2.0 * u.c2[g.idx(i, j + 1)] + u.c2[g.idx(i - 1, j + 1)] +
                          u.c2[g.idx(i + 1, j)]) /
                         6.0;
      fx[k] = upwind(ufx, rho[k], rho[g.idx(i + 1, j)]);
      fy[k] = upwind(ufy, rho[k], rho[g.idx(i, j + 1)]);
    }
  }
  Field2D out(g.size());
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      out[k] = rho[k] - dt / g.hx * (fx[k] - fx[g.idx(i - 1, j)]) - dt / g.hy * (fy[k] - fy[g.idx(i, j - 1)]);
    }
  }
  return out;
}

namespace {

Record2D make_record_2d(const Field2D& rho, const VectorField2D& u, const Grid2D& g, const SemiStationaryParams& prm,
                        double t, double dt, double diss) {
  Record2D r;
  r.t = t;
  r.dt = dt;
  r.mass = integrate(rho, g);
  double m1 = 0.0, m2 = 0.0, e = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    m1 += rho[k] * u.c1[k];
    m2 += rho[k] * u.c2[k];
    e += std::pow(rho[k], prm.gamma);
  }
  r.momentum = std::hypot(m1, m2) * g.cell_area();
  r.energy = e * g.cell_area() / (prm.gamma - 1.0);
  r.dissipation_cum = diss;
  r.rho_min = *std::min_element(rho.begin(), rho.end());
  r.rho_max = *std::max_element(rho.begin(), rho.end());
  const Field2D dn = p1_strain_norm(u, g);
  std::size_t viol = 0;
  for (double d : dn) {
    r.Du_maxnorm = std::max(r.Du_maxnorm, d);
    const double q = d * d + prm.delta * prm.delta;
    r.sigma_max = std::max(r.sigma_max, std::pow(q, 0.5 * (prm.p - 2.0)) * d);
    if (d > 1.05) ++viol;
  }
  r.violation_005 = static_cast<double>(viol) / static_cast<double>(dn.size());
  return r;
}

}  // namespace

Trajectory2D run_2d(const Run2DConfig& config, const SemiStationaryParams& params) {
  params.validate();
  Trajectory2D tr;
  tr.grid = Grid2D(config.n, config.n);
  tr.params = params;
  const Grid2D& g = tr.grid;
  Field2D rho = config.rho0.sample(g);
  if (*std::min_element(rho.begin(), rho.end()) < 0.0) throw VacuumError("initial density negative");

  std::vector<double> times;
  for (double t : config.snapshot_times)
    if (t > 0.0 && t <= config.T && (times.empty() || t > times.back())) times.push_back(t);
  if (config.T > 0.0 && (times.empty() || times.back() < config.T)) times.push_back(config.T);

  const double h = std::min(g.hx, g.hy);
  const double t_eps = 1e-13 * std::max(config.T, 1.0);
  double t = 0.0, diss = 0.0, dt_prev = 0.0;
  std::size_t k = 0;
  VectorField2D u;
  bool have_u = false;
  while (true) {
    MomentumSolveInfo info;
    u = solve_momentum(rho, g, params, have_u ? &u : nullptr, &info);
    have_u = true;
    if (tr.records.empty()) {
      Record2D r0 = make_record_2d(rho, u, g, params, 0.0, 0.0, 0.0);
      r0.newton_iterations = info.iterations;
      tr.records.push_back(r0);
      tr.snapshots.push_back({0.0, rho, u});
    }
    if (k < times.size() && times[k] - t <= t_eps) {
      t = times[k];
      tr.snapshots.push_back({t, rho, u});
      ++k;
    }
    if (k >= times.size()) break;

    double umax = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) umax = std::max({umax, std::abs(u.c1[q]), std::abs(u.c2[q])});
    double dt = params.cfl * h / std::max(umax, 1.0);
    bool hit = false;
    if (dt >= times[k] - t) {
      dt = times[k] - t;
      hit = true;
    }
    const Field2D dn = p1_strain_norm(u, g);
    double dsum = 0.0;
    for (double d : dn) dsum += std::pow(d * d + params.delta * params.delta, 0.5 * (params.p - 2.0)) * d * d;
    diss += dt * 0.5 * g.cell_area() * dsum;
    rho = transport_density(rho, u, dt, g);
    t = hit ? times[k] : t + dt;
    dt_prev = dt;
    // Strain columns describe the velocity that drove this step.
    Record2D r = make_record_2d(rho, u, g, params, t, dt_prev, diss);
    r.newton_iterations = info.iterations;
    tr.records.push_back(r);
  }
  return tr;
}

CheckReport check_linf_growth(const Trajectory2D& traj) {
  const auto& s0 = traj.snapshots.front();
  const double m0 = *std::max_element(s0.rho.begin(), s0.rho.end());
  double worst = 0.0, dtmax = 0.0;
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& s : traj.snapshots) {
    const double r = *std::max_element(s.rho.begin(), s.rho.end()) / (m0 * std::exp(s.t));
    worst = std::max(worst, r);
    ratios.push_back({s.t, r});
  }
  for (const auto& r : traj.records) dtmax = std::max(dtmax, r.dt);
  const double tol = 5.0 * (traj.grid.hx + dtmax);
  return CheckReport::make("linf_growth", 0.0, worst - 1.0, tol,
                           {{"p", traj.params.p},
                            {"n", traj.grid.nx},
                            {"dt_max", dtmax},
                            {"max_ratio", worst},
                            {"ratios", ratios}});
}

}  // namespace thickflow
