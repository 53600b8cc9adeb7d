#include "thickflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thickflow/errors.hpp"

namespace thickflow {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

std::string snap_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.csv", k);
  return buf;
}

}  // namespace

std::string snapshot_csv(const Snapshot1D& s, const Grid1D& g, const Model1D& model) {
  const Field1D shear = face_shear(s.u, g);
  const Field1D sigma = face_stress(s.rho, s.u, g, model);
  std::string out = "t,x,rho,u,dudx,sigma\n";
  for (int i = 0; i < g.n; ++i) row(out, {s.t, g.x(i), s.rho[i], s.u[i], shear[i], sigma[i]});
  return out;
}

std::string diag_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = "t,dt,mass,momentum,energy,dissipation_cum,rho_min,rho_max,dudx_maxabs,sigma_max,hoff_cum\n";
  for (const auto& r : records)
    row(out, {r.t, r.dt, r.mass, r.momentum, r.energy, r.dissipation_cum, r.rho_min, r.rho_max, r.dudx_maxabs,
              r.sigma_max, r.hoff_cum});
  return out;
}

std::string snapshot_csv(const Snapshot2D& s, const Grid2D& g) {
  const TensorField2D d = sym_grad_2d(s.u, g);
  const Field2D div = divergence_2d(s.u, g);
  std::string out = "t,x1,x2,rho,u1,u2,Du_norm,divu\n";
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.idx(i, j);
      const double nrm = std::sqrt(d.d11[k] * d.d11[k] + d.d22[k] * d.d22[k] + 2.0 * d.d12[k] * d.d12[k]);
      row(out, {s.t, g.x1(i), g.x2(j), s.rho[k], s.u.c1[k], s.u.c2[k], nrm, div[k]});
    }
  return out;
}

std::string diag_csv(const std::vector<Record2D>& records) {
  std::string out = "t,dt,mass,momentum,energy,dissipation_cum,rho_min,rho_max,Du_maxnorm,sigma_max,hoff_cum\n";
  for (const auto& r : records)
    row(out, {r.t, r.dt, r.mass, r.momentum, r.energy, r.dissipation_cum, r.rho_min, r.rho_max, r.Du_maxnorm,
              r.sigma_max, 0.0});
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return nlohmann::json::parse(ss.str());
}

std::vector<std::string> write_trajectory(const std::string& dir, const Trajectory& traj) {
  std::vector<std::string> files;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    files.push_back(snap_name(k));
    write_text((fs::path(dir) / files.back()).string(), snapshot_csv(traj.snapshots[k], traj.grid, traj.model));
  }
  files.push_back("diag.csv");
  write_text((fs::path(dir) / "diag.csv").string(), diag_csv(traj.records));
  return files;
}

std::vector<std::string> write_trajectory(const std::string& dir, const Trajectory2D& traj) {
  std::vector<std::string> files;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    files.push_back(snap_name(k));
    write_text((fs::path(dir) / files.back()).string(), snapshot_csv(traj.snapshots[k], traj.grid));
  }
  files.push_back("diag.csv");
  write_text((fs::path(dir) / "diag.csv").string(), diag_csv(traj.records));
  return files;
}

}  // namespace thickflow
