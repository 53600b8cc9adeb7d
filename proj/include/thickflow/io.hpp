#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "thickflow/model_1d.hpp"
#include "thickflow/semistationary_2d.hpp"

namespace thickflow {

/// All numbers are written with %.17g.
std::string format_number(double v);

/// t,x,rho,u,dudx,sigma; dudx and sigma are the face values of face i+1/2.
std::string snapshot_csv(const Snapshot1D& s, const Grid1D& g, const Model1D& model);
/// t,dt,mass,momentum,energy,dissipation_cum,rho_min,rho_max,dudx_maxabs,sigma_max,hoff_cum
std::string diag_csv(const std::vector<DiagnosticsRecord>& records);

/// t,x1,x2,rho,u1,u2,Du_norm,divu with nodal central differences.
std::string snapshot_csv(const Snapshot2D& s, const Grid2D& g);
/// t,dt,mass,momentum,energy,dissipation_cum,rho_min,rho_max,Du_maxnorm,sigma_max,hoff_cum;
/// hoff_cum is not tracked in 2D and written as 0.
std::string diag_csv(const std::vector<Record2D>& records);

/// Writes text to path, creating parent directories.
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Writes snap_000000.csv ... and diag.csv into dir; returns the file names written.
std::vector<std::string> write_trajectory(const std::string& dir, const Trajectory& traj);
std::vector<std::string> write_trajectory(const std::string& dir, const Trajectory2D& traj);

}  // namespace thickflow
