#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "thickflow/fourier.hpp"
#include "thickflow/model_1d.hpp"
#include "thickflow/semistationary_2d.hpp"

namespace thickflow {

enum class ModelKind { powerlaw1d, singular1d, semistationary2d };

struct Config {
  ModelKind model = ModelKind::powerlaw1d;
  std::string output_dir = "out";
  bool paper_initial_conditions = false;

  int n = 256;

  double p = 8.0;
  double mu = 1.0;
  double a = 1.0;
  double gamma = 2.0;
  double delta = 1e-8;
  double eps = 1e-2;
  double theta = 0.95;
  double newton_tol = 1e-10;
  int newton_max_iter = 200;

  std::uint64_t seed = 1;
  FourierSeries1D rho0{1.0, {}, {}};
  FourierSeries1D u0;
  FourierSeries2D rho0_2d{1.0, {}};

  double T = 0.25;
  /// cfl defaults to 0.5 in 1D and 0.25 in 2D when not given.
  double cfl = 0.0;
  std::vector<double> snapshot_times;

  std::vector<double> p_values;
  std::vector<double> eps_values;

  double C = 5.0;
  double energy_tol = 1e-6;
  double variational_tol = 1e-3;
  std::vector<double> eta_list{0.01, 0.05, 0.1};
  std::vector<double> s_list;
  int bank_size = 20;
  int phi_count = 10;

  double effective_cfl() const;
  bool is_1d() const { return model != ModelKind::semistationary2d; }
  Model1D model_1d() const;
  SemiStationaryParams params_2d() const;
  Run1DConfig run_1d() const;
  Run2DConfig run_2d() const;
  nlohmann::json to_json() const;
};

std::string model_name(ModelKind k);

/// Parses the INI dialect: [section] headers, `key = value`, `#` comments,
/// comma-separated arrays. Throws ParseError (first syntax error, with line)
/// or ValidationError (all semantic problems, with field paths).
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace thickflow
