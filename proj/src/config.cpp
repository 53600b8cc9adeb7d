#include "thickflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "thickflow/errors.hpp"

namespace thickflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"model", {"model", "output_dir", "paper_initial_conditions"}},
      {"grid", {"n", "nx", "ny"}},
      {"params", {"p", "mu", "a", "gamma", "delta", "eps", "theta", "newton_tol", "newton_max_iter"}},
      {"initial", {"seed", "rho0_mean", "rho0_cos", "rho0_sin", "u0_mean", "u0_cos", "u0_sin", "rho0_modes"}},
      {"time", {"T", "cfl", "snapshot_times", "snapshots"}},
      {"sweep", {"p_values", "eps_values"}},
      {"checks", {"C", "energy_tol", "variational_tol", "eta", "s_list", "bank_size", "phi_count"}},
  };
  return k;
}

double to_double(const Entry& e, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(e.line) + ": " + key + " is not a number: '" + e.value + "'", e.line);
  }
  if (pos != e.value.size())
    throw ParseError("line " + std::to_string(e.line) + ": " + key + " is not a number: '" + e.value + "'", e.line);
  return v;
}

long long to_int(const Entry& e, const std::string& key) {
  const double v = to_double(e, key);
  if (v != std::floor(v))
    throw ParseError("line " + std::to_string(e.line) + ": " + key + " must be an integer", e.line);
  return static_cast<long long>(v);
}

std::vector<double> to_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  if (e.value.empty()) return out;
  for (const auto& item : split(e.value, ',')) out.push_back(to_double(Entry{item, e.line}, key));
  return out;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError("line " + std::to_string(e.line) + ": " + key + " must be true or false", e.line);
}

// k1:k2:kind:coeff with kind one of cc, cs, sc, ss (c = cos, s = sin).
Mode2D to_mode(const std::string& item, int line) {
  const auto parts = split(item, ':');
  if (parts.size() != 4 || parts[2].size() != 2)
    throw ParseError("line " + std::to_string(line) + ": rho0_modes entry '" + item + "' is not k1:k2:kind:coeff", line);
  Mode2D m;
  m.k1 = static_cast<int>(to_int(Entry{parts[0], line}, "rho0_modes.k1"));
  m.k2 = static_cast<int>(to_int(Entry{parts[1], line}, "rho0_modes.k2"));
  for (int c = 0; c < 2; ++c)
    if (parts[2][c] != 'c' && parts[2][c] != 's')
      throw ParseError("line " + std::to_string(line) + ": rho0_modes kind must use c or s", line);
  m.sin1 = parts[2][0] == 's';
  m.sin2 = parts[2][1] == 's';
  m.coeff = to_double(Entry{parts[3], line}, "rho0_modes.coeff");
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void validate(const Config& c, bool cfl_given) {
  std::vector<std::string> issues;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  };
  need(c.n >= 8, "grid.n must be at least 8");
  need(c.gamma > 1.0, "params.gamma: gamma must exceed 1");
  need(c.a > 0.0, "params.a must be positive");
  need(c.newton_tol > 0.0, "params.newton_tol must be positive");
  need(c.newton_max_iter >= 1, "params.newton_max_iter must be at least 1");
  need(c.T >= 0.0, "time.T must be non-negative");
  if (cfl_given) {
    need(c.cfl > 0.0 && c.cfl <= 1.0, "time.cfl must lie in (0, 1]");
    if (!c.is_1d()) need(c.cfl <= 0.5, "time.cfl must not exceed 0.5 for semistationary2d");
  }
  if (c.model == ModelKind::singular1d) {
    need(c.eps > 0.0, "params.eps must be positive");
    need(c.theta > 0.0 && c.theta < 1.0, "params.theta must lie in (0, 1)");
  } else {
    need(c.p >= 2.0, "params.p must be at least 2");
    need(c.delta >= 0.0, "params.delta must be non-negative");
    need(!(c.p > 2.0 && c.delta == 0.0), "params.delta must be positive when p > 2");
  }
  if (c.model == ModelKind::powerlaw1d) need(c.mu > 0.0, "params.mu must be positive");

  double prev = 0.0;
  for (double t : c.snapshot_times) {
    need(t > prev && t <= c.T * (1.0 + 1e-12), "time.snapshot_times must increase strictly within (0, T]");
    prev = t;
  }

  const int dense = 8 * c.n;
  if (c.is_1d()) {
    const double rmin = c.rho0.min_value(dense);
    need(rmin > 0.0, "initial.rho0: minimum " + fmt(rmin) + " on " + std::to_string(dense) +
                         " samples is not positive");
    const double du = c.u0.max_abs_derivative(dense);
    if (c.paper_initial_conditions)
      need(du <= 1.0, "initial.u0: max |d_x u0| = " + fmt(du) +
                          " exceeds the bound 1 required by paper_initial_conditions");
    if (c.model == ModelKind::singular1d)
      need(du < 1.0, "initial.u0: max |d_x u0| = " + fmt(du) + " must stay below 1 for singular1d");
  } else {
    const double rmin = c.rho0_2d.min_value(dense);
    need(rmin > 0.0, "initial.rho0_modes: minimum " + fmt(rmin) + " on " + std::to_string(dense) +
                         "^2 samples is not positive");
  }

  for (double p : c.p_values) need(p >= 2.0, "sweep.p_values entries must be at least 2");
  for (double e : c.eps_values) need(e > 0.0, "sweep.eps_values entries must be positive");
  need(c.eps_values.empty() || c.is_1d(), "sweep.eps_values requires a 1D model");

  need(c.C > 0.0, "checks.C must be positive");
  need(c.energy_tol >= 0.0, "checks.energy_tol must be non-negative");
  need(c.variational_tol >= 0.0, "checks.variational_tol must be non-negative");
  for (double e : c.eta_list) need(e > 0.0, "checks.eta entries must be positive");
  prev = std::numeric_limits<double>::infinity();
  for (double s : c.s_list) {
    need(s > 0.0 && s < prev, "checks.s_list must decrease strictly and stay positive");
    need(s <= c.T * (1.0 + 1e-12), "checks.s_list entries must not exceed T");
    prev = s;
  }
  need(c.bank_size >= 1, "checks.bank_size must be at least 1");
  need(c.phi_count >= 1, "checks.phi_count must be at least 1");

  if (!issues.empty()) throw ValidationError(issues);
}

}  // namespace

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::powerlaw1d: return "powerlaw1d";
    case ModelKind::singular1d: return "singular1d";
    case ModelKind::semistationary2d: return "semistationary2d";
  }
  return "unknown";
}

double Config::effective_cfl() const {
  if (cfl > 0.0) return cfl;
  return is_1d() ? 0.5 : 0.25;
}

Model1D Config::model_1d() const {
  Model1D m;
  m.law.kind = model == ModelKind::singular1d ? ViscousLaw::Kind::singular : ViscousLaw::Kind::power_law;
  m.law.p = p;
  m.law.mu = mu;
  m.law.delta = delta;
  m.law.eps = eps;
  m.law.theta = theta;
  m.a = a;
  m.gamma = gamma;
  m.cfl = effective_cfl();
  m.newton_tol = newton_tol;
  m.newton_max_iter = newton_max_iter;
  return m;
}

SemiStationaryParams Config::params_2d() const {
  SemiStationaryParams s;
  s.p = p;
  s.gamma = gamma;
  s.delta = delta;
  s.cfl = effective_cfl();
  s.newton_tol = newton_tol;
  s.newton_max_iter = newton_max_iter;
  return s;
}

Run1DConfig Config::run_1d() const {
  Run1DConfig r;
  r.n = n;
  r.T = T;
  r.snapshot_times = snapshot_times;
  r.rho0 = rho0;
  r.u0 = u0;
  r.paper_initial_conditions = paper_initial_conditions;
  return r;
}

Run2DConfig Config::run_2d() const {
  Run2DConfig r;
  r.n = n;
  r.T = T;
  r.snapshot_times = snapshot_times;
  r.rho0 = rho0_2d;
  return r;
}

nlohmann::json Config::to_json() const {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : rho0_2d.modes)
    modes.push_back({{"k1", m.k1}, {"k2", m.k2}, {"sin1", m.sin1}, {"sin2", m.sin2}, {"coeff", m.coeff}});
  return {
      {"model", model_name(model)},
      {"output_dir", output_dir},
      {"paper_initial_conditions", paper_initial_conditions},
      {"grid", {{"n", n}}},
      {"params",
       {{"p", p}, {"mu", mu}, {"a", a}, {"gamma", gamma}, {"delta", delta}, {"eps", eps}, {"theta", theta},
        {"newton_tol", newton_tol}, {"newton_max_iter", newton_max_iter}}},
      {"initial",
       {{"seed", seed},
        {"rho0", {{"mean", rho0.mean}, {"cos", rho0.cos_coeffs}, {"sin", rho0.sin_coeffs}}},
        {"u0", {{"mean", u0.mean}, {"cos", u0.cos_coeffs}, {"sin", u0.sin_coeffs}}},
        {"rho0_2d", {{"mean", rho0_2d.mean}, {"modes", modes}}}}},
      {"time", {{"T", T}, {"cfl", effective_cfl()}, {"snapshot_times", snapshot_times}}},
      {"sweep", {{"p_values", p_values}, {"eps_values", eps_values}}},
      {"checks",
       {{"C", C}, {"energy_tol", energy_tol}, {"variational_tol", variational_tol}, {"eta", eta_list},
        {"s_list", s_list}, {"bank_size", bank_size}, {"phi_count", phi_count}}},
  };
}

Config parse_config(const std::string& text) {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("line " + std::to_string(line) + ": unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!known_keys().count(section))
        throw ParseError("line " + std::to_string(line) + ": unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected key = value", line);
    if (section.empty())
      throw ParseError("line " + std::to_string(line) + ": key outside of any section", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!known_keys().at(section).count(key))
      throw ParseError("line " + std::to_string(line) + ": unknown key " + section + "." + key, line);
    if (sections[section].count(key))
      throw ParseError("line " + std::to_string(line) + ": duplicate key " + section + "." + key, line);
    sections[section][key] = Entry{value, line};
  }

  Config c;
  auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto it = sections.find(sec);
    if (it == sections.end()) return nullptr;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? nullptr : &jt->second;
  };
  auto num = [&](const std::string& sec, const std::string& key, double& out) {
    if (auto e = get(sec, key)) out = to_double(*e, sec + "." + key);
  };
  auto list = [&](const std::string& sec, const std::string& key, std::vector<double>& out) {
    if (auto e = get(sec, key)) out = to_list(*e, sec + "." + key);
  };

  std::vector<std::string> issues;
  if (auto e = get("model", "model")) {
    if (e->value == "powerlaw1d") c.model = ModelKind::powerlaw1d;
    else if (e->value == "singular1d") c.model = ModelKind::singular1d;
    else if (e->value == "semistationary2d") c.model = ModelKind::semistationary2d;
    else issues.push_back("model.model: unknown model '" + e->value + "'");
  } else {
    issues.push_back("model.model is required");
  }
  if (auto e = get("model", "output_dir")) c.output_dir = e->value;
  if (auto e = get("model", "paper_initial_conditions")) c.paper_initial_conditions = to_bool(*e, "paper_initial_conditions");

  if (auto e = get("grid", "n")) c.n = static_cast<int>(to_int(*e, "grid.n"));
  else if (auto nx = get("grid", "nx")) {
    c.n = static_cast<int>(to_int(*nx, "grid.nx"));
    if (auto ny = get("grid", "ny"))
      if (to_int(*ny, "grid.ny") != c.n) issues.push_back("grid.ny must equal grid.nx");
  } else {
    issues.push_back("grid.n is required");
  }

  num("params", "p", c.p);
  num("params", "mu", c.mu);
  num("params", "a", c.a);
  num("params", "gamma", c.gamma);
  num("params", "delta", c.delta);
  num("params", "eps", c.eps);
  num("params", "theta", c.theta);
  num("params", "newton_tol", c.newton_tol);
  if (auto e = get("params", "newton_max_iter")) c.newton_max_iter = static_cast<int>(to_int(*e, "params.newton_max_iter"));

  if (auto e = get("initial", "seed")) {
    const bool digits = !e->value.empty() && std::all_of(e->value.begin(), e->value.end(), [](char ch) {
      return std::isdigit(static_cast<unsigned char>(ch));
    });
    if (!digits) throw ParseError("line " + std::to_string(e->line) + ": initial.seed must be a non-negative integer", e->line);
    c.seed = std::stoull(e->value);
  }
  num("initial", "rho0_mean", c.rho0.mean);
  list("initial", "rho0_cos", c.rho0.cos_coeffs);
  list("initial", "rho0_sin", c.rho0.sin_coeffs);
  num("initial", "u0_mean", c.u0.mean);
  list("initial", "u0_cos", c.u0.cos_coeffs);
  list("initial", "u0_sin", c.u0.sin_coeffs);
  c.rho0_2d.mean = c.rho0.mean;
  if (auto e = get("initial", "rho0_modes"))
    for (const auto& item : split(e->value, ','))
      if (!item.empty()) c.rho0_2d.modes.push_back(to_mode(item, e->line));

  if (!get("time", "T")) issues.push_back("time.T is required");
  num("time", "T", c.T);
  bool cfl_given = false;
  if (get("time", "cfl")) {
    num("time", "cfl", c.cfl);
    cfl_given = true;
  }
  list("time", "snapshot_times", c.snapshot_times);
  if (auto e = get("time", "snapshots")) {
    if (get("time", "snapshot_times")) {
      issues.push_back("time.snapshots and time.snapshot_times are mutually exclusive");
    } else {
      const long long k = to_int(*e, "time.snapshots");
      if (k < 1) issues.push_back("time.snapshots must be at least 1");
      for (long long i = 1; i <= k; ++i) c.snapshot_times.push_back(c.T * static_cast<double>(i) / static_cast<double>(k));
    }
  } else if (!get("time", "snapshot_times") && c.T > 0.0) {
    for (int i = 1; i <= 10; ++i) c.snapshot_times.push_back(c.T * i / 10.0);
  }

  list("sweep", "p_values", c.p_values);
  list("sweep", "eps_values", c.eps_values);

  num("checks", "C", c.C);
  num("checks", "energy_tol", c.energy_tol);
  num("checks", "variational_tol", c.variational_tol);
  list("checks", "eta", c.eta_list);
  list("checks", "s_list", c.s_list);
  if (auto e = get("checks", "bank_size")) c.bank_size = static_cast<int>(to_int(*e, "checks.bank_size"));
  if (auto e = get("checks", "phi_count")) c.phi_count = static_cast<int>(to_int(*e, "checks.phi_count"));

  try {
    validate(c, cfl_given);
  } catch (const ValidationError& v) {
    issues.insert(issues.end(), v.issues.begin(), v.issues.end());
  }
  if (!issues.empty()) throw ValidationError(issues);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace thickflow
