#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace thickflow {

/// Outcome of one estimate check: pass iff measured <= bound (1 + tol) + tol.
/// Additive bounds, lower ones included, store the excess over the bound in
/// `measured` with bound = 0, so the same rule applies.
struct CheckReport {
  std::string check;
  double bound = 0.0;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool skipped = false;
  nlohmann::json context = nlohmann::json::object();

  static CheckReport make(std::string name, double bound, double measured, double tol,
                          nlohmann::json context = nlohmann::json::object());
  static CheckReport skip(std::string name, std::string reason, nlohmann::json context = nlohmann::json::object());
};

nlohmann::json to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<CheckReport>& rs);

}  // namespace thickflow
