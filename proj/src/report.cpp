#include "thickflow/report.hpp"

namespace thickflow {

CheckReport CheckReport::make(std::string name, double bound, double measured, double tol, nlohmann::json context) {
  CheckReport r;
  r.check = std::move(name);
  r.bound = bound;
  r.measured = measured;
  r.tol = tol;
  r.pass = measured <= bound * (1.0 + tol) + tol;
  r.context = std::move(context);
  return r;
}

CheckReport CheckReport::skip(std::string name, std::string reason, nlohmann::json context) {
  CheckReport r;
  r.check = std::move(name);
  r.skipped = true;
  r.pass = false;
  r.context = std::move(context);
  r.context["skip_reason"] = std::move(reason);
  return r;
}

nlohmann::json to_json(const CheckReport& r) {
  return {{"check", r.check}, {"bound", r.bound}, {"measured", r.measured}, {"tol", r.tol},
          {"pass", r.pass},   {"skipped", r.skipped}, {"context", r.context}};
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.bound = j.at("bound").get<double>();
  r.measured = j.at("measured").get<double>();
  r.tol = j.at("tol").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.skipped = j.value("skipped", false);
  r.context = j.value("context", nlohmann::json::object());
  return r;
}

nlohmann::json to_json(const std::vector<CheckReport>& rs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

}  // namespace thickflow
