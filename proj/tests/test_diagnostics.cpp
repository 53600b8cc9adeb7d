#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thickflow/diagnostics.hpp"
#include "thickflow/powerlaw_1d.hpp"

using namespace thickflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Trajectory steady_run(double p = 8.0) {
  Run1DConfig cfg;
  cfg.n = 64;
  cfg.T = 0.1;
  cfg.rho0 = {1.0, {}, {}};
  cfg.u0 = {0.3, {}, {}};
  cfg.snapshot_times = {0.05, 0.1};
  PowerLawParams prm;
  prm.p = p;
  return run(cfg, prm);
}

Trajectory smooth_run(double p, int n) {
  Run1DConfig cfg;
  cfg.n = n;
  cfg.T = 0.1;
  cfg.rho0 = {1.0, {}, {0.3}};
  cfg.u0 = {0.0, {}, {0.5 / kTwoPi}};
  cfg.paper_initial_conditions = true;
  for (int k = 1; k <= 5; ++k) cfg.snapshot_times.push_back(0.02 * k);
  PowerLawParams prm;
  prm.p = p;
  return run(cfg, prm);
}

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.check == name) return r;
  throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST_CASE("cauchy stress examples") {
  Model1D m;
  m.law.p = 4.0;
  m.law.delta = 0.0;
  State1D s;
  s.grid = Grid1D(16);
  s.rho.assign(16, 1.0);
  s.u.assign(16, 0.7);
  for (double v : cauchy_stress(s, m)) CHECK(v == doctest::Approx(-1.0).epsilon(1e-15));

  // alternating shear +-0.5 on a sawtooth
  for (int i = 0; i < 16; ++i) s.u[i] = i % 2 ? 0.5 * s.grid.dx : 0.0;
  const Field1D sig = cauchy_stress(s, m);
  for (int i = 0; i < 16; ++i) CHECK(sig[i] == doctest::Approx(i % 2 ? -1.125 : -0.875).epsilon(1e-14));

  // shear 1 with vanishing density gives sigma = tau(1) = 1
  s.rho.assign(16, 0.0);
  for (int i = 0; i < 16; ++i) s.u[i] = i % 2 ? s.grid.dx : 0.0;
  CHECK(cauchy_stress(s, m)[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("density bound formulas") {
  CHECK(density_lower_bound(0.0, 0.5, 2.0, 1.0, 1.0, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(density_lower_bound(1.0, 0.5, 0.5, 1.0, 1.0, 2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-15));
  const double e0 = 0.0731;
  CHECK(density_upper_bound(0.25, 2.0, e0, 1.0, 2.0, 8.0) ==
        doctest::Approx(2.0 * std::exp(e0 + (4.0 * e0 + 1.125) * 0.25)).epsilon(1e-14));
}

TEST_CASE("steady state passes every check") {
  const Trajectory tr = steady_run();
  for (const auto& r : tr.records) CHECK(r.energy == doctest::Approx(tr.records.front().energy).epsilon(1e-14));
  CHECK(check_energy_inequality(tr).pass);
  for (const auto& r : check_conservation(tr)) CHECK(r.pass);
  for (const auto& r : check_density_bounds(tr)) CHECK(r.pass);
  const auto stress = check_stress_max_principle(tr);
  for (const auto& r : stress) CHECK(r.pass);
  CHECK(std::abs(find(stress, "stress_max_principle_initial").measured) < 1e-12);
  CHECK(find(stress, "stress_max_principle_mu").measured == doctest::Approx(-2.0));
  CHECK(hoff_functional(tr) == doctest::Approx(0.0));
  CHECK(check_barrier(tr).pass);
}

TEST_CASE("stress checks skip below the hypothesis") {
  const Trajectory tr = steady_run(2.5);
  for (const auto& r : check_stress_max_principle(tr)) {
    CHECK(r.skipped);
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("run with bounded initial shear satisfies the estimates") {
  const Trajectory tr = smooth_run(8.0, 128);
  CHECK(check_energy_inequality(tr).pass);
  for (const auto& r : check_conservation(tr)) CHECK(r.pass);
  const auto dens = check_density_bounds(tr);
  for (const auto& r : dens) CHECK(r.pass);
  const auto stress = check_stress_max_principle(tr);
  CHECK(find(stress, "stress_max_principle_mu").pass);
  CHECK(find(stress, "stress_max_principle_mu").context["paper_bound"].get<double>() == 1.0);
  double prev = tr.records.front().energy;
  for (const auto& r : tr.records) {
    CHECK(r.energy <= prev * (1.0 + 1e-12));
    prev = r.energy;
  }
  CHECK(hoff_functional(tr) > 0.0);
}

TEST_CASE("energy check flags a growing energy") {
  Trajectory tr = steady_run();
  tr.records.back().energy *= 1.01;
  const CheckReport r = check_energy_inequality(tr);
  CHECK_FALSE(r.pass);
  CHECK(r.measured == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("barrier check is strict") {
  Trajectory tr = steady_run();
  tr.records.back().dudx_maxabs = 1.0;
  CHECK_FALSE(check_barrier(tr).pass);
  tr.records.back().dudx_maxabs = 0.999;
  CHECK(check_barrier(tr).pass);
}

TEST_CASE("factor-2 band") {
  CHECK(check_band("b", {1, 2, 3}, {1.0, 1.5, 2.0}).pass);
  CHECK(check_band("b", {1, 2, 3}, {1.0, 1.5, 2.0}).measured == doctest::Approx(1.5));
  CHECK_FALSE(check_band("b", {1, 2, 3}, {0.5, 1.5, 2.0}).pass);
}

TEST_CASE("report rule and JSON round trip") {
  CHECK(CheckReport::make("x", 1.0, 1.0, 0.0).pass);
  CHECK_FALSE(CheckReport::make("x", 1.0, 1.0 + 1e-9, 0.0).pass);
  CHECK(CheckReport::make("x", 0.0, 0.04, 0.05).pass);
  const CheckReport r = CheckReport::make("y", 2.0, 1.5, 0.1, {{"k", 3}});
  const CheckReport back = report_from_json(to_json(r));
  CHECK(back.check == "y");
  CHECK(back.bound == 2.0);
  CHECK(back.measured == 1.5);
  CHECK(back.pass);
  CHECK(back.context["k"] == 3);
  const CheckReport s = CheckReport::skip("z", "why");
  CHECK(report_from_json(to_json(s)).skipped);
}
