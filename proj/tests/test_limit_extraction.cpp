#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "thickflow/limit_extraction.hpp"
#include "thickflow/powerlaw_1d.hpp"
#include "thickflow/semistationary_2d.hpp"

using namespace thickflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field1D sawtooth(const Grid1D& g, double slope) {
  Field1D u(g.n);
  for (int i = 0; i < g.n; ++i) u[i] = i % 2 ? slope * g.dx : 0.0;
  return u;
}

Run1DConfig small_config() {
  Run1DConfig cfg;
  cfg.n = 64;
  cfg.T = 0.05;
  cfg.rho0 = {1.0, {}, {0.3}};
  cfg.u0 = {0.0, {}, {0.9 / kTwoPi}};
  cfg.snapshot_times = {0.025, 0.05};
  return cfg;
}

}  // namespace

TEST_CASE("violation measure examples") {
  Grid1D g(64);
  Field1D u(g.n);
  for (int i = 0; i < g.n; ++i) u[i] = 0.5 * std::sin(kTwoPi * g.x(i)) / kTwoPi;
  CHECK(constraint_violation_measure(u, g, 0.05) == 0.0);
  CHECK(constraint_violation_measure(sawtooth(g, 1.2), g, 0.1) == 1.0);
  CHECK(constraint_violation_measure(sawtooth(g, 1.2), g, 0.2) == 0.0);
  CHECK(violation_fraction({0.5, 1.2, 1.06, 0.9}, 0.05) == 0.5);
}

TEST_CASE("violation measure is nonincreasing in eta") {
  Grid1D g(128);
  Field1D u(g.n);
  for (int i = 0; i < g.n; ++i) u[i] = 1.5 * std::sin(kTwoPi * g.x(i)) / kTwoPi;
  double prev = 1.0;
  for (double eta : {0.0, 0.01, 0.05, 0.1, 0.3, 0.6}) {
    const double v = constraint_violation_measure(u, g, eta);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == 0.0);
  Grid2D g2(16, 16);
  const VectorField2D zero{Field2D(g2.size(), 0.0), Field2D(g2.size(), 0.0)};
  CHECK(constraint_violation_measure(zero, g2, 0.0) == 0.0);
}

TEST_CASE("lagrange multiplier") {
  Grid1D g(32);
  SUBCASE("no stress") {
    const Multiplier m = lagrange_multiplier(face_shear(sawtooth(g, 0.4), g), Field1D(g.n, 0.0), g);
    for (double x : m.pi) CHECK(x == 0.0);
    CHECK(m.residual == 0.0);
  }
  SUBCASE("constraint active everywhere") {
    Field1D tau(g.n);
    for (int i = 0; i < g.n; ++i) tau[i] = std::cos(kTwoPi * g.x(i));
    const Multiplier m = lagrange_multiplier(face_shear(sawtooth(g, 1.0), g), tau, g);
    CHECK(std::abs(m.residual) < 1e-14);
    for (int i = 0; i < g.n; ++i) CHECK(m.pi[i] == std::abs(tau[i]));
  }
  SUBCASE("partial activity") {
    // shear 0.5 and tau 2 everywhere: int 2 * 0.5 = 1
    const Multiplier m = lagrange_multiplier(Field1D(g.n, 0.5), Field1D(g.n, 2.0), g);
    CHECK(m.residual == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("entropy gap") {
  CHECK(entropy_gap({2.0, 2.0}, {1.0, 1.0}, 2.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy_gap({1.3, 0.7}, {1.3, 0.7}, 2.0, 0.5) == 0.0);
  // nonnegative by convexity
  CHECK(entropy_gap({0.5, 1.7, 1.1}, {1.2, 0.9, 1.0}, 1.4, 1.0 / 3.0) > 0.0);
}

TEST_CASE("single-value sweep has no pairs") {
  const Run1DConfig cfg = small_config();
  PowerLawParams prm;
  const SweepReport rep = run_sweep(cfg, prm.model(), SweepMode::p, {8.0});
  CHECK(rep.entries.size() == 1);
  CHECK(rep.pairwise.empty());
  CHECK(rep.entries[0].ok);
  std::istringstream csv(rep.to_csv());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "param,u_dist,rho_dist,viol_001,viol_005,viol_01,compl_resid,entropy_gap");
}

TEST_CASE("p-sweep orders runs and builds consecutive pairs") {
  const Run1DConfig cfg = small_config();
  PowerLawParams prm;
  std::vector<std::optional<Trajectory>> runs;
  const SweepReport rep = run_sweep(cfg, prm.model(), SweepMode::p, {16.0, 4.0, 8.0}, 1, &runs);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.entries[0].param == 4.0);
  CHECK(rep.entries[2].param == 16.0);
  REQUIRE(rep.pairwise.size() == 2);
  CHECK(rep.pairwise[0].from == 4.0);
  CHECK(rep.pairwise[1].to == 16.0);
  CHECK(rep.entries[2].u_dist == 0.0);
  CHECK(rep.pairwise[1].u_dist == doctest::Approx(u_distance(*runs[1], *runs[2])));
  CHECK(u_distance(*runs[0], *runs[0]) == 0.0);
  CHECK(rep.to_json()["mode"] == "p");

  const SweepReport par = run_sweep(cfg, prm.model(), SweepMode::p, {16.0, 4.0, 8.0}, 3);
  CHECK(par.to_csv() == rep.to_csv());
}

TEST_CASE("sweep checks") {
  SweepReport rep;
  rep.mode = "p";
  for (int k = 0; k < 3; ++k) {
    SweepEntry e;
    e.param = 4 << k;
    e.ok = true;
    e.viol_005 = 0.1 / (1 << (2 * k));
    e.compl_resid = 1.0 / (1 << (2 * k));
    e.hoff_Y = 1.0 + 0.1 * k;
    rep.entries.push_back(e);
    rep.param_values.push_back(e.param);
  }
  rep.pairwise = {{4, 8, 0.2, 0.1, 0.01}, {8, 16, 0.1, 0.05, 0.004}};
  for (const auto& r : check_sweep(rep, 0.01)) {
    INFO(r.check);
    CHECK(r.pass);
  }
  auto named = [](const std::vector<CheckReport>& rs, const std::string& name) {
    for (const auto& r : rs)
      if (r.check == name) return r;
    throw std::runtime_error("missing " + name);
  };
  CHECK_FALSE(named(check_sweep(rep, 0.005), "violation_finest_p").pass);
  SweepReport flat = rep;
  flat.entries[2].compl_resid = 0.5;
  CHECK_FALSE(named(check_sweep(flat, 0.01), "complementarity_drop_p").pass);
  rep.entries[1].viol_005 = rep.entries[0].viol_005;
  bool found = false;
  for (const auto& r : check_sweep(rep, 0.01))
    if (r.check == "violation_decreasing_p") {
      found = true;
      CHECK_FALSE(r.pass);
    }
  CHECK(found);
  CHECK(check_cross_model(rep, 0.4, 5.0).pass);
  CHECK_FALSE(check_cross_model(rep, 0.6, 5.0).pass);
}

TEST_CASE("variational residual with zero test fields") {
  Run1DConfig cfg = small_config();
  PowerLawParams prm;
  const Trajectory tr = run(cfg, prm);
  auto bank = admissible_bank_1d(3, 4, tr);
  REQUIRE(bank.size() == 4);
  for (auto& f : bank) f.scale = 0.0;
  // scale 0 makes every test field zero: the residual is int tau(u_x) u_x >= 0
  const CheckReport r = variational_residual(tr, bank);
  CHECK(r.pass);
}
