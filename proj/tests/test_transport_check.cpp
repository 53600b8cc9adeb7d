#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thickflow/powerlaw_1d.hpp"
#include "thickflow/semistationary_2d.hpp"
#include "thickflow/transport_check.hpp"

using namespace thickflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Trajectory constant_trajectory() {
  Trajectory tr;
  tr.grid = Grid1D(32);
  for (int k = 0; k <= 4; ++k) tr.snapshots.push_back({0.05 * k, Field1D(32, 1.4), Field1D(32, 0.3)});
  return tr;
}

Trajectory dynamic_run(int n) {
  Run1DConfig cfg;
  cfg.n = n;
  cfg.T = 0.1;
  cfg.rho0 = {1.0, {}, {0.3}};
  cfg.u0 = {0.0, {0.5 / kTwoPi}, {}};
  for (int k = 1; k <= 20; ++k) cfg.snapshot_times.push_back(0.005 * k);
  PowerLawParams prm;
  return run(cfg, prm);
}

}  // namespace

TEST_CASE("constant trajectory has zero residuals") {
  const Trajectory tr = constant_trajectory();
  for (const auto& phi : make_phi_bank(4, 5, 0.2)) {
    CHECK(continuity_residual(tr, phi) < 1e-10);
    CHECK(renormalized_residual(tr, 2.0, phi) < 1e-10);
  }
  for (double m : time_mean_profile(tr, 2.0, {0.2, 0.1, 0.05})) CHECK(m == 0.0);

  Trajectory2D t2;
  t2.grid = Grid2D(16, 16);
  for (int k = 0; k <= 3; ++k)
    t2.snapshots.push_back({0.1 * k, Field2D(256, 2.0), {Field2D(256, 0.1), Field2D(256, -0.2)}});
  for (const auto& phi : make_phi_bank(4, 3, 0.3)) {
    CHECK(continuity_residual(t2, phi) < 1e-10);
    CHECK(renormalized_residual(t2, 2.0, phi) < 1e-10);
  }
}

TEST_CASE("gamma = 1 reduces to the continuity residual") {
  const Trajectory tr = dynamic_run(64);
  for (const auto& phi : make_phi_bank(9, 4, 0.1))
    CHECK(renormalized_residual(tr, 1.0, phi) == doctest::Approx(continuity_residual(tr, phi)).epsilon(1e-12));
}

TEST_CASE("weak residuals shrink under refinement") {
  const Trajectory coarse = dynamic_run(64), fine = dynamic_run(256);
  double rc = 0.0, rf = 0.0, gc = 0.0, gf = 0.0;
  for (const auto& phi : make_phi_bank(9, 6, 0.1)) {
    rc = std::max(rc, continuity_residual(coarse, phi));
    rf = std::max(rf, continuity_residual(fine, phi));
    gc = std::max(gc, renormalized_residual(coarse, 2.0, phi));
    gf = std::max(gf, renormalized_residual(fine, 2.0, phi));
  }
  MESSAGE("continuity " << rc << " -> " << rf << ", renormalized " << gc << " -> " << gf);
  CHECK(rf < rc);
  CHECK(gf < gc);
}

TEST_CASE("time mean of a linear decay") {
  // int rho^g = I0 - c t gives m(s) = c s / 2 exactly
  const double c = 0.8;
  std::vector<double> t, I;
  for (int k = 0; k <= 16; ++k) {
    t.push_back(k / 16.0);
    I.push_back(3.0 - c * t.back());
  }
  const std::vector<double> s = {0.5, 0.25, 0.125};
  const auto m = time_mean_profile(t, I, s);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(m[k] == doctest::Approx(0.5 * c * s[k]).epsilon(1e-13));
  CHECK(time_mean_continuity(s, m).pass);
  const CheckReport lin = time_mean_linearity(s, m);
  CHECK(lin.pass);
  CHECK(std::abs(lin.measured) < 1e-12);
}

TEST_CASE("time mean of a quadratic decay is not linear") {
  std::vector<double> t, I;
  for (int k = 0; k <= 64; ++k) {
    t.push_back(k / 64.0);
    I.push_back(1.0 - t.back() * t.back());
  }
  const std::vector<double> s = {0.5, 0.25, 0.125};
  const auto m = time_mean_profile(t, I, s);
  CHECK(m[1] / m[0] == doctest::Approx(0.25).epsilon(0.02));
  CHECK(time_mean_continuity(s, m).pass);
  CHECK_FALSE(time_mean_linearity(s, m).pass);
}

TEST_CASE("time mean continuity flags growth as s shrinks") {
  CHECK_FALSE(time_mean_continuity({0.2, 0.1, 0.05}, {0.1, 0.2, 0.3}).pass);
  CHECK(time_mean_continuity({0.2, 0.1, 0.05}, {0.1, 0.11, 0.05}).pass);
}

TEST_CASE("dissipative run decays linearly at small s") {
  Run1DConfig cfg;
  cfg.n = 128;
  cfg.T = 0.004;
  cfg.rho0 = {1.0, {}, {0.5}};
  cfg.u0 = {0.0, {0.5 / kTwoPi}, {}};
  for (int k = 1; k <= 32; ++k) cfg.snapshot_times.push_back(cfg.T * k / 32);
  PowerLawParams prm;
  prm.a = 4.0;
  const Trajectory tr = run(cfg, prm);
  const std::vector<double> s = {0.002, 0.001, 0.0005};
  const auto m = time_mean_profile(tr, prm.gamma, s);
  MESSAGE("ratios " << m[1] / m[0] << " " << m[2] / m[1]);
  CHECK(time_mean_continuity(tr, prm.gamma, s).pass);
  CHECK(time_mean_linearity(s, m).pass);
}
