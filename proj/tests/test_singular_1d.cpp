#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thickflow/errors.hpp"
#include "thickflow/fourier.hpp"
#include "thickflow/singular_1d.hpp"

using namespace thickflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Run1DConfig shear_loading(double amplitude, double T, int n = 256) {
  Run1DConfig cfg;
  cfg.n = n;
  cfg.T = T;
  cfg.rho0 = {1.0, {}, {0.5}};
  cfg.u0 = {0.0, {}, {amplitude / kTwoPi}};
  for (int k = 1; k <= 10; ++k) cfg.snapshot_times.push_back(T * k / 10.0);
  return cfg;
}

}  // namespace

TEST_CASE("singular flux examples") {
  CHECK(singular_flux(0.0, 1.0) == 0.0);
  CHECK(singular_flux(0.6, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(singular_flux(-0.6, 2.0) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK_THROWS_AS(singular_flux(1.0, 1.0), ConstraintViolation);
  CHECK_THROWS_AS(singular_flux(-1.2, 1.0), ConstraintViolation);
}

TEST_CASE("singular flux identity") {
  // eps s^2 / sqrt(1-s^2) = eps / sqrt(1-s^2) - eps sqrt(1-s^2)
  const double s = 0.6, eps = 1.0;
  const double lhs = s * singular_flux(s, eps);
  const double rhs = eps / std::sqrt(1.0 - s * s) - eps * std::sqrt(1.0 - s * s);
  CHECK(lhs == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(rhs == doctest::Approx(0.45).epsilon(1e-14));
}

TEST_CASE("singular flux is monotone and blows up at the barrier") {
  SplitMix64 rng(17);
  for (int k = 0; k < 2000; ++k) {
    const double s1 = 0.999 * rng.symmetric(), s2 = 0.999 * rng.symmetric();
    CHECK((singular_flux(s1, 0.1) - singular_flux(s2, 0.1)) * (s1 - s2) >= 0.0);
  }
  CHECK(singular_flux(1.0 - 1e-12, 1.0) > 1e5);
}

TEST_CASE("parameter validation") {
  SingularParams prm;
  prm.eps = 0.0;
  CHECK_THROWS(prm.validate());
  prm = SingularParams{};
  prm.theta = 1.0;
  CHECK_THROWS(prm.validate());
}

TEST_CASE("rest state is a fixed point") {
  SingularParams prm;
  State1D s;
  s.grid = Grid1D(32);
  s.rho.assign(32, 1.0);
  s.u.assign(32, 0.0);
  const State1D next = step_singular(s, prm, 1e-3);
  for (int i = 0; i < 32; ++i) {
    CHECK(next.rho[i] == 1.0);
    CHECK(next.u[i] == 0.0);
  }
  Run1DConfig cfg;
  cfg.n = 32;
  cfg.T = 0.0;
  cfg.rho0 = {1.0, {}, {}};
  CHECK(run_singular(cfg, prm).snapshots.size() == 1);
}

TEST_CASE("step rejects an inadmissible state") {
  SingularParams prm;
  State1D s;
  s.grid = Grid1D(32);
  s.rho.assign(32, 1.0);
  s.u.assign(32, 0.0);
  s.u[3] = 0.2;  // shear 0.2 / dx > 1
  CHECK_THROWS_AS(step_singular(s, prm, 1e-4), ConstraintViolation);
}

TEST_CASE("barrier holds under shear loading at eps = 1e-3") {
  SingularParams prm;
  prm.eps = 1e-3;
  prm.a = 4.0;
  const Trajectory tr = run_singular(shear_loading(0.9, 0.25), prm);
  double worst = 0.0;
  for (const auto& r : tr.records) worst = std::max(worst, r.dudx_maxabs);
  MESSAGE("1 - max shear " << 1.0 - worst);
  CHECK(worst < 1.0);
  for (const auto& s : tr.snapshots) {
    const Field1D sh = face_shear(s.u, tr.grid);
    for (double x : sh) CHECK(std::abs(x) < 1.0);
  }
}

TEST_CASE("energy, mass and momentum for each eps") {
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    SingularParams prm;
    prm.eps = eps;
    prm.a = 4.0;
    const Trajectory tr = run_singular(shear_loading(0.5, 0.25), prm);
    const auto& r0 = tr.records.front();
    for (const auto& r : tr.records) {
      CHECK(r.energy + r.dissipation_cum <= r0.energy * (1.0 + 1e-6));
      CHECK(std::abs(r.mass - r0.mass) / r0.mass < 1e-12);
      CHECK(std::abs(r.momentum - r0.momentum) / r0.mass < 1e-8);
      CHECK(r.barrier_term > 0.0);
    }
  }
}

TEST_CASE("strong viscosity damps the shear") {
  // After the viscous transient only acoustic oscillations remain, so the
  // decay is asserted on the envelope: maxima over windows of length 0.1.
  SingularParams prm;
  prm.eps = 1.0;
  prm.a = 1.0;
  Run1DConfig cfg = shear_loading(0.5, 0.5, 128);
  cfg.rho0 = {1.0, {}, {}};
  const Trajectory tr = run_singular(cfg, prm);
  std::vector<double> window(5, 0.0);
  for (const auto& r : tr.records) {
    const int k = std::min(4, static_cast<int>(r.t / 0.1));
    window[k] = std::max(window[k], r.dudx_maxabs);
  }
  for (int k = 1; k < 5; ++k) CHECK(window[k] < window[k - 1]);
  CHECK(tr.records.back().dudx_maxabs < 0.05 * tr.records.front().dudx_maxabs);
}
