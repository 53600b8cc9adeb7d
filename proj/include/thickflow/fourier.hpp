#pragma once

#include <cstdint>
#include <vector>

#include "thickflow/grid.hpp"

namespace thickflow {

/// splitmix64: state += 0x9E3779B97F4A7C15, then the two xor-shift-multiply
/// rounds with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0,1) from the top 53 bits.
  double uniform();
  /// Uniform in [-1,1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

/// f(x) = mean + sum_k cos_k cos(2 pi k x) + sin_k sin(2 pi k x), k = 1..K.
struct FourierSeries1D {
  double mean = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double value(double x) const;
  double derivative(double x) const;
  Field1D sample(const Grid1D& g) const;
  /// Extremes of f and |f'| over n_samples equispaced points.
  double min_value(int n_samples) const;
  double max_value(int n_samples) const;
  double max_abs_derivative(int n_samples) const;
};

/// One product mode c * trig(2 pi k1 x1) * trig(2 pi k2 x2), trig in {cos, sin}.
struct Mode2D {
  int k1 = 0;
  int k2 = 0;
  bool sin1 = false;
  bool sin2 = false;
  double coeff = 0.0;
};

struct FourierSeries2D {
  double mean = 0.0;
  std::vector<Mode2D> modes;

  double value(double x1, double x2) const;
  void gradient(double x1, double x2, double& g1, double& g2) const;
  Field2D sample(const Grid2D& g) const;
  double min_value(int n_per_axis) const;
  double max_value(int n_per_axis) const;
};

/// Smooth periodic space-time field
///   v(t,x) = scale * sum_k [(a0_k + a1_k s) cos(2 pi k x) + (b0_k + b1_k s) sin(2 pi k x)],
/// with s = t/T.
struct SpaceTimeField1D {
  double horizon = 1.0;
  double scale = 1.0;
  std::vector<double> a0, a1, b0, b1;

  double value(double t, double x) const;
  Field1D sample(double t, const Grid1D& g) const;
};

/// Vector-valued 2D analogue: each component is a sum of product modes whose
/// coefficients vary linearly in t/T.
struct SpaceTimeField2D {
  double horizon = 1.0;
  double scale = 1.0;
  std::vector<Mode2D> modes1_c0, modes1_c1;
  std::vector<Mode2D> modes2_c0, modes2_c1;

  VectorField2D sample(double t, const Grid2D& g) const;
};

/// Test function phi(t,x) = env(t) * spatial(x) with env = (t/T)^2 (1 - t/T)^2.
struct TestFunction {
  double horizon = 1.0;
  FourierSeries1D spatial_1d;
  FourierSeries2D spatial_2d;

  double envelope(double t) const;
  double envelope_dt(double t) const;
};

/// Bank of `count` 1D test fields drawn from `seed`; each has 4 spatial modes
/// with coefficients decaying like 1/k^2. Scale is left at 1.
std::vector<SpaceTimeField1D> make_bank_1d(std::uint64_t seed, int count, double horizon);
std::vector<SpaceTimeField2D> make_bank_2d(std::uint64_t seed, int count, double horizon);
/// Test functions with 3 spatial modes (1D and 2D parts both filled).
std::vector<TestFunction> make_phi_bank(std::uint64_t seed, int count, double horizon);

}  // namespace thickflow
