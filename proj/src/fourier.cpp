#include "thickflow/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thickflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trig(bool use_sin, double arg) { return use_sin ? std::sin(arg) : std::cos(arg); }

double mode_value(const Mode2D& m, double x1, double x2) {
  return m.coeff * trig(m.sin1, kTwoPi * m.k1 * x1) * trig(m.sin2, kTwoPi * m.k2 * x2);
}

// A random mode with both wave numbers in 0..2, not both zero.
Mode2D random_mode(SplitMix64& rng) {
  Mode2D m;
  do {
    m.k1 = static_cast<int>(rng.next() % 3);
    m.k2 = static_cast<int>(rng.next() % 3);
  } while (m.k1 == 0 && m.k2 == 0);
  m.sin1 = (rng.next() & 1) != 0;
  m.sin2 = (rng.next() & 1) != 0;
  const double k2 = static_cast<double>(m.k1 * m.k1 + m.k2 * m.k2);
  m.coeff = rng.symmetric() / k2;
  return m;
}
}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double FourierSeries1D::value(double x) const {
  double v = mean;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) v += cos_coeffs[k] * std::cos(kTwoPi * (k + 1) * x);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) v += sin_coeffs[k] * std::sin(kTwoPi * (k + 1) * x);
  return v;
}

double FourierSeries1D::derivative(double x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double w = kTwoPi * (k + 1);
    v -= w * cos_coeffs[k] * std::sin(w * x);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    const double w = kTwoPi * (k + 1);
    v += w * sin_coeffs[k] * std::cos(w * x);
  }
  return v;
}

Field1D FourierSeries1D::sample(const Grid1D& g) const {
  Field1D f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = value(g.x(i));
  return f;
}

double FourierSeries1D::min_value(int n_samples) const {
  double m = value(0.0);
  for (int i = 1; i < n_samples; ++i) m = std::min(m, value(static_cast<double>(i) / n_samples));
  return m;
}

double FourierSeries1D::max_value(int n_samples) const {
  double m = value(0.0);
  for (int i = 1; i < n_samples; ++i) m = std::max(m, value(static_cast<double>(i) / n_samples));
  return m;
}

double FourierSeries1D::max_abs_derivative(int n_samples) const {
  double m = 0.0;
  for (int i = 0; i < n_samples; ++i) m = std::max(m, std::abs(derivative(static_cast<double>(i) / n_samples)));
  return m;
}

double FourierSeries2D::value(double x1, double x2) const {
  double v = mean;
  for (const auto& m : modes) v += mode_value(m, x1, x2);
  return v;
}

void FourierSeries2D::gradient(double x1, double x2, double& g1, double& g2) const {
  g1 = g2 = 0.0;
  for (const auto& m : modes) {
    const double w1 = kTwoPi * m.k1, w2 = kTwoPi * m.k2;
    const double t1 = trig(m.sin1, w1 * x1), t2 = trig(m.sin2, w2 * x2);
    // d/dx cos(wx) = -w sin(wx), d/dx sin(wx) = w cos(wx)
    const double d1 = m.sin1 ? w1 * std::cos(w1 * x1) : -w1 * std::sin(w1 * x1);
    const double d2 = m.sin2 ? w2 * std::cos(w2 * x2) : -w2 * std::sin(w2 * x2);
    g1 += m.coeff * d1 * t2;
    g2 += m.coeff * t1 * d2;
  }
}

Field2D FourierSeries2D::sample(const Grid2D& g) const {
  Field2D f(g.size());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) f[g.idx(i, j)] = value(g.x1(i), g.x2(j));
  return f;
}

double FourierSeries2D::min_value(int n) const {
  double m = value(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::min(m, value(double(i) / n, double(j) / n));
  return m;
}

double FourierSeries2D::max_value(int n) const {
  double m = value(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::max(m, value(double(i) / n, double(j) / n));
  return m;
}

double SpaceTimeField1D::value(double t, double x) const {
  const double s = t / horizon;
  double v = 0.0;
  for (std::size_t k = 0; k < a0.size(); ++k) {
    const double w = kTwoPi * (k + 1);
    v += (a0[k] + a1[k] * s) * std::cos(w * x) + (b0[k] + b1[k] * s) * std::sin(w * x);
  }
  return scale * v;
}

Field1D SpaceTimeField1D::sample(double t, const Grid1D& g) const {
  Field1D f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = value(t, g.x(i));
  return f;
}

VectorField2D SpaceTimeField2D::sample(double t, const Grid2D& g) const {
  const double s = t / horizon;
  VectorField2D v{Field2D(g.size(), 0.0), Field2D(g.size(), 0.0)};
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const double x1 = g.x1(i), x2 = g.x2(j);
      double c1 = 0.0, c2 = 0.0;
      for (std::size_t k = 0; k < modes1_c0.size(); ++k)
        c1 += mode_value(modes1_c0[k], x1, x2) + s * mode_value(modes1_c1[k], x1, x2);
      for (std::size_t k = 0; k < modes2_c0.size(); ++k)
        c2 += mode_value(modes2_c0[k], x1, x2) + s * mode_value(modes2_c1[k], x1, x2);
      v.c1[g.idx(i, j)] = scale * c1;
      v.c2[g.idx(i, j)] = scale * c2;
    }
  }
  return v;
}

double TestFunction::envelope(double t) const {
  const double s = t / horizon;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return s * s * (1.0 - s) * (1.0 - s);
}

double TestFunction::envelope_dt(double t) const {
  const double s = t / horizon;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return (2.0 * s * (1.0 - s) * (1.0 - s) - 2.0 * s * s * (1.0 - s)) / horizon;
}

std::vector<SpaceTimeField1D> make_bank_1d(std::uint64_t seed, int count, double horizon) {
  SplitMix64 rng(seed);
  std::vector<SpaceTimeField1D> bank;
  for (int f = 0; f < count; ++f) {
    SpaceTimeField1D v;
    v.horizon = horizon;
    for (int k = 1; k <= 4; ++k) {
      const double w = 1.0 / (k * k);
      v.a0.push_back(w * rng.symmetric());
      v.a1.push_back(w * rng.symmetric());
      v.b0.push_back(w * rng.symmetric());
      v.b1.push_back(w * rng.symmetric());
    }
    bank.push_back(std::move(v));
  }
  return bank;
}

std::vector<SpaceTimeField2D> make_bank_2d(std::uint64_t seed, int count, double horizon) {
  SplitMix64 rng(seed);
  std::vector<SpaceTimeField2D> bank;
  for (int f = 0; f < count; ++f) {
    SpaceTimeField2D v;
    v.horizon = horizon;
    for (int k = 0; k < 4; ++k) {
      v.modes1_c0.push_back(random_mode(rng));
      Mode2D m = v.modes1_c0.back();
      m.coeff = rng.symmetric() * std::abs(m.coeff);
      v.modes1_c1.push_back(m);
    }
    for (int k = 0; k < 4; ++k) {
      v.modes2_c0.push_back(random_mode(rng));
      Mode2D m = v.modes2_c0.back();
      m.coeff = rng.symmetric() * std::abs(m.coeff);
      v.modes2_c1.push_back(m);
    }
    bank.push_back(std::move(v));
  }
  return bank;
}

std::vector<TestFunction> make_phi_bank(std::uint64_t seed, int count, double horizon) {
  SplitMix64 rng(seed);
  std::vector<TestFunction> bank;
  for (int f = 0; f < count; ++f) {
    TestFunction phi;
    phi.horizon = horizon;
    phi.spatial_1d.mean = rng.symmetric();
    for (int k = 1; k <= 3; ++k) {
      phi.spatial_1d.cos_coeffs.push_back(rng.symmetric() / k);
      phi.spatial_1d.sin_coeffs.push_back(rng.symmetric() / k);
    }
    phi.spatial_2d.mean = rng.symmetric();
    for (int k = 0; k < 3; ++k) phi.spatial_2d.modes.push_back(random_mode(rng));
    bank.push_back(std::move(phi));
  }
  return bank;
}

}  // namespace thickflow
