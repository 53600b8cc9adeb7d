#pragma once

#include <cstddef>
#include <vector>

namespace thickflow {

/// Periodic uniform grid on the unit circle, cell centers at (i+1/2)dx.
struct Grid1D {
  int n = 0;
  double length = 1.0;
  double dx = 0.0;

  explicit Grid1D(int n_cells = 8);
  double x(int i) const { return (i + 0.5) * dx; }
  int wrap(int i) const { return ((i % n) + n) % n; }
};

using Field1D = std::vector<double>;

enum class DiffScheme { central, forward, backward };

Field1D ddx_periodic(const Field1D& f, const Grid1D& g, DiffScheme scheme = DiffScheme::central);

/// Forward difference (f[i+1]-f[i])/dx, the shear on face i+1/2.
inline Field1D face_shear(const Field1D& u, const Grid1D& g) {
  return ddx_periodic(u, g, DiffScheme::forward);
}

double integrate(const Field1D& f, const Grid1D& g);

/// Periodic grid on the unit torus. Node (i,j) sits at ((i+1/2)h, (j+1/2)h),
/// index i along x1; storage is row-major with i outermost.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  Grid2D(int nx_cells = 8, int ny_cells = 8);
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t idx(int i, int j) const {
    int ii = ((i % nx) + nx) % nx;
    int jj = ((j % ny) + ny) % ny;
    return static_cast<std::size_t>(ii) * ny + jj;
  }
  double x1(int i) const { return (i + 0.5) * hx; }
  double x2(int j) const { return (j + 0.5) * hy; }
  double cell_area() const { return hx * hy; }
};

using Field2D = std::vector<double>;

struct VectorField2D {
  Field2D c1;
  Field2D c2;
};

/// Symmetric 2x2 tensor per cell: (d11, d22, d12).
struct TensorField2D {
  Field2D d11;
  Field2D d22;
  Field2D d12;
};

double integrate(const Field2D& f, const Grid2D& g);

/// Central difference along x1 (axis 0) or x2 (axis 1).
Field2D ddx_periodic_2d(const Field2D& f, const Grid2D& g, int axis);

TensorField2D sym_grad_2d(const VectorField2D& u, const Grid2D& g);
Field2D divergence_2d(const VectorField2D& u, const Grid2D& g);

}  // namespace thickflow
