#include "thickflow/grid.hpp"

#include <stdexcept>

namespace thickflow {

Grid1D::Grid1D(int n_cells) : n(n_cells), dx(1.0 / n_cells) {
  if (n_cells < 8) throw std::invalid_argument("Grid1D needs at least 8 cells");
}

Field1D ddx_periodic(const Field1D& f, const Grid1D& g, DiffScheme scheme) {
  const int n = g.n;
  Field1D out(n);
  for (int i = 0; i < n; ++i) {
    const double fp = f[g.wrap(i + 1)];
    const double fm = f[g.wrap(i - 1)];
    switch (scheme) {
      case DiffScheme::central:
        out[i] = (fp - fm) / (2.0 * g.dx);
        break;
      case DiffScheme::forward:
        out[i] = (fp - f[i]) / g.dx;
        break;
      case DiffScheme::backward:
        out[i] = (f[i] - fm) / g.dx;
        break;
    }
  }
  return out;
}

double integrate(const Field1D& f, const Grid1D& g) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.dx;
}

Grid2D::Grid2D(int nx_cells, int ny_cells)
    : nx(nx_cells), ny(ny_cells), hx(1.0 / nx_cells), hy(1.0 / ny_cells) {
  if (nx_cells < 8 || ny_cells < 8) throw std::invalid_argument("Grid2D needs at least 8 cells per axis");
}

double integrate(const Field2D& f, const Grid2D& g) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.cell_area();
}

Field2D ddx_periodic_2d(const Field2D& f, const Grid2D& g, int axis) {
  Field2D out(g.size());
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      if (axis == 0)
        out[g.idx(i, j)] = (f[g.idx(i + 1, j)] - f[g.idx(i - 1, j)]) / (2.0 * g.hx);
      else
        out[g.idx(i, j)] = (f[g.idx(i, j + 1)] - f[g.idx(i, j - 1)]) / (2.0 * g.hy);
    }
  }
  return out;
}

TensorField2D sym_grad_2d(const VectorField2D& u, const Grid2D& g) {
  const Field2D u1x = ddx_periodic_2d(u.c1, g, 0);
  const Field2D u1y = ddx_periodic_2d(u.c1, g, 1);
  const Field2D u2x = ddx_periodic_2d(u.c2, g, 0);
  const Field2D u2y = ddx_periodic_2d(u.c2, g, 1);
  TensorField2D d{u1x, u2y, Field2D(g.size())};
  for (std::size_t k = 0; k < g.size(); ++k) d.d12[k] = 0.5 * (u1y[k] + u2x[k]);
  return d;
}

Field2D divergence_2d(const VectorField2D& u, const Grid2D& g) {
  Field2D a = ddx_periodic_2d(u.c1, g, 0);
  const Field2D b = ddx_periodic_2d(u.c2, g, 1);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

}  // namespace thickflow
