#include "anisoflow/grid.hpp"

namespace anisoflow {

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField out = VectorField::zero(g);
  const Eigen::ArrayXXd& v = f.v;
  if (g.nx > 1) {
    out.x.topRows(g.nx - 1) = (v.bottomRows(g.nx - 1) - v.topRows(g.nx - 1)) / g.hx;
  }
  out.x.row(g.nx - 1) = -v.row(g.nx - 1) / g.hx;
  if (g.ny > 1) {
    out.y.leftCols(g.ny - 1) = (v.rightCols(g.ny - 1) - v.leftCols(g.ny - 1)) / g.hy;
  }
  out.y.col(g.ny - 1) = -v.col(g.ny - 1) / g.hy;
  return out;
}

ScalarField divergence(const VectorField& w) {
  const Grid& g = w.grid;
  ScalarField out = ScalarField::zero(g);
  // transpose of the forward-difference stencil: backward differences with
  // the zero extension on the left/bottom side
  out.v.row(0) = w.x.row(0) / g.hx;
  if (g.nx > 1) {
    out.v.bottomRows(g.nx - 1) = (w.x.bottomRows(g.nx - 1) - w.x.topRows(g.nx - 1)) / g.hx;
  }
  out.v.col(0) += w.y.col(0) / g.hy;
  if (g.ny > 1) {
    out.v.rightCols(g.ny - 1) += (w.y.rightCols(g.ny - 1) - w.y.leftCols(g.ny - 1)) / g.hy;
  }
  return out;
}

ScalarField laplacian0(const ScalarField& f) { return divergence(gradient(f)); }

VectorField rotate(const ScalarField& alpha, const VectorField& v) {
  assert(alpha.grid == v.grid);
  VectorField out = VectorField::zero(v.grid);
  const Eigen::ArrayXXd c = alpha.v.cos();
  const Eigen::ArrayXXd s = alpha.v.sin();
  out.x = c * v.x - s * v.y;
  out.y = s * v.x + c * v.y;
  return out;
}

VectorField rotate(double alpha, const VectorField& v) {
  return rotate(ScalarField::constant(v.grid, alpha), v);
}

double inner_l2(const ScalarField& f, const ScalarField& g) {
  assert(f.grid == g.grid);
  return (f.v * g.v).sum() * f.grid.cell_area();
}

double inner_l2(const VectorField& f, const VectorField& g) {
  assert(f.grid == g.grid);
  return ((f.x * g.x).sum() + (f.y * g.y).sum()) * f.grid.cell_area();
}

double norm_l2(const ScalarField& f) { return std::sqrt(inner_l2(f, f)); }

double norm_l2(const VectorField& f) { return std::sqrt(inner_l2(f, f)); }

}  // namespace anisoflow
