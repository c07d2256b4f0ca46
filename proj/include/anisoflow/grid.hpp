#pragma once

#include <Eigen/Dense>

#include <cassert>

namespace anisoflow {

/// Uniform Cartesian grid of interior nodes on a rectangle. Boundary values
/// are identically zero and are not stored as degrees of freedom; the domain
/// measure is nx*hx * ny*hy.
struct Grid {
  int nx = 0;
  int ny = 0;
  double hx = 1.0;
  double hy = 1.0;

  double cell_area() const { return hx * hy; }
  double measure() const { return nx * hx * ny * hy; }
  bool operator==(const Grid&) const = default;
};

/// Scalar grid function (intensity, angle, ...) with zero Dirichlet
/// extension outside the interior nodes.
struct ScalarField {
  Grid grid;
  Eigen::ArrayXXd v;  // v(i, j): i indexes x, j indexes y

  static ScalarField zero(const Grid& g) { return {g, Eigen::ArrayXXd::Zero(g.nx, g.ny)}; }
  static ScalarField constant(const Grid& g, double c) {
    return {g, Eigen::ArrayXXd::Constant(g.nx, g.ny, c)};
  }
};

/// Two-component grid function; component (i, j) lives on the forward
/// difference edge leaving node (i, j).
struct VectorField {
  Grid grid;
  Eigen::ArrayXXd x;
  Eigen::ArrayXXd y;

  static VectorField zero(const Grid& g) {
    return {g, Eigen::ArrayXXd::Zero(g.nx, g.ny), Eigen::ArrayXXd::Zero(g.nx, g.ny)};
  }
};

/// Forward differences (f(i+1,j)-f(i,j))/hx and (f(i,j+1)-f(i,j))/hy with
/// the zero Dirichlet extension at the right/top boundary. Linear in f.
VectorField gradient(const ScalarField& f);

/// Negative l2-adjoint of gradient: <gradient(f), v> = -<f, divergence(v)>
/// for all f, v, exactly up to rounding.
ScalarField divergence(const VectorField& v);

/// divergence(gradient(f)). Five-point stencil away from the lower-left
/// boundary rows; -laplacian0 is SPD on nonzero fields.
ScalarField laplacian0(const ScalarField& f);

/// Pointwise rotation R(alpha) v with the counterclockwise convention
/// R(t) = [[cos t, -sin t], [sin t, cos t]], so d/dt R(t) = R(t + pi/2).
VectorField rotate(const ScalarField& alpha, const VectorField& v);
VectorField rotate(double alpha, const VectorField& v);

double inner_l2(const ScalarField& f, const ScalarField& g);
double inner_l2(const VectorField& f, const VectorField& g);
double norm_l2(const ScalarField& f);
double norm_l2(const VectorField& f);

}  // namespace anisoflow
