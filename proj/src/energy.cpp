#include "anisoflow/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace anisoflow {

void SchemeParams::validate() const {
  if (!(p > 2.0)) throw std::invalid_argument("params: p must be > 2");
  if (!(kappa > 0.0 && mu > 0.0 && nu > 0.0 && lambda > 0.0)) {
    throw std::invalid_argument("params: kappa, mu, nu, lambda must be > 0");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("params: tau must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("params: eps must be >= 0");
  if (!(tol_linear > 0.0 && tol_convex > 0.0)) {
    throw std::invalid_argument("params: tolerances must be > 0");
  }
  if (max_iters < 1) throw std::invalid_argument("params: max_iters must be >= 1");
}

VectorField anisotropy_grad_field(const Anisotropy& a, const ScalarField& alpha,
                                  const VectorField& grad_u) {
  const VectorField rw = rotate(alpha, grad_u);
  VectorField out = VectorField::zero(grad_u.grid);
  for (int j = 0; j < grad_u.grid.ny; ++j) {
    for (int i = 0; i < grad_u.grid.nx; ++i) {
      const Eigen::Vector2d gv = grad(a, Eigen::Vector2d(rw.x(i, j), rw.y(i, j)));
      out.x(i, j) = gv.x();
      out.y(i, j) = gv.y();
    }
  }
  return out;
}

VectorField anisotropy_flux(const Anisotropy& a, const ScalarField& alpha,
                            const VectorField& grad_u) {
  VectorField gf = anisotropy_grad_field(a, alpha, grad_u);
  // R(alpha)^T = R(-alpha)
  VectorField out = VectorField::zero(grad_u.grid);
  const Eigen::ArrayXXd c = alpha.v.cos();
  const Eigen::ArrayXXd s = alpha.v.sin();
  out.x = c * gf.x + s * gf.y;
  out.y = -s * gf.x + c * gf.y;
  return out;
}

VectorField p_flux(const VectorField& grad_u, double nu, double p) {
  VectorField out = VectorField::zero(grad_u.grid);
  const Eigen::ArrayXXd r2 = grad_u.x.square() + grad_u.y.square();
  const Eigen::ArrayXXd factor = nu * r2.pow(0.5 * (p - 2.0));
  out.x = factor * grad_u.x;
  out.y = factor * grad_u.y;
  return out;
}

ScalarField coupling_field(const Anisotropy& a, const ScalarField& alpha,
                           const VectorField& grad_u) {
  ScalarField out = ScalarField::zero(grad_u.grid);
  for (int j = 0; j < grad_u.grid.ny; ++j) {
    for (int i = 0; i < grad_u.grid.nx; ++i) {
      out.v(i, j) =
          alpha_coupling(a, alpha.v(i, j), Eigen::Vector2d(grad_u.x(i, j), grad_u.y(i, j)));
    }
  }
  return out;
}

double anisotropy_integral(const Anisotropy& a, const ScalarField& alpha,
                           const VectorField& grad_u) {
  const VectorField rw = rotate(alpha, grad_u);
  double sum = 0.0;
  for (int j = 0; j < grad_u.grid.ny; ++j) {
    for (int i = 0; i < grad_u.grid.nx; ++i) {
      sum += eval(a, Eigen::Vector2d(rw.x(i, j), rw.y(i, j)));
    }
  }
  return sum * grad_u.grid.cell_area();
}

double p_integral(const VectorField& grad_u, double nu, double p) {
  const Eigen::ArrayXXd r2 = grad_u.x.square() + grad_u.y.square();
  return (nu / p) * r2.pow(0.5 * p).sum() * grad_u.grid.cell_area();
}

double lp_norm(const VectorField& grad_u, double p) {
  const Eigen::ArrayXXd r2 = grad_u.x.square() + grad_u.y.square();
  return std::pow(r2.pow(0.5 * p).sum() * grad_u.grid.cell_area(), 1.0 / p);
}

EnergyBreakdown energy(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                       const SchemeParams& params, const ScalarField& u_org) {
  assert(u.grid == alpha.grid && u.grid == u_org.grid);
  const VectorField gu = gradient(u);
  const VectorField ga = gradient(alpha);
  EnergyBreakdown e;
  e.dirichlet_alpha = 0.5 * inner_l2(ga, ga);
  e.p_term = p_integral(gu, params.nu, params.p);
  e.aniso_term = anisotropy_integral(a, alpha, gu);
  const ScalarField r{u.grid, u.v - u_org.v};
  e.fidelity = 0.5 * params.lambda * inner_l2(r, r);
  e.total = e.dirichlet_alpha + e.p_term + e.aniso_term + e.fidelity;
  return e;
}

ScalarField grad_energy_u(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                          const SchemeParams& params, const ScalarField& u_org) {
  const VectorField gu = gradient(u);
  VectorField flux = anisotropy_flux(a, alpha, gu);
  const VectorField pf = p_flux(gu, params.nu, params.p);
  flux.x += pf.x;
  flux.y += pf.y;
  const ScalarField div = divergence(flux);
  return {u.grid, -div.v + params.lambda * (u.v - u_org.v)};
}

ScalarField grad_energy_alpha(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                              const SchemeParams& params) {
  (void)params;
  const ScalarField lap = laplacian0(alpha);
  const ScalarField cpl = coupling_field(a, alpha, gradient(u));
  return {u.grid, -lap.v + cpl.v};
}

}  // namespace anisoflow
