#pragma once

#include "anisoflow/anisotropy.hpp"
#include "anisoflow/grid.hpp"

namespace anisoflow {

/// Model and solver constants. p > 2 and kappa, mu, nu, lambda > 0.
struct SchemeParams {
  double kappa = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  double lambda = 1.0;
  double p = 3.0;
  double tau = 0.1;
  double eps = 0.05;
  double tol_linear = 1e-10;
  double tol_convex = 1e-10;
  int max_iters = 50000;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const SchemeParams&) const = default;
};

/// Free energy, term by term:
///   (1/2)|grad alpha|^2 + (nu/p)|grad u|^p + gamma_eps(R(alpha) grad u)
///   + (lambda/2)|u - u_org|^2, integrated over the grid.
struct EnergyBreakdown {
  double dirichlet_alpha = 0.0;
  double p_term = 0.0;
  double aniso_term = 0.0;
  double fidelity = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                       const SchemeParams& params, const ScalarField& u_org);

/// Exact discrete first variation in u:
///   -div( R(alpha)^T grad gamma_eps(R(alpha) grad u) + nu |grad u|^{p-2} grad u )
///   + lambda (u - u_org).
/// Matches directional finite differences of energy() because divergence is
/// the exact adjoint of gradient.
ScalarField grad_energy_u(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                          const SchemeParams& params, const ScalarField& u_org);

/// Exact discrete first variation in alpha: -laplacian0(alpha) + coupling.
ScalarField grad_energy_alpha(const ScalarField& u, const ScalarField& alpha, const Anisotropy& a,
                              const SchemeParams& params);

// Shared kernels (also used by the time stepper and the diagnostics).

/// Nodewise grad gamma_eps(R(alpha) grad_u).
VectorField anisotropy_grad_field(const Anisotropy& a, const ScalarField& alpha,
                                  const VectorField& grad_u);

/// R(alpha)^T grad gamma_eps(R(alpha) grad_u), the flux of the anisotropic term.
VectorField anisotropy_flux(const Anisotropy& a, const ScalarField& alpha,
                            const VectorField& grad_u);

/// nu |grad_u|^{p-2} grad_u.
VectorField p_flux(const VectorField& grad_u, double nu, double p);

/// Nodewise alpha_coupling(a, alpha, grad_u).
ScalarField coupling_field(const Anisotropy& a, const ScalarField& alpha,
                           const VectorField& grad_u);

/// Sum of gamma_eps(R(alpha) grad_u) over nodes times the cell area.
double anisotropy_integral(const Anisotropy& a, const ScalarField& alpha,
                           const VectorField& grad_u);

/// (nu/p) sum of |grad_u|^p times the cell area.
double p_integral(const VectorField& grad_u, double nu, double p);

/// |grad_u|_{L^p} = (sum |grad_u|^p * cell_area)^{1/p}.
double lp_norm(const VectorField& grad_u, double p);

}  // namespace anisoflow
