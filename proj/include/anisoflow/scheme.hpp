#pragma once

#include "anisoflow/anisotropy.hpp"
#include "anisoflow/energy.hpp"
#include "anisoflow/grid.hpp"

#include <vector>

namespace anisoflow {

/// Per-step log: energy after the step, the four quadratic dissipation
/// rates, and the achieved solver residuals.
struct StepRecord {
  int index = 0;
  EnergyBreakdown energy;
  double diss_alpha_l2 = 0.0;    // (1/tau) |alpha_i - alpha_{i-1}|^2
  double diss_alpha_grad = 0.0;  // (kappa/tau) |grad(alpha_i - alpha_{i-1})|^2
  double diss_u_l2 = 0.0;        // (1/tau) |u_i - u_{i-1}|^2
  double diss_u_grad = 0.0;      // (mu/tau) |grad(u_i - u_{i-1})|^2
  double residual_alpha = 0.0;   // |A alpha_i - b| of the linear step
  double residual_u = 0.0;       // |grad Phi(u_i)| of the convex step
};

/// Discrete solution sequence {(u_i, alpha_i)}_{i=0..m} with its records.
struct Trajectory {
  SchemeParams params;
  Anisotropy aniso;
  ScalarField u_org;
  std::vector<ScalarField> u;      // states, size m+1; u[0] is the initial datum
  std::vector<ScalarField> alpha;  // states, size m+1
  EnergyBreakdown energy0;         // energy of the initial state
  std::vector<StepRecord> records;  // size m
  double tau_star = 0.0;           // stability threshold computed for this run
  bool tau_warning = false;        // params.tau >= tau_star

  int steps() const { return static_cast<int>(records.size()); }
};

/// C_* = (1 + c_hyp^2)(1 + (p/nu)^{2/p}) / min(1, kappa), with c_hyp the
/// configured H^1 -> L^{2p/(p-2)} embedding constant.
double embedding_cstar(double p, double nu, double kappa, double c_hyp);

/// 1 / (4 c_star (1 + grad_w1inf)^2 (1 + e0^{2/p})).
double tau_star_formula(double c_star, double grad_w1inf, double e0, double p);

/// Stability threshold with grad_w1inf = lip + hess_bound of the smoothed
/// anisotropy. Strictly positive, decreasing in e0 and in lip + hess_bound.
/// Rejects eps == 0 (the W^{1,inf} seminorm of grad gamma is undefined).
double tau_star(const Anisotropy& a, const SchemeParams& params, double e0, double c_hyp);

struct StepResult {
  ScalarField field;
  double residual = 0.0;
};

/// Orientation step: solves the SPD linear system
///   [(1/tau) I + (1 + kappa/tau)(-laplacian0)] alpha =
///   (1/tau) alpha_prev + (kappa/tau)(-laplacian0) alpha_prev - g,
/// with g the coupling field frozen at (alpha_prev, u_prev). Internally the
/// equivalent increment system A e = laplacian0(alpha_prev) - g is solved,
/// which keeps the conjugate gradient tolerance meaningful for small tau.
StepResult alpha_step(const ScalarField& alpha_prev, const ScalarField& u_prev,
                      const Anisotropy& a, const SchemeParams& params);

/// Intensity step: minimizes the strictly convex
///   Phi(z) = (1/2tau)|z - u_prev|^2 + (nu/p) int |grad z|^p
///          + (mu/2tau)|grad(z - u_prev)|^2 + int gamma_eps(R(alpha) grad z)
///          + (lambda/2)|z - u_org|^2,
/// warm-started at u_prev (the increment z - u_prev is the optimization
/// variable). The residual is |grad Phi| at the returned iterate.
StepResult u_step(const ScalarField& u_prev, const ScalarField& alpha_new, const Anisotropy& a,
                  const SchemeParams& params, const ScalarField& u_org);

/// Runs m steps of the scheme: alpha_step from (alpha_{i-1}, u_{i-1}), then
/// u_step with the fresh alpha_i. Requires 0 <= u0 <= 1 nodewise. Sets
/// tau_warning (never aborts) when params.tau >= tau_star computed with
/// e0 = E(u0, alpha0) + lip * |Omega|.
Trajectory run(const ScalarField& u0, const ScalarField& alpha0, const Anisotropy& a,
               const SchemeParams& params, int m, const ScalarField& u_org, double c_hyp = 1.0);

}  // namespace anisoflow
