#include "anisoflow/scheme.hpp"

#include "anisoflow/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anisoflow {

double embedding_cstar(double p, double nu, double kappa, double c_hyp) {
  return (1.0 + c_hyp * c_hyp) * (1.0 + std::pow(p / nu, 2.0 / p)) / std::min(1.0, kappa);
}

double tau_star_formula(double c_star, double grad_w1inf, double e0, double p) {
  const double b = 1.0 + grad_w1inf;
  return 1.0 / (4.0 * c_star * b * b * (1.0 + std::pow(e0, 2.0 / p)));
}

double tau_star(const Anisotropy& a, const SchemeParams& params, double e0, double c_hyp) {
  if (a.eps == 0.0) {
    throw std::invalid_argument("tau_star: requires eps > 0 (smoothed anisotropy)");
  }
  if (e0 < 0.0) throw std::invalid_argument("tau_star: e0 must be >= 0");
  const double c_star = embedding_cstar(params.p, params.nu, params.kappa, c_hyp);
  return tau_star_formula(c_star, a.lip + a.hess_bound, e0, params.p);
}

StepResult alpha_step(const ScalarField& alpha_prev, const ScalarField& u_prev,
                      const Anisotropy& a, const SchemeParams& params) {
  assert(alpha_prev.grid == u_prev.grid);
  const Grid g = alpha_prev.grid;
  const ScalarField cpl = coupling_field(a, alpha_prev, gradient(u_prev));

  LinearOperator A;
  A.apply = [&params](const ScalarField& f) {
    const ScalarField lap = laplacian0(f);
    return ScalarField{f.grid, f.v / params.tau - (1.0 + params.kappa / params.tau) * lap.v};
  };

  const ScalarField rhs{g, laplacian0(alpha_prev).v - cpl.v};
  const CgResult cg = cg_solve(A, rhs, params.tol_linear, params.max_iters);
  return {ScalarField{g, alpha_prev.v + cg.x.v}, cg.residual};
}

StepResult u_step(const ScalarField& u_prev, const ScalarField& alpha_new, const Anisotropy& a,
                  const SchemeParams& params, const ScalarField& u_org) {
  assert(u_prev.grid == alpha_new.grid && u_prev.grid == u_org.grid);
  const Grid g = u_prev.grid;
  const VectorField gu_prev = gradient(u_prev);

  // objective in the increment d = z - u_prev; the 1/tau terms are then
  // evaluated without cancellation
  ConvexObjective obj;
  obj.value = [&](const ScalarField& d) {
    const VectorField gd = gradient(d);
    const VectorField gz{g, gu_prev.x + gd.x, gu_prev.y + gd.y};
    double val = 0.5 / params.tau * inner_l2(d, d);
    val += 0.5 * params.mu / params.tau * inner_l2(gd, gd);
    val += p_integral(gz, params.nu, params.p);
    val += anisotropy_integral(a, alpha_new, gz);
    const ScalarField r{g, u_prev.v + d.v - u_org.v};
    val += 0.5 * params.lambda * inner_l2(r, r);
    return val;
  };
  obj.gradient = [&](const ScalarField& d) {
    const VectorField gd = gradient(d);
    const VectorField gz{g, gu_prev.x + gd.x, gu_prev.y + gd.y};
    VectorField flux = anisotropy_flux(a, alpha_new, gz);
    const VectorField pf = p_flux(gz, params.nu, params.p);
    flux.x += pf.x + (params.mu / params.tau) * gd.x;
    flux.y += pf.y + (params.mu / params.tau) * gd.y;
    const ScalarField div = divergence(flux);
    return ScalarField{g, d.v / params.tau - div.v +
                              params.lambda * (u_prev.v + d.v - u_org.v)};
  };

  const MinimizeResult res =
      minimize_convex(obj, ScalarField::zero(g), params.tol_convex, params.max_iters);
  return {ScalarField{g, u_prev.v + res.z.v}, res.grad_norm};
}

Trajectory run(const ScalarField& u0, const ScalarField& alpha0, const Anisotropy& a,
               const SchemeParams& params, int m, const ScalarField& u_org, double c_hyp) {
  params.validate();
  if (m < 0) throw std::invalid_argument("run: m must be >= 0");
  if ((u0.v < -1e-12).any() || (u0.v > 1.0 + 1e-12).any()) {
    throw std::invalid_argument("run: initial intensity must satisfy 0 <= u0 <= 1");
  }

  Trajectory traj;
  traj.params = params;
  traj.aniso = a;
  traj.u_org = u_org;
  traj.u.push_back(u0);
  traj.alpha.push_back(alpha0);
  traj.energy0 = energy(u0, alpha0, a, params, u_org);
  traj.tau_star =
      tau_star(a, params, traj.energy0.total + a.lip * u0.grid.measure(), c_hyp);
  traj.tau_warning = params.tau >= traj.tau_star;

  for (int i = 1; i <= m; ++i) {
    try {
      const StepResult as = alpha_step(traj.alpha.back(), traj.u.back(), a, params);
      const StepResult us = u_step(traj.u.back(), as.field, a, params, u_org);

      StepRecord rec;
      rec.index = i;
      rec.residual_alpha = as.residual;
      rec.residual_u = us.residual;
      const ScalarField da{u0.grid, as.field.v - traj.alpha.back().v};
      const ScalarField du{u0.grid, us.field.v - traj.u.back().v};
      rec.diss_alpha_l2 = inner_l2(da, da) / params.tau;
      const VectorField gda = gradient(da);
      rec.diss_alpha_grad = params.kappa / params.tau * inner_l2(gda, gda);
      rec.diss_u_l2 = inner_l2(du, du) / params.tau;
      const VectorField gdu = gradient(du);
      rec.diss_u_grad = params.mu / params.tau * inner_l2(gdu, gdu);
      rec.energy = energy(us.field, as.field, a, params, u_org);

      traj.alpha.push_back(as.field);
      traj.u.push_back(us.field);
      traj.records.push_back(rec);
    } catch (const NonConvergence& e) {
      throw NonConvergence("step " + std::to_string(i) + ": " + e.what(), e.iterations,
                           e.residual);
    }
  }
  return traj;
}

}  // namespace anisoflow
