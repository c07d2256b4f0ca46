#include "anisoflow/diagnostics.hpp"

#include "anisoflow/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace anisoflow {

DissipationReport dissipation_check(const Trajectory& traj, double slack) {
  if (traj.steps() < 1) throw std::invalid_argument("dissipation_check: needs >= 1 step");
  DissipationReport rep;
  rep.slack = slack;
  const SchemeParams& pr = traj.params;

  std::vector<double> energies(traj.u.size());
  energies[0] = energy(traj.u[0], traj.alpha[0], traj.aniso, pr, traj.u_org).total;
  std::vector<double> diss(traj.u.size(), 0.0);  // weighted dissipation of step i
  for (std::size_t i = 1; i < traj.u.size(); ++i) {
    energies[i] = energy(traj.u[i], traj.alpha[i], traj.aniso, pr, traj.u_org).total;
    const ScalarField da{traj.u[0].grid, traj.alpha[i].v - traj.alpha[i - 1].v};
    const ScalarField du{traj.u[0].grid, traj.u[i].v - traj.u[i - 1].v};
    const VectorField gda = gradient(da);
    const VectorField gdu = gradient(du);
    diss[i] = 0.5 / pr.tau * inner_l2(da, da) +
              0.5 * pr.kappa / pr.tau * inner_l2(gda, gda) +
              1.0 / pr.tau * inner_l2(du, du) + pr.mu / pr.tau * inner_l2(gdu, gdu);
    rep.step_defects.push_back(diss[i] + energies[i] - energies[i - 1]);
  }
  rep.max_step_defect = *std::max_element(rep.step_defects.begin(), rep.step_defects.end());

  // telescoped inequality between every pair s < t via prefix sums
  std::vector<double> cum(traj.u.size(), 0.0);
  for (std::size_t i = 1; i < traj.u.size(); ++i) cum[i] = cum[i - 1] + diss[i];
  rep.max_global_defect = -std::numeric_limits<double>::infinity();
  rep.max_energy_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < traj.u.size(); ++s) {
    for (std::size_t t = s + 1; t < traj.u.size(); ++t) {
      rep.max_global_defect =
          std::max(rep.max_global_defect, cum[t] - cum[s] + energies[t] - energies[s]);
      rep.max_energy_increase = std::max(rep.max_energy_increase, energies[t] - energies[s]);
    }
  }
  rep.pass = rep.max_step_defect <= slack && rep.max_global_defect <= slack;
  return rep;
}

RangeReport range_check(const Trajectory& traj) {
  RangeReport rep;
  for (const ScalarField& u : traj.u) {
    rep.max_neg = std::max(rep.max_neg, (-u.v).maxCoeff());
    rep.max_over = std::max(rep.max_over, (u.v - 1.0).maxCoeff());
  }
  rep.max_neg = std::max(rep.max_neg, 0.0);
  rep.max_over = std::max(rep.max_over, 0.0);
  return rep;
}

double dependence_j(const ScalarField& u1, const ScalarField& alpha1, const ScalarField& u2,
                    const ScalarField& alpha2, const SchemeParams& params) {
  const ScalarField du{u1.grid, u1.v - u2.v};
  const ScalarField da{u1.grid, alpha1.v - alpha2.v};
  const VectorField gdu = gradient(du);
  const VectorField gda = gradient(da);
  return inner_l2(du, du) + params.mu * inner_l2(gdu, gdu) + inner_l2(da, da) +
         params.kappa * inner_l2(gda, gda);
}

DependenceReport dependence_check(const ScalarField& u0a, const ScalarField& alpha0a,
                                  const ScalarField& u0b, const ScalarField& alpha0b,
                                  const Anisotropy& a, const SchemeParams& params, int m,
                                  const ScalarField& u_org, double c_star) {
  Trajectory ta, tb;
  if (thread_cap() >= 2) {
    std::thread wa([&] { ta = run(u0a, alpha0a, a, params, m, u_org); });
    tb = run(u0b, alpha0b, a, params, m, u_org);
    wa.join();
  } else {
    ta = run(u0a, alpha0a, a, params, m, u_org);
    tb = run(u0b, alpha0b, a, params, m, u_org);
  }

  DependenceReport rep;
  double sup_lp = 0.0;
  for (std::size_t i = 0; i < ta.u.size(); ++i) {
    rep.j_series.push_back(dependence_j(ta.u[i], ta.alpha[i], tb.u[i], tb.alpha[i], params));
    sup_lp = std::max(sup_lp, lp_norm(gradient(ta.u[i]), params.p));
  }
  rep.j0 = rep.j_series.front();
  rep.bound_rate = c_star * (1.0 + sup_lp) * (1.0 + sup_lp);

  // least-squares slope of log J(t_i) over the positive entries
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < rep.j_series.size(); ++i) {
    if (rep.j_series[i] <= 0.0) continue;
    const double t = static_cast<double>(i) * params.tau;
    const double l = std::log(rep.j_series[i]);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++n;
  }
  const double denom = n * stt - st * st;
  rep.fitted_rate = (n >= 2 && denom > 0.0) ? (n * stl - st * sl) / denom : 0.0;
  if (rep.j0 > 0.0) {
    const double l0 = std::log(rep.j0);
    for (std::size_t i = 0; i < rep.j_series.size(); ++i) {
      if (rep.j_series[i] <= 0.0) continue;
      const double t = static_cast<double>(i) * params.tau;
      rep.fit_residual = std::max(
          rep.fit_residual, std::abs(std::log(rep.j_series[i]) - (l0 + rep.fitted_rate * t)));
    }
  }
  rep.satisfied = rep.fitted_rate <= rep.bound_rate;
  return rep;
}

ScalarField random_unit_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScalarField f = ScalarField::zero(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      // uniform in (-1, 1), reproducible independent of the standard library
      f.v(i, j) = 2.0 * (((rng() >> 11) + 0.5) * 0x1p-53) - 1.0;
    }
  }
  const double n = norm_l2(f);
  if (n > 0.0) f.v /= n;
  return f;
}

ResidualReport variational_residual(const ScalarField& u_i, const ScalarField& alpha_i,
                                    const ScalarField& u_prev, const ScalarField& alpha_prev,
                                    const Anisotropy& a, const SchemeParams& pr,
                                    const ScalarField& u_org, int n_tests, std::uint64_t seed) {
  const Grid g = u_i.grid;
  const ScalarField da{g, alpha_i.v - alpha_prev.v};
  const ScalarField du{g, u_i.v - u_prev.v};
  const VectorField g_alpha_i = gradient(alpha_i);
  const VectorField g_da = gradient(da);
  const VectorField g_du = gradient(du);
  const VectorField g_ui = gradient(u_i);
  const ScalarField cpl = coupling_field(a, alpha_prev, gradient(u_prev));
  const VectorField gg = anisotropy_grad_field(a, alpha_i, g_ui);
  const VectorField pf = p_flux(g_ui, pr.nu, pr.p);
  const ScalarField fid{g, u_i.v - u_org.v};

  ResidualReport rep;
  for (int t = 0; t < n_tests; ++t) {
    const ScalarField phi = random_unit_field(g, seed + 2 * t);
    const VectorField gphi = gradient(phi);
    const double lhs_alpha = inner_l2(da, phi) / pr.tau + inner_l2(g_alpha_i, gphi) +
                             pr.kappa / pr.tau * inner_l2(g_da, gphi) + inner_l2(cpl, phi);
    rep.res_alpha = std::max(rep.res_alpha, std::abs(lhs_alpha));

    const ScalarField psi = random_unit_field(g, seed + 2 * t + 1);
    const VectorField gpsi = gradient(psi);
    const double lhs_u = inner_l2(du, psi) / pr.tau + inner_l2(pf, gpsi) +
                         pr.mu / pr.tau * inner_l2(g_du, gpsi) +
                         inner_l2(gg, rotate(alpha_i, gpsi)) + pr.lambda * inner_l2(fid, psi);
    rep.res_u = std::max(rep.res_u, std::abs(lhs_u));
  }
  return rep;
}

ResidualReport variational_residual(const Trajectory& traj, int i, int n_tests,
                                    std::uint64_t seed) {
  if (i < 1 || i > traj.steps()) throw std::invalid_argument("variational_residual: bad index");
  return variational_residual(traj.u[i], traj.alpha[i], traj.u[i - 1], traj.alpha[i - 1],
                              traj.aniso, traj.params, traj.u_org, n_tests, seed);
}

double psnr(const ScalarField& f, const ScalarField& reference) {
  const double mse = (f.v - reference.v).square().mean();
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

}  // namespace anisoflow
