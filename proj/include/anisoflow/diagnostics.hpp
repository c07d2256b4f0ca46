#pragma once

#include "anisoflow/scheme.hpp"

#include <cstdint>
#include <vector>

namespace anisoflow {

/// Result of the per-step energy-inequality check. defect_i is the amount by
/// which step i violates
///   (1/2tau)|da|^2 + (kappa/2tau)|grad da|^2 + (1/tau)|du|^2
///   + (mu/tau)|grad du|^2 + E_i <= E_{i-1},
/// recomputed from the stored states (nonpositive means the inequality
/// holds). The global defects telescope the same inequality between every
/// pair of recorded indices s < t.
struct DissipationReport {
  std::vector<double> step_defects;
  double max_step_defect = 0.0;
  double max_global_defect = 0.0;
  double max_energy_increase = 0.0;  // max over pairs s < t of E_t - E_s
  double slack = 0.0;
  bool pass = false;
};

DissipationReport dissipation_check(const Trajectory& traj, double slack);

/// Maximum-principle violations over the whole trajectory: largest values of
/// [-u]^+ and [u - 1]^+ across all states and nodes.
struct RangeReport {
  double max_neg = 0.0;
  double max_over = 0.0;
};

RangeReport range_check(const Trajectory& traj);

/// Continuous-dependence diagnostic: runs two trajectories from the given
/// initial pairs, tracks J(t_i) = |du|^2 + mu |grad du|^2 + |da|^2 +
/// kappa |grad da|^2, fits the exponential growth rate of J by least squares
/// on log J, and compares with the Gronwall-type bound rate
/// c_star * (1 + sup_i |grad u_1(t_i)|_{L^p})^2.
struct DependenceReport {
  std::vector<double> j_series;
  double j0 = 0.0;
  double fitted_rate = 0.0;
  double fit_residual = 0.0;  // max |log J_i - (log J_0 + fitted_rate t_i)| over fitted points
  double bound_rate = 0.0;
  bool satisfied = false;  // fitted_rate <= bound_rate
};

DependenceReport dependence_check(const ScalarField& u0a, const ScalarField& alpha0a,
                                  const ScalarField& u0b, const ScalarField& alpha0b,
                                  const Anisotropy& a, const SchemeParams& params, int m,
                                  const ScalarField& u_org, double c_star);

/// J evaluated on a pair of states (all four terms squared).
double dependence_j(const ScalarField& u1, const ScalarField& alpha1, const ScalarField& u2,
                    const ScalarField& alpha2, const SchemeParams& params);

/// Evaluates the two per-step variational identities of a consecutive state
/// pair against n_tests seeded pseudo-random unit test fields; returns the
/// maximum absolute values (first the orientation identity, then the
/// intensity one).
struct ResidualReport {
  double res_alpha = 0.0;
  double res_u = 0.0;
};

ResidualReport variational_residual(const ScalarField& u_i, const ScalarField& alpha_i,
                                    const ScalarField& u_prev, const ScalarField& alpha_prev,
                                    const Anisotropy& a, const SchemeParams& params,
                                    const ScalarField& u_org, int n_tests, std::uint64_t seed);

/// Convenience overload for step i of a trajectory (1-based).
ResidualReport variational_residual(const Trajectory& traj, int i, int n_tests,
                                    std::uint64_t seed);

/// Seeded uniform field with |f|_{L^2} = 1 (reproducible across platforms).
ScalarField random_unit_field(const Grid& g, std::uint64_t seed);

/// Peak signal-to-noise ratio of f against the reference, for intensities
/// in [0, 1].
double psnr(const ScalarField& f, const ScalarField& reference);

}  // namespace anisoflow
