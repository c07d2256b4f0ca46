#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace anisoflow {

enum class AnisoKind { L1, Euclidean, Kgon };

/// Convex, even anisotropy gamma vanishing only at the origin, together with
/// its smooth approximation gamma_eps (eps > 0) and the derivative constants
/// the stability threshold needs.
///
/// gamma is the support function of a centrally symmetric convex body P
/// ("dual body"): the square [-1,1]^2 for L1, the unit disc for Euclidean,
/// and a regular polygon of unit circumradius for Kgon. gamma_eps is the
/// Moreau envelope of gamma with parameter eps, which for L1 coincides with
/// per-component Huber smoothing. Its gradient is proj_P(w / eps), so
/// |grad gamma_eps| <= lip everywhere and gamma_eps -> gamma uniformly at
/// rate lip * eps.
struct Anisotropy {
  AnisoKind kind = AnisoKind::L1;
  int k = 0;           // polygon parameter, Kgon only
  double eps = 0.0;    // smoothing parameter; 0 means the nonsmooth original
  double lip = 0.0;    // |grad gamma|_{L^inf}
  double hess_bound = 0.0;  // sup-norm of the second derivative; finite only for eps > 0
  std::vector<Eigen::Vector2d> vertices;  // dual body vertices, Kgon only
};

/// Builds an anisotropy. Rejects eps < 0 and kgon with k < 3. For odd k the
/// polygon is centrally symmetrized (evenness of gamma is required), giving
/// the regular 2k-gon.
Anisotropy make_anisotropy(AnisoKind kind, double eps, int k = 0);

/// Parses "l1", "euclidean", or "kgon:<k>".
Anisotropy make_anisotropy(const std::string& name, double eps);
std::string kind_name(const Anisotropy& a);

/// gamma_eps(w) (or gamma(w) when eps == 0). Nonnegative, even, convex,
/// zero exactly at the origin.
double eval(const Anisotropy& a, const Eigen::Vector2d& w);

/// grad gamma_eps(w) = proj_P(w / eps). Rejects eps == 0.
Eigen::Vector2d grad(const Anisotropy& a, const Eigen::Vector2d& w);

/// grad gamma_eps(R(alpha) w) . R(alpha + pi/2) w, the exact derivative of
/// alpha |-> gamma_eps(R(alpha) w).
double alpha_coupling(const Anisotropy& a, double alpha, const Eigen::Vector2d& w);

/// 2 (1 + lip + hess_bound)^2 (1 + |w|^2); dominates the second
/// alpha-derivative of gamma_eps(R(alpha) w).
double second_alpha_bound(const Anisotropy& a, const Eigen::Vector2d& w);
double second_alpha_bound_formula(double grad_w1inf, double w_norm2);

/// Projection onto the dual body P (exposed for property tests).
Eigen::Vector2d dual_body_project(const Anisotropy& a, const Eigen::Vector2d& q);

}  // namespace anisoflow
