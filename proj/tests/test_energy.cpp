#include "anisoflow/energy.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace anisoflow;

namespace {

SchemeParams params_for_test() {
  SchemeParams pr;
  pr.kappa = 1.3;
  pr.mu = 0.7;
  pr.nu = 0.9;
  pr.lambda = 1.8;
  pr.p = 3.0;
  pr.eps = 0.1;
  return pr;
}

// independent quadrature oracle on a fixed 3x3 instance: forward differences
// and node sums written out directly from their definitions, no grid module
// calls
double hand_energy_3x3(const Eigen::ArrayXXd& u, const Eigen::ArrayXXd& alpha,
                       const Eigen::ArrayXXd& u_org, const Anisotropy& a,
                       const SchemeParams& pr) {
  auto at = [](const Eigen::ArrayXXd& f, int i, int j) {
    return (i >= 0 && i < 3 && j >= 0 && j < 3) ? f(i, j) : 0.0;
  };
  double dirichlet = 0.0, p_term = 0.0, aniso = 0.0, fidelity = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const double ax = at(alpha, i + 1, j) - at(alpha, i, j);
      const double ay = at(alpha, i, j + 1) - at(alpha, i, j);
      dirichlet += 0.5 * (ax * ax + ay * ay);
      const double ux = at(u, i + 1, j) - at(u, i, j);
      const double uy = at(u, i, j + 1) - at(u, i, j);
      p_term += pr.nu / pr.p * std::pow(ux * ux + uy * uy, pr.p / 2.0);
      const double c = std::cos(alpha(i, j)), s = std::sin(alpha(i, j));
      aniso += eval(a, Eigen::Vector2d(c * ux - s * uy, s * ux + c * uy));
      const double r = u(i, j) - u_org(i, j);
      fidelity += 0.5 * pr.lambda * r * r;
    }
  }
  return dirichlet + p_term + aniso + fidelity;
}

}  // namespace

TEST_CASE("energy: zero-field cases") {
  const Grid g{4, 4, 1.0, 1.0};
  const SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  std::mt19937_64 rng(3);
  const ScalarField u_org = testutil::random_field(g, rng);

  const EnergyBreakdown e = energy(ScalarField::zero(g), ScalarField::zero(g), a, pr, u_org);
  CHECK(e.dirichlet_alpha == 0.0);
  CHECK(e.p_term == 0.0);
  CHECK(e.aniso_term == 0.0);
  CHECK(e.total == doctest::Approx(0.5 * pr.lambda * inner_l2(u_org, u_org)).epsilon(1e-14));

  const ScalarField z = ScalarField::zero(g);
  const EnergyBreakdown e0 = energy(z, ScalarField::zero(g), a, pr, z);
  CHECK(e0.total == 0.0);
}

TEST_CASE("energy: breakdown sums to total and matches the 3x3 hand oracle") {
  const Grid g{3, 3, 1.0, 1.0};
  const SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);

  ScalarField u = ScalarField::zero(g);
  u.v(1, 1) = 0.7;
  u.v(0, 2) = 0.2;
  ScalarField alpha = ScalarField::zero(g);
  alpha.v(1, 1) = 0.3;
  alpha.v(2, 0) = -0.4;
  ScalarField u_org = ScalarField::zero(g);
  u_org.v(1, 1) = 1.0;

  const EnergyBreakdown e = energy(u, alpha, a, pr, u_org);
  CHECK(e.total ==
        doctest::Approx(e.dirichlet_alpha + e.p_term + e.aniso_term + e.fidelity).epsilon(1e-14));
  CHECK(e.total == doctest::Approx(hand_energy_3x3(u.v, alpha.v, u_org.v, a, pr)).epsilon(1e-13));
  CHECK(e.dirichlet_alpha >= 0.0);
  CHECK(e.p_term >= 0.0);
  CHECK(e.aniso_term >= 0.0);
  CHECK(e.fidelity >= 0.0);
}

TEST_CASE("energy with euclidean anisotropy is invariant in alpha") {
  const Grid g{6, 6, 1.0, 1.0};
  SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::Euclidean, pr.eps);
  std::mt19937_64 rng(11);
  const ScalarField u = testutil::random_field(g, rng);
  const ScalarField u_org = testutil::random_field(g, rng);
  const double base = energy(u, ScalarField::zero(g), a, pr, u_org).aniso_term;
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField alpha = testutil::random_field(g, rng, 3.0);
    const double rotated = energy(u, alpha, a, pr, u_org).aniso_term;
    CHECK(std::abs(rotated - base) <= 1e-12 * (1.0 + base));
  }
}

TEST_CASE("aniso_term varies by at most lip*|eps - eps'|*|Omega|") {
  const Grid g{8, 8, 0.5, 0.5};
  SchemeParams pr = params_for_test();
  std::mt19937_64 rng(13);
  const ScalarField u = testutil::random_field(g, rng);
  const ScalarField u_org = ScalarField::zero(g);
  const ScalarField alpha = testutil::random_field(g, rng);
  const double e1 = 0.15, e2 = 0.02;
  const Anisotropy a1 = make_anisotropy(AnisoKind::L1, e1);
  const Anisotropy a2 = make_anisotropy(AnisoKind::L1, e2);
  pr.eps = e1;
  const double t1 = energy(u, alpha, a1, pr, u_org).aniso_term;
  pr.eps = e2;
  const double t2 = energy(u, alpha, a2, pr, u_org).aniso_term;
  CHECK(std::abs(t1 - t2) <= a1.lip * std::abs(e1 - e2) * g.measure() + 1e-12);
}

TEST_CASE("grad_energy_u: critical point at u = u_org = 0") {
  const Grid g{5, 5, 1.0, 1.0};
  const SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  const ScalarField z = ScalarField::zero(g);
  std::mt19937_64 rng(17);
  const ScalarField alpha = testutil::random_field(g, rng);
  CHECK(norm_l2(grad_energy_u(z, alpha, a, pr, z)) == 0.0);
}

TEST_CASE("grad_energy_alpha: pure Dirichlet term when u = 0") {
  const Grid g{5, 5, 1.0, 1.0};
  const SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  const ScalarField z = ScalarField::zero(g);
  std::mt19937_64 rng(19);
  const ScalarField alpha = testutil::random_field(g, rng);
  const ScalarField ga = grad_energy_alpha(z, alpha, a, pr);
  const ScalarField lap = laplacian0(alpha);
  CHECK((ga.v + lap.v).abs().maxCoeff() <= 1e-14 * (1.0 + lap.v.abs().maxCoeff()));
  CHECK(norm_l2(grad_energy_alpha(z, z, a, pr)) == 0.0);
}

TEST_CASE("energy gradients match directional finite differences") {
  const Grid g{16, 16, 1.0, 1.0};
  const SchemeParams pr = params_for_test();
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  std::mt19937_64 rng(23);
  const ScalarField u = testutil::random_field(g, rng);
  const ScalarField alpha = testutil::random_field(g, rng);
  const ScalarField u_org = testutil::random_field(g, rng);

  const ScalarField gu = grad_energy_u(u, alpha, a, pr, u_org);
  const ScalarField galpha = grad_energy_alpha(u, alpha, a, pr);
  const double delta = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField dir = testutil::random_field(g, rng);

    const ScalarField up{g, u.v + delta * dir.v};
    const ScalarField um{g, u.v - delta * dir.v};
    const double fd_u = (energy(up, alpha, a, pr, u_org).total -
                         energy(um, alpha, a, pr, u_org).total) /
                        (2.0 * delta);
    const double an_u = inner_l2(gu, dir);
    CHECK(std::abs(fd_u - an_u) <= 1e-5 * (1.0 + std::abs(an_u)));

    const ScalarField ap{g, alpha.v + delta * dir.v};
    const ScalarField am{g, alpha.v - delta * dir.v};
    const double fd_a = (energy(u, ap, a, pr, u_org).total -
                         energy(u, am, a, pr, u_org).total) /
                        (2.0 * delta);
    const double an_a = inner_l2(galpha, dir);
    CHECK(std::abs(fd_a - an_a) <= 1e-5 * (1.0 + std::abs(an_a)));
  }
}

TEST_CASE("params validation") {
  SchemeParams pr;
  pr.p = 2.0;
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
  pr = SchemeParams{};
  pr.tau = 0.0;
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
  pr = SchemeParams{};
  pr.lambda = -1.0;
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
  CHECK_NOTHROW(SchemeParams{}.validate());
}
