#include "anisoflow/solvers.hpp"

#include "anisoflow/energy.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace anisoflow;

TEST_CASE("cg_solve: identity and scalar operators converge in one iteration") {
  const Grid g{4, 4, 1.0, 1.0};
  std::mt19937_64 rng(3);
  const ScalarField b = testutil::random_field(g, rng);

  const LinearOperator id{[](const ScalarField& f) { return f; }, true};
  const CgResult r1 = cg_solve(id, b, 1e-12, 10);
  CHECK(r1.iterations == 1);
  CHECK((r1.x.v - b.v).abs().maxCoeff() <= 1e-12);

  const double tau = 0.5;
  const LinearOperator scaled{
      [tau](const ScalarField& f) { return ScalarField{f.grid, f.v / tau}; }, true};
  const CgResult r2 = cg_solve(scaled, b, 1e-12, 10);
  CHECK(r2.iterations == 1);
  CHECK((r2.x.v - tau * b.v).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("cg_solve: zero rhs short-circuits") {
  const Grid g{3, 3, 1.0, 1.0};
  const LinearOperator id{[](const ScalarField& f) { return f; }, true};
  const CgResult r = cg_solve(id, ScalarField::zero(g), 1e-12, 10);
  CHECK(r.iterations == 0);
  CHECK(norm_l2(r.x) == 0.0);
}

TEST_CASE("cg_solve: I + (-laplacian0) on 3x3 against a dense LU oracle") {
  const Grid g{3, 3, 1.0, 1.0};
  const auto apply = [](const ScalarField& f) {
    return ScalarField{f.grid, f.v - laplacian0(f).v};
  };
  ScalarField b = ScalarField::zero(g);
  b.v(1, 1) = 1.0;

  const Eigen::MatrixXd M = testutil::dense_operator(g, apply);
  const Eigen::VectorXd exact = Eigen::FullPivLU<Eigen::MatrixXd>(M).solve(testutil::flatten(b));

  const CgResult r = cg_solve(LinearOperator{apply, true}, b, 1e-14, 100);
  CHECK((testutil::flatten(r.x) - exact).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("cg_solve: reaches tolerance within n iterations on a 16-DOF system") {
  const Grid g{4, 4, 1.0, 1.0};
  const LinearOperator A{
      [](const ScalarField& f) { return ScalarField{f.grid, f.v - laplacian0(f).v}; }, true};
  std::mt19937_64 rng(7);
  const ScalarField b = testutil::random_field(g, rng);
  const CgResult r = cg_solve(A, b, 1e-12, 16);
  CHECK(r.iterations <= 16);
  CHECK(r.residual <= 1e-12 * norm_l2(b));
}

TEST_CASE("cg_solve: throws NonConvergence when the budget is too small") {
  const Grid g{8, 8, 1.0, 1.0};
  const LinearOperator A{
      [](const ScalarField& f) { return ScalarField{f.grid, f.v - 100.0 * laplacian0(f).v}; },
      true};
  std::mt19937_64 rng(11);
  const ScalarField b = testutil::random_field(g, rng);
  CHECK_THROWS_AS(cg_solve(A, b, 1e-14, 2), NonConvergence);
}

TEST_CASE("minimize_convex: quadratic with known minimizer") {
  const Grid g{5, 5, 1.0, 1.0};
  std::mt19937_64 rng(13);
  const ScalarField c = testutil::random_field(g, rng);
  ConvexObjective obj;
  obj.value = [&](const ScalarField& z) {
    const ScalarField d{g, z.v - c.v};
    return 0.5 * inner_l2(d, d);
  };
  obj.gradient = [&](const ScalarField& z) { return ScalarField{g, z.v - c.v}; };

  const MinimizeResult r = minimize_convex(obj, ScalarField::zero(g), 1e-10, 1000);
  CHECK((r.z.v - c.v).abs().maxCoeff() <= 1e-8);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
    CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] + 1e-15);
  }
}

TEST_CASE("minimize_convex: optimal init returns immediately") {
  const Grid g{3, 3, 1.0, 1.0};
  std::mt19937_64 rng(17);
  const ScalarField c = testutil::random_field(g, rng);
  ConvexObjective obj;
  obj.value = [&](const ScalarField& z) {
    const ScalarField d{g, z.v - c.v};
    return 0.5 * inner_l2(d, d);
  };
  obj.gradient = [&](const ScalarField& z) { return ScalarField{g, z.v - c.v}; };
  const MinimizeResult r = minimize_convex(obj, c, 1e-10, 100);
  CHECK(r.iterations == 0);
  CHECK((r.z.v == c.v).all());
}

TEST_CASE("minimize_convex: throws NonConvergence on an exhausted budget") {
  const Grid g{4, 4, 1.0, 1.0};
  std::mt19937_64 rng(19);
  const ScalarField c = testutil::random_field(g, rng);
  ConvexObjective obj;
  obj.value = [&](const ScalarField& z) {
    const ScalarField d{g, z.v - c.v};
    return 5000.0 * inner_l2(d, d);
  };
  obj.gradient = [&](const ScalarField& z) { return ScalarField{g, 10000.0 * (z.v - c.v)}; };
  CHECK_THROWS_AS(minimize_convex(obj, ScalarField::zero(g), 1e-14, 1), NonConvergence);
}

namespace {

// the full intensity-step objective on a given grid
ConvexObjective step_objective(const Grid& g, const ScalarField& u_prev,
                               const ScalarField& alpha, const Anisotropy& a,
                               const SchemeParams& pr, const ScalarField& u_org) {
  ConvexObjective obj;
  obj.value = [=](const ScalarField& z) {
    const ScalarField d{g, z.v - u_prev.v};
    const VectorField gz = gradient(z);
    const VectorField gd = gradient(d);
    return 0.5 / pr.tau * inner_l2(d, d) + p_integral(gz, pr.nu, pr.p) +
           0.5 * pr.mu / pr.tau * inner_l2(gd, gd) + anisotropy_integral(a, alpha, gz) +
           0.5 * pr.lambda * inner_l2(ScalarField{g, z.v - u_org.v},
                                      ScalarField{g, z.v - u_org.v});
  };
  obj.gradient = [=](const ScalarField& z) {
    const VectorField gz = gradient(z);
    const ScalarField d{g, z.v - u_prev.v};
    VectorField flux = anisotropy_flux(a, alpha, gz);
    const VectorField pf = p_flux(gz, pr.nu, pr.p);
    const VectorField gd = gradient(d);
    flux.x += pf.x + pr.mu / pr.tau * gd.x;
    flux.y += pf.y + pr.mu / pr.tau * gd.y;
    return ScalarField{g, d.v / pr.tau - divergence(flux).v + pr.lambda * (z.v - u_org.v)};
  };
  return obj;
}

}  // namespace

TEST_CASE("minimize_convex: 1-node step objective matches golden-section search") {
  const Grid g{1, 1, 1.0, 1.0};
  SchemeParams pr;
  pr.tau = 0.4;
  pr.mu = 0.8;
  pr.nu = 1.2;
  pr.lambda = 2.0;
  pr.p = 3.0;
  pr.eps = 0.1;
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  const ScalarField u_prev = ScalarField::constant(g, 0.6);
  const ScalarField alpha = ScalarField::constant(g, 0.5);
  const ScalarField u_org = ScalarField::constant(g, 0.9);

  const ConvexObjective obj = step_objective(g, u_prev, alpha, a, pr, u_org);
  const MinimizeResult r = minimize_convex(obj, ScalarField::zero(g), 1e-12, 5000);

  const auto scalar_obj = [&](double z) { return obj.value(ScalarField::constant(g, z)); };
  const double oracle = testutil::golden_section(scalar_obj, -3.0, 3.0, 400);
  CHECK(std::abs(r.z.v(0, 0) - oracle) <= 1e-8);
}

TEST_CASE("minimize_convex: unique minimizer reached from different inits") {
  const Grid g{4, 4, 1.0, 1.0};
  SchemeParams pr;
  pr.tau = 0.1;  // strong convexity >= 1/tau keeps the 10*tol bound honest
  pr.eps = 0.1;
  const Anisotropy a = make_anisotropy(AnisoKind::L1, pr.eps);
  std::mt19937_64 rng(23);
  const ScalarField u_prev = ScalarField::zero(g);
  const ScalarField alpha = testutil::random_field(g, rng);
  const ScalarField u_org = testutil::random_field(g, rng, 0.5);
  const ConvexObjective obj = step_objective(g, u_prev, alpha, a, pr, u_org);

  const double tol = 1e-8;
  const MinimizeResult r1 = minimize_convex(obj, testutil::random_field(g, rng, 0.5), tol, 20000);
  const MinimizeResult r2 = minimize_convex(obj, testutil::random_field(g, rng, 0.5), tol, 20000);
  CHECK(norm_l2(ScalarField{g, r1.z.v - r2.z.v}) <= 10.0 * tol);
}
