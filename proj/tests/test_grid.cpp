#include "anisoflow/grid.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace anisoflow;

TEST_CASE("gradient: zero field and linearity") {
  const Grid g{4, 4, 0.5, 0.25};
  const VectorField gz = gradient(ScalarField::zero(g));
  CHECK(gz.x.abs().maxCoeff() == 0.0);
  CHECK(gz.y.abs().maxCoeff() == 0.0);

  std::mt19937_64 rng(11);
  const ScalarField f = testutil::random_field(g, rng);
  const VectorField gf = gradient(f);
  const VectorField gcf = gradient(ScalarField{g, 2.5 * f.v});
  CHECK((gcf.x - 2.5 * gf.x).abs().maxCoeff() <= 1e-14);
  CHECK((gcf.y - 2.5 * gf.y).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("gradient: hand-enumerated stencil for the 3x3 center bump") {
  // forward differences, h = 1: only the edge into the bump and the edge out
  // of it are nonzero; the right/top boundary edges see the zero extension
  const Grid g{3, 3, 1.0, 1.0};
  ScalarField f = ScalarField::zero(g);
  f.v(1, 1) = 1.0;
  const VectorField gf = gradient(f);

  Eigen::ArrayXXd ex = Eigen::ArrayXXd::Zero(3, 3);
  ex(0, 1) = 1.0;   // f(1,1) - f(0,1)
  ex(1, 1) = -1.0;  // f(2,1) - f(1,1)
  Eigen::ArrayXXd ey = Eigen::ArrayXXd::Zero(3, 3);
  ey(1, 0) = 1.0;
  ey(1, 1) = -1.0;
  CHECK((gf.x - ex).abs().maxCoeff() == 0.0);
  CHECK((gf.y - ey).abs().maxCoeff() == 0.0);
}

TEST_CASE("divergence: zero, and the transposed single-edge stencil") {
  const Grid g{3, 3, 1.0, 1.0};
  CHECK(divergence(VectorField::zero(g)).v.abs().maxCoeff() == 0.0);

  VectorField v = VectorField::zero(g);
  v.x(1, 1) = 1.0;  // unit flux on the edge leaving node (1,1) in x
  const ScalarField d = divergence(v);
  Eigen::ArrayXXd expect = Eigen::ArrayXXd::Zero(3, 3);
  expect(1, 1) = 1.0;
  expect(2, 1) = -1.0;
  CHECK((d.v - expect).abs().maxCoeff() == 0.0);
}

TEST_CASE("adjointness <grad f, v> = -<f, div v> on random pairs") {
  for (const Grid g : {Grid{3, 3, 1.0, 1.0}, Grid{5, 5, 0.3, 0.7}, Grid{16, 16, 1.0, 1.0}}) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const ScalarField f = testutil::random_field(g, rng);
      const VectorField v = testutil::random_vector_field(g, rng);
      const double a = inner_l2(gradient(f), v);
      const double b = inner_l2(f, divergence(v));
      const double scale = norm_l2(gradient(f)) * norm_l2(v) + 1e-300;
      CHECK(std::abs(a + b) / scale <= 1e-12);
    }
  }
}

TEST_CASE("laplacian0: 5-point values at the center bump and composition") {
  const Grid g{3, 3, 1.0, 1.0};
  ScalarField f = ScalarField::zero(g);
  f.v(1, 1) = 1.0;
  const ScalarField lap = laplacian0(f);
  CHECK(lap.v(1, 1) == -4.0);
  CHECK(lap.v(0, 1) == 1.0);
  CHECK(lap.v(2, 1) == 1.0);
  CHECK(lap.v(1, 0) == 1.0);
  CHECK(lap.v(1, 2) == 1.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField r = testutil::random_field(Grid{7, 4, 0.5, 1.5}, rng);
    const ScalarField a = laplacian0(r);
    const ScalarField b = divergence(gradient(r));
    CHECK((a.v == b.v).all());  // bit-for-bit, by definition
  }
}

TEST_CASE("-laplacian0 is symmetric positive definite") {
  const Grid g{6, 5, 0.8, 1.1};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField f = testutil::random_field(g, rng);
    const ScalarField h = testutil::random_field(g, rng);
    const double sym = inner_l2(laplacian0(f), h) - inner_l2(f, laplacian0(h));
    CHECK(std::abs(sym) <= 1e-12 * (norm_l2(f) * norm_l2(h) + 1.0));
    const double quad = -inner_l2(laplacian0(f), f);
    CHECK(quad == doctest::Approx(inner_l2(gradient(f), gradient(f))).epsilon(1e-12));
    if (norm_l2(f) > 0) CHECK(quad > 0.0);
  }
}

TEST_CASE("rotate: identity, quarter turn, half turn") {
  const Grid g{4, 3, 1.0, 1.0};
  std::mt19937_64 rng(3);
  const VectorField v = testutil::random_vector_field(g, rng);

  const VectorField id = rotate(0.0, v);
  CHECK((id.x - v.x).abs().maxCoeff() == 0.0);

  VectorField e1 = VectorField::zero(g);
  e1.x.setConstant(1.0);
  const VectorField q = rotate(std::numbers::pi / 2, e1);
  CHECK(q.x.abs().maxCoeff() <= 1e-15);
  CHECK((q.y - 1.0).abs().maxCoeff() <= 1e-15);

  const VectorField h = rotate(std::numbers::pi, v);
  CHECK((h.x + v.x).abs().maxCoeff() <= 1e-15 * (1.0 + v.x.abs().maxCoeff()));
  CHECK((h.y + v.y).abs().maxCoeff() <= 1e-15 * (1.0 + v.y.abs().maxCoeff()));
}

TEST_CASE("rotate preserves the pointwise norm") {
  const Grid g{8, 8, 1.0, 1.0};
  std::mt19937_64 rng(17);
  const ScalarField alpha = testutil::random_field(g, rng, 3.0);
  const VectorField v = testutil::random_vector_field(g, rng);
  const VectorField rv = rotate(alpha, v);
  const Eigen::ArrayXXd n0 = (v.x.square() + v.y.square()).sqrt();
  const Eigen::ArrayXXd n1 = (rv.x.square() + rv.y.square()).sqrt();
  CHECK((n0 - n1).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("rotate(alpha + pi/2) is the alpha-derivative of rotate(alpha)") {
  const Grid g{5, 5, 1.0, 1.0};
  std::mt19937_64 rng(29);
  const ScalarField alpha = testutil::random_field(g, rng, 2.0);
  const VectorField v = testutil::random_vector_field(g, rng);
  const double h = 1e-6;
  const VectorField plus = rotate(ScalarField{g, alpha.v + h}, v);
  const VectorField minus = rotate(ScalarField{g, alpha.v - h}, v);
  const VectorField fd{g, (plus.x - minus.x) / (2 * h), (plus.y - minus.y) / (2 * h)};
  const VectorField an = rotate(ScalarField{g, alpha.v + std::numbers::pi / 2}, v);
  CHECK((fd.x - an.x).abs().maxCoeff() <= 1e-8);
  CHECK((fd.y - an.y).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("inner_l2: trivia and Cauchy-Schwarz") {
  const Grid g{3, 4, 0.5, 2.0};
  std::mt19937_64 rng(31);
  const ScalarField f = testutil::random_field(g, rng);
  CHECK(inner_l2(f, ScalarField::zero(g)) == 0.0);

  ScalarField one_node = ScalarField::zero(g);
  one_node.v(1, 2) = 1.0;
  CHECK(inner_l2(one_node, one_node) == doctest::Approx(g.hx * g.hy));

  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField a = testutil::random_field(g, rng);
    const ScalarField b = testutil::random_field(g, rng);
    CHECK(std::abs(inner_l2(a, b)) <= norm_l2(a) * norm_l2(b) * (1.0 + 1e-12));
  }
}
