#pragma once

#include "anisoflow/grid.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anisoflow {

/// Thrown when an iterative solver exhausts its iteration budget with the
/// residual still above tolerance.
struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, int iterations_, double residual_)
      : std::runtime_error(what), iterations(iterations_), residual(residual_) {}
  int iterations;
  double residual;
};

/// Self-adjoint positive definite operator w.r.t. inner_l2.
struct LinearOperator {
  std::function<ScalarField(const ScalarField&)> apply;
  bool symmetric = true;
};

struct CgResult {
  ScalarField x;
  double residual = 0.0;  // |A x - b| in the l2 field norm
  int iterations = 0;
};

/// Conjugate gradient from the zero initial guess; stops at
/// |A x - b| <= tol * |b|.
CgResult cg_solve(const LinearOperator& A, const ScalarField& b, double tol, int maxit);

/// Smooth convex objective with its l2 gradient field.
struct ConvexObjective {
  std::function<double(const ScalarField&)> value;
  std::function<ScalarField(const ScalarField&)> gradient;
  double lower_bound = 0.0;
};

struct MinimizeResult {
  ScalarField z;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;  // value at init, then after each accepted iterate
};

/// Accelerated gradient descent with backtracking line search and
/// function-value restart; the accepted iterates are monotone in the
/// objective. Stops at |gradient(z)| <= tol * (1 + |gradient(init)|).
MinimizeResult minimize_convex(const ConvexObjective& obj, const ScalarField& init, double tol,
                               int maxit);

}  // namespace anisoflow
