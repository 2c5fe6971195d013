#pragma once

// Derivative-free minimization of sums of norms of affine maps,
//   F(c) = Σ_j s_j || b_j - L_j c ||,
// by cyclic coordinate descent with a Brent line search per direction. A
// limited-memory quasi-Newton phase on the analytic norm gradient runs first;
// the coordinate cycles then polish the result and decide convergence.

#include "vexlab/modular_norm.hpp"

#include <Eigen/Core>

#include <vector>

namespace vexlab {

struct DescentTerm {
  const ModularSpace* space = nullptr;
  Eigen::ArrayXd target;    // b_j on the space's nodes
  Eigen::MatrixXd columns;  // L_j applied to each coordinate direction
  double scale = 1.0;
};

struct SolverOptions {
  double tol = 1e-10;  // stop once a cycle improves F by less than tol (1 + F)
  int max_cycles = 400;
  int quasi_newton_iterations = 200;  // 0 disables the gradient phase
  double norm_tol = 1e-12;
  int grid = 1024;     // smallest sampling grid for problems built from functions
};

struct DescentResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  int cycles = 0;
  double step = 0.0;  // largest line-search bracket in the last cycle
  bool converged = false;
};

/// F at x.
double descent_objective(const std::vector<DescentTerm>& terms, const Eigen::VectorXd& x, double norm_tol = 1e-12);

/// Minimizes F from x0. Each cycle searches towards every anchor (points where
/// some term is not differentiable, such as its exact fit), then visits every
/// coordinate, the extra directions, and the current iterate itself (a rescaling).
DescentResult minimize_norm_sum(const std::vector<DescentTerm>& terms, Eigen::VectorXd x0,
                                const std::vector<Eigen::VectorXd>& extra_directions = {},
                                const SolverOptions& opts = {}, const std::vector<Eigen::VectorXd>& anchors = {});

/// Columns cos(kx)/sin(kx) in packed order (1/2, cos x, sin x, ...) of the r-th
/// derivative, sampled at x.
Eigen::MatrixXd trig_basis(const Eigen::ArrayXd& x, int degree, int derivative = 0);

}  // namespace vexlab
