#pragma once

#include "vexlab/descent.hpp"
#include "vexlab/exponent_weight.hpp"
#include "vexlab/modular_norm.hpp"
#include "vexlab/periodic_function.hpp"
#include "vexlab/trig_polynomial.hpp"

#include <optional>

namespace vexlab {

struct KResult {
  double value = 0.0;
  TrigPolynomial<double> minimizer;
  int degree = 0;                           // M, the degree of the trial polynomials
  double norm_bound = 0.0;                  // ||f||, from g = 0
  std::optional<double> derivative_bound;   // δ^r ||f^(r)|| when f is smooth
  int iterations = 0;
  bool converged = false;
  std::optional<double> doubled_value;      // K recomputed with degree 2M
  bool accepted = true;                     // doubling moved K by less than 1%
};

/// K_r(f, δ) = inf over g of degree M of ||f - g|| + δ^r ||g^(r)||.
/// M = 0 picks max(4r, 2 * resolution(f)), capped at 128.
KResult k_functional(const PeriodicFunction& f, double delta, int r, const ExponentFunction& p, const Weight& w,
                     int M = 0, const SolverOptions& opts = {}, bool check_doubling = false);

/// Same on a prepared space; `samples` are f on space.nodes().
KResult k_functional(const Eigen::ArrayXd& samples, double delta, int r, const ModularSpace& space, int M,
                     const SolverOptions& opts = {});

/// Highest frequency carrying more than 1e-13 of the largest coefficient.
int resolution(const PeriodicFunction& f);

/// A_δ^r = I - (I - 𝔑_δ^r)^r as a multiplier. Non-polynomial inputs are
/// sampled on `grid` points.
PeriodicFunction realization_operator(const PeriodicFunction& f, double delta, int r, int grid = 4096);

}  // namespace vexlab
