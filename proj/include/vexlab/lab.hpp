#pragma once

// Measures the constants of the direct, inverse and boundedness inequalities
// over a catalog of functions and spaces. Each suite returns a SuiteReport
// whose cases are sorted by id.

#include "vexlab/catalog.hpp"
#include "vexlab/descent.hpp"
#include "vexlab/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vexlab {

/// Empty vectors select the suite's own defaults.
struct LabOptions {
  int grid = 1024;                    // sampling grid for catalog functions
  int jobs = 1;
  std::uint64_t seed = 20240601;      // random polynomials of the Bernstein suite
  SolverOptions solver{1e-10, 400, 200, 1e-12, 1024};

  std::vector<int> n;
  std::vector<int> r;
  std::vector<int> alpha;
  std::vector<double> delta;
  std::vector<double> sigma;
  std::vector<std::string> functions;  // catalog ids
  std::vector<std::string> exponents;
  std::vector<std::string> weights;

  /// ConfigError naming the field.
  void validate() const;
};

std::vector<std::string> suite_names();

/// Dispatches on the name; ConfigError for unknown suites.
SuiteReport run_suite(const std::string& name, const LabOptions& opts = {});

/// ||f^(α) - D_{n,r} f^(α)|| n^r / ||f^(α+r)|| and E_n(f^(α)) n^r / E_n(f^(α+r)).
/// Passes when every series has log-log slope within ±0.15 and max/min below 10.
SuiteReport run_jackson_suite(const LabOptions& opts = {});

/// ||T^(α)|| (2 sin(nh/2))^α / (n^α ||(T_h - I)^α T||) for random T of degree n, h = pi/n.
/// Passes when the largest ratio per n drifts by less than 2x across n.
SuiteReport run_bernstein_suite(const LabOptions& opts = {});

/// Jackson-Stechkin error, E_n n^r and the geometric mean of E_1..E_n, each
/// over K_m at 1/n.
SuiteReport run_kfunc_jackson_suite(const LabOptions& opts = {});

/// Four inverse-type bounds: K against sums of E_ν, the Marchaud inequality,
/// derivative best approximation, and K of the derivative.
SuiteReport run_inverse_suite(const LabOptions& opts = {});

/// Simultaneous approximation by best approximants and by W_n.
SuiteReport run_simultaneous_suite(const LabOptions& opts = {});

/// Lacunary f_σ: slopes of E_n against n and of Ω_{r̄} against δ.
SuiteReport run_lipschitz_suite(const LabOptions& opts = {});

/// Operator ratios ||A f|| / ||f|| at grid N and 2N.
SuiteReport run_boundedness_suite(const LabOptions& opts = {});

/// Ω_r(f, δ) / K_r(f, δ) and the realization A_δ^r.
SuiteReport run_realization_suite(const LabOptions& opts = {});

/// Norm axioms, Hölder, embedding, duality and operator identities.
SuiteReport run_invariants_suite(const LabOptions& opts = {});

}  // namespace vexlab
