#pragma once

// Test functions, exponents and weights shared by the inequality suites.

#include "vexlab/exponent_weight.hpp"
#include "vexlab/periodic_function.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace vexlab {

struct CatalogFunction {
  std::string id;
  PeriodicFunction f;

  /// f^(r) on the n-point midpoint grid: exact for polynomials and attached
  /// derivatives, spectral otherwise.
  Eigen::ArrayXd derivative_samples(int n, int r) const;
  /// Whether derivative_samples(., r) avoids spectral differentiation.
  bool exact_derivative(int r) const;
};

/// exp_cos = exp(cos x), trig_3_7 = cos 3x + 0.5 sin 7x,
/// smoothed = (sin^2(x/2) + 1/4)^(3/4), an analytic stand-in for |sin(x/2)|^(3/2).
std::vector<CatalogFunction> smooth_functions();

/// Σ_{j=0}^{J} 2^{-σj} cos(2^j x).
CatalogFunction lacunary(double sigma, int J);

/// Smallest J with the L2 tail sqrt(pi Σ_{j>J} 4^{-σj}) below tol, capped at 16.
int lacunary_terms(double sigma, double tol = 1e-8);

/// One of the ids above, or "lacunary(sigma=S,J=J)".
CatalogFunction find_function(const std::string& id);

struct CatalogSpace {
  std::string exponent_id;
  std::string weight_id;
  ExponentFunction p;
  Weight w;

  std::string id() const { return "p=" + exponent_id + "/w=" + weight_id; }
};

std::vector<std::string> catalog_exponents();  // "2", "2+cos(x)", "1.2+0.5*abs(sin(x))"
std::vector<std::string> catalog_weights();    // "1", "power_weight(gamma=0.5)", "power_weight(gamma=-0.3)"

/// |sin(x/2)|^γ belongs to A_{p(.)} exactly when -1 < γ < p(0) - 1.
/// Weights other than powers are accepted as given.
bool admissible(const ExponentFunction& p, const Weight& w);

CatalogSpace make_space(const std::string& exponent_id, const std::string& weight_id);

/// All admissible pairs from the given ids, in the order exponents x weights.
std::vector<CatalogSpace> admissible_spaces(const std::vector<std::string>& exponents,
                                            const std::vector<std::string>& weights);

/// The eight admissible pairs of the default catalog.
std::vector<CatalogSpace> catalog_spaces();

/// Three pairs used by the suites that solve for best approximations:
/// (2, 1), (2+cos x, |sin(x/2)|^0.5), (1.2+0.5|sin x|, |sin(x/2)|^-0.3).
std::vector<CatalogSpace> solver_spaces();

}  // namespace vexlab
