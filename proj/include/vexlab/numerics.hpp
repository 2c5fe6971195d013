#pragma once

#include <Eigen/Core>

#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace vexlab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Interval {
  double lo = -pi;
  double hi = pi;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool interior(double x) const { return lo < x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr Interval torus{-pi, pi};

struct QuadratureConfig {
  enum class Rule { trapezoid, gauss_legendre };

  Rule rule = Rule::trapezoid;
  int panels = 64;
  int refinement_factor = 2;
  double tol = 1e-10;
  bool split_singular = true;
  int order = 10;  // Gauss-Legendre points per panel
  int max_refinements = 12;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double achieved_tol = 0.0;
  int refinements = 0;
  long evaluations = 0;
};

/// Quadrature nodes and weights for Lebesgue measure on some set.
struct NodeSet {
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;
};

/// Gauss-Legendre rule on [-1, 1]. Cached; safe to call concurrently.
const NodeSet& gauss_legendre(int order);

/// Composite Gauss-Legendre on [a, b] with geometric grading towards singular ends.
/// `layers` graded panels of ratio 1/2 sit against each flagged endpoint.
NodeSet graded_panels(double a, double b, bool singular_a, bool singular_b, int uniform_panels,
                      int layers, int order);

/// Nodes for integrating over B, split at the given points (assumed to lie in B)
/// and graded towards them. Refinement level 0 is the coarsest.
NodeSet discretize(Interval B, std::span<const double> singular_points, const QuadratureConfig& q,
                   int level);

/// Integrates f over B, refining until two successive estimates agree to q.tol
/// relative to max(|I|, ∫|f|). Throws ConvergenceError otherwise.
QuadResult integrate(const std::function<double(double)>& f, Interval B,
                     std::span<const double> singular_points, const QuadratureConfig& q);

/// x_j = -pi + (j + 1/2) 2pi/n.
Eigen::ArrayXd midpoint_grid(int n);

bool is_power_of_two(long n);

/// Smallest power of two >= n.
int next_power_of_two(long n);

/// Brent's minimizer on [a, b] (golden section with parabolic steps).
struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};
MinimizeResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_evaluations = 200, double abs_tol = 0.0);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Callers write into
/// per-index slots, so results never depend on scheduling.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace vexlab
