#pragma once

#include "vexlab/expr.hpp"
#include "vexlab/numerics.hpp"
#include "vexlab/trig_polynomial.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vexlab {

enum class Smoothness { smooth, piecewise, singular };

/// A 2pi-periodic real function: an expression, samples on the midpoint grid,
/// a trigonometric polynomial, or an arbitrary callable. Cheap to copy.
class PeriodicFunction {
 public:
  enum class Source { expression, samples, trig, callable };

  PeriodicFunction();  // the zero polynomial

  /// `derivatives[i]` is the exact (i+1)-th derivative, when known.
  static PeriodicFunction expression(expr::Expr e, Smoothness s = Smoothness::smooth,
                                     std::vector<double> singular_points = {},
                                     std::vector<expr::Expr> derivatives = {});
  static PeriodicFunction parse(std::string_view text, Smoothness s = Smoothness::smooth,
                                std::vector<double> singular_points = {});
  /// Length must be a power of two, at least 16.
  static PeriodicFunction samples(Eigen::ArrayXd values, Smoothness s = Smoothness::smooth);
  static PeriodicFunction trig(TrigPolynomial<double> t);
  static PeriodicFunction callable(std::function<double(double)> f, Smoothness s = Smoothness::smooth,
                                   std::vector<double> singular_points = {});
  static PeriodicFunction constant(double c);

  Source source() const;
  Smoothness smoothness() const;
  const std::vector<double>& singular_points() const;

  /// Evaluates at x reduced into [-pi, pi).
  double operator()(double x) const;

  /// Values on the n-point midpoint grid.
  Eigen::ArrayXd sample(int n) const;

  const std::optional<expr::Expr>& expression_source() const;
  const Eigen::ArrayXd* sample_source() const;
  const TrigPolynomial<double>* trig_source() const;
  const std::vector<expr::Expr>& exact_derivatives() const;

  /// Trig sources and sample sources (through their interpolant) have a polynomial form.
  std::optional<TrigPolynomial<double>> as_trig() const;

  std::string describe() const;

 private:
  struct Impl;
  explicit PeriodicFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Maps x into [-pi, pi).
double reduce(double x);

/// ∫_B f, splitting at singular points. B must lie in [-pi, pi].
QuadResult integrate(const PeriodicFunction& f, Interval B, const QuadratureConfig& q = {});

/// Singular points of f translated into [a, b] (f periodic).
std::vector<double> singular_points_in(const PeriodicFunction& f, double a, double b);

/// r-th derivative. Trig sources are exact, expressions use attached derivatives,
/// smooth samples or expressions without them go through the FFT on `spectral_grid`
/// points. Singular functions raise CapabilityError.
PeriodicFunction differentiate(const PeriodicFunction& f, int r, int spectral_grid = 1024);

}  // namespace vexlab
