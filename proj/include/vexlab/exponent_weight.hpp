#pragma once

#include "vexlab/expr.hpp"
#include "vexlab/numerics.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vexlab {

/// A variable exponent p(.) on the torus. Conjugates of exponents touching 1
/// take the value +infinity there; everything else is finite and >= 1.
class ExponentFunction {
 public:
  ExponentFunction();  // p == 2

  static ExponentFunction constant(double p);
  static ExponentFunction expression(expr::Expr e, std::string label = {});
  static ExponentFunction callable(std::function<double(double)> f, std::string label);
  /// "2+cos(x)", "p=2+cos(x)", "3".
  static ExponentFunction parse(std::string_view text);

  double operator()(double x) const;
  Eigen::ArrayXd sample(const Eigen::ArrayXd& x) const;
  bool infinite_at(double x) const;

  bool is_constant() const;
  /// p⁻ and p⁺ from a 4096-point grid refined around the extremal cells.
  double lower() const;
  double upper() const;
  bool is_conjugate() const;

  /// p' = p/(p-1), infinite where p = 1. The conjugate of a conjugate is the original.
  ExponentFunction conjugate() const;

  const std::string& label() const;

 private:
  struct Impl;
  explicit ExponentFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// A positive periodic weight, possibly with integrable singularities of the
/// form |x - s|^gamma at declared points s.
class Weight {
 public:
  Weight();  // w == 1

  static Weight unit();
  /// |sin(x/2)|^gamma, singular at 0 unless gamma == 0.
  static Weight power(double gamma);
  static Weight expression(expr::Expr e, std::vector<double> singular_points = {}, double singular_order = 0.0,
                           std::string label = {});
  static Weight callable(std::function<double(double)> f, std::vector<double> singular_points,
                         double singular_order, std::string label);
  /// "1", "power_weight(gamma=0.5)", or an expression.
  static Weight parse(std::string_view text);

  double operator()(double x) const;
  Eigen::ArrayXd sample(const Eigen::ArrayXd& x) const;

  const std::vector<double>& singular_points() const;
  double singular_order() const;
  std::optional<double> power_exponent() const;
  bool is_unit() const;
  const std::string& label() const;

  /// w(T); raises ConvergenceError when the weight is not integrable.
  double total_mass() const;

 private:
  struct Impl;
  explicit Weight(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// ∫ over each cell of the n-point midpoint grid, graded at singular points.
Eigen::ArrayXd cell_masses(const Weight& w, int n);

struct IntervalFamily {
  enum class Rule { dyadic, sliding, refinement };

  std::vector<Interval> intervals;
  Rule rule = Rule::dyadic;
  int level = 0;

  /// Dyadic intervals of T for levels 0..level, plus the same intervals shifted
  /// by half their length when `offsets` is set.
  static IntervalFamily dyadic(int level, bool offsets = true);
  /// `count` windows of the given width sliding across T.
  static IntervalFamily sliding(double width, int count);
};

struct HolderPlan {
  int base_points = 128;
  int per_decade = 16;
  int level = 2;  // smallest separation 10^(2 - 4 level)

  double min_separation() const;
};

struct HolderEstimate {
  double value = 0.0;             // max |p(x)-p(y)| ln(e + 1/|x-y|)
  double reciprocal_value = 0.0;  // same statistic for 1/p
  double x = 0.0, y = 0.0;        // attaining pair
  long pairs = 0;
};

HolderEstimate log_holder_constant(const ExponentFunction& p, const HolderPlan& plan = {});

/// Estimates at plan levels 1 and 2; growth >= 2 flags a non log-Hölder exponent.
struct HolderStability {
  HolderEstimate coarse;
  HolderEstimate fine;
  double growth = 1.0;
  bool log_holder = true;
};
HolderStability log_holder_stability(const ExponentFunction& p);

ExponentFunction conjugate_exponent(const ExponentFunction& p);

/// w^(1 - p'). Evaluating where p = 1 raises CapabilityError naming the point.
Weight dual_weight(const Weight& w, const ExponentFunction& p);

/// |B| / ∫_B dx/p(x).
double harmonic_mean_exponent(const ExponentFunction& p, Interval B, const QuadratureConfig& q = {});

struct ApResult {
  double value = 0.0;
  Interval attained;
  int intervals = 0;
};

/// max over B of (w(B)/|B|^{p_B}) ||1/w||_{B, p'/p}; regions with p = 1 use the
/// essential supremum of 1/w.
ApResult muckenhoupt_constant(const Weight& w, const ExponentFunction& p, const IntervalFamily& family,
                              const QuadratureConfig& q = {});

/// max over B of (w(B)/|B|^p)(∫_B w^{-1/(p-1)})^{p-1}; for p = 1 the second factor
/// is ess sup 1/w.
ApResult classical_ap_constant(const Weight& w, double p, const IntervalFamily& family,
                               const QuadratureConfig& q = {});

/// The per-interval ratios behind classical_ap_constant, in family order.
std::vector<double> classical_ap_values(const Weight& w, double p, const IntervalFamily& family,
                                        const QuadratureConfig& q = {});

struct WeightClassification {
  std::vector<int> levels;
  std::vector<double> estimates;
  double change = 0.0;  // relative change across the last two levels
  bool in_class = false;
};

/// Estimates on dyadic families up to each level in [first_level, last_level];
/// "in" when the last two refinements move the estimate by less than 25%.
WeightClassification classify_weight(const Weight& w, const ExponentFunction& p, int first_level = 8,
                                     int last_level = 12, const QuadratureConfig& q = {});

}  // namespace vexlab
