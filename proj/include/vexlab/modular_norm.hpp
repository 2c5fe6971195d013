#pragma once

#include "vexlab/exponent_weight.hpp"
#include "vexlab/numerics.hpp"
#include "vexlab/periodic_function.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace vexlab {

/// A modular value; `infinite` replaces an IEEE infinity.
struct ModularValue {
  double value = 0.0;
  bool infinite = false;
};

struct NormResult {
  double value = 0.0;
  double achieved_tol = 0.0;          // (upper - lower)/upper of the final bracket
  double modular_at_solution = 0.0;   // ρ(f/value)
  int iterations = 0;
};

/// Σ m_i |v_i/alpha|^{q_i}. Entries with q_i = +inf contribute 0 when
/// |v_i/alpha| <= 1 and make the modular infinite otherwise.
ModularValue discrete_modular(std::span<const double> v, std::span<const double> q, std::span<const double> m,
                              double alpha = 1.0);

/// inf{alpha > 0 : discrete_modular(v/alpha) <= 1}, returned as the upper end of a
/// bracket whose relative width is below tol. Newton steps on log-alpha from the
/// left, guarded by bisection. A positive hint replaces the starting guess.
NormResult solve_luxemburg(std::span<const double> v, std::span<const double> q, std::span<const double> m,
                           double tol = 1e-10, double hint = 0.0);

/// Fixed nodes, exponents and masses; evaluates norms of many functions.
class ModularSpace {
 public:
  ModularSpace() = default;
  ModularSpace(Eigen::ArrayXd exponents, Eigen::ArrayXd masses, Eigen::ArrayXd nodes = {});

  /// Midpoint grid of n points with cell-integrated weight masses.
  static ModularSpace on_grid(const ExponentFunction& p, const Weight& w, int n);
  /// Quadrature nodes; masses are w(x_i) times the node weights.
  static ModularSpace on_nodes(const ExponentFunction& p, const Weight& w, const NodeSet& nodes);

  int size() const { return static_cast<int>(exponents_.size()); }
  const Eigen::ArrayXd& nodes() const { return nodes_; }
  const Eigen::ArrayXd& exponents() const { return exponents_; }
  const Eigen::ArrayXd& masses() const { return masses_; }
  bool constant_exponent() const { return constant_; }

  ModularValue modular(const Eigen::ArrayXd& v, double alpha = 1.0) const;
  NormResult norm(const Eigen::ArrayXd& v, double tol = 1e-10, double hint = 0.0) const;
  double operator()(const Eigen::ArrayXd& v, double tol = 1e-10) const { return norm(v, tol).value; }
  /// ∂||v||/∂v_i, given alpha = ||v|| > 0. Entries with infinite exponent get 0.
  Eigen::ArrayXd gradient(const Eigen::ArrayXd& v, double alpha) const;

 private:
  Eigen::ArrayXd exponents_;
  Eigen::ArrayXd masses_;
  Eigen::ArrayXd nodes_;
  bool constant_ = false;
  double q0_ = 0.0;
};

/// ρ_{B}(f) = ∫_B |f|^{p(x)} w(x) dx.
ModularValue modular(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w, Interval B = torus,
                     const QuadratureConfig& q = {});

/// Luxemburg norm on B, refining the quadrature until two levels agree.
NormResult luxemburg_norm(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w,
                          Interval B = torus, const QuadratureConfig& q = {}, double tol = 1e-10);

struct DualEstimate {
  double value = 0.0;
  int used = 0;
  int skipped = 0;  // testers with zero dual norm
};

/// max over testers g of ∫_T |f||g| / ||g||_{p',w'}, on an n-point grid.
DualEstimate dual_norm_estimate(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w,
                                const std::vector<PeriodicFunction>& testers, int n = 2048);

}  // namespace vexlab
