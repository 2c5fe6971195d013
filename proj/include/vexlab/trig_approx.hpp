#pragma once

#include "vexlab/descent.hpp"
#include "vexlab/exponent_weight.hpp"
#include "vexlab/periodic_function.hpp"
#include "vexlab/trig_polynomial.hpp"

#include <Eigen/Core>

namespace vexlab {

/// c_k = (1/2pi) ∫ f(t) e^{-ikt} dt for |k| <= n, stored at index k + n.
/// Smooth functions use the FFT on a grid doubled until the coefficients settle;
/// non-smooth ones integrate each coefficient.
Eigen::ArrayXcd fourier_coeffs(const PeriodicFunction& f, int n, const QuadratureConfig& q = {});

/// S_n f.
TrigPolynomial<double> partial_sum(const PeriodicFunction& f, int n, const QuadratureConfig& q = {});

/// Factor applied to c_k by W_n: 1 for |k| <= n, (2n + 1 - |k|)/(n + 1) up to 2n.
double vallee_poussin_factor(int k, int n);

/// W_n f = (1/(n+1)) Σ_{ν=n}^{2n} S_ν f, of degree 2n.
TrigPolynomial<double> vallee_poussin(const PeriodicFunction& f, int n, const QuadratureConfig& q = {});
TrigPolynomial<double> vallee_poussin(const TrigPolynomial<double>& t, int n);

/// 𝒥(u) = κ^{-1} (sin(mu/2)/sin(u/2))^{2r} with κ making (1/pi)∫𝒥 = 1.
class JacksonKernel {
 public:
  /// m = floor(n/r) + 1.
  JacksonKernel(int r, int n);
  /// m given directly; n is kept for labelling.
  static JacksonKernel with_m(int r, int m, int n);

  int r() const { return r_; }
  int n() const { return n_; }
  int m() const { return m_; }
  /// r <= 2m - 2.
  bool admissible() const { return r_ <= 2 * m_ - 2; }
  /// Trigonometric degree r(m-1).
  int degree() const { return r_ * (m_ - 1); }

  /// κ from the coefficient convolution (exact).
  double kappa() const { return kappa_; }
  /// κ from a midpoint rule on T, independent of the coefficients.
  double kappa_quadrature() const;

  double operator()(double u) const;
  /// (1/pi) ∫ 𝒥(u) e^{-iku} du.
  double hat(int k) const;
  /// (1/pi) ∫ 𝒥 by Gauss-Legendre.
  double normalization() const;
  /// (1/pi) ∫ |u|^i 𝒥(u) du.
  double moment(int i) const;
  /// Multiplier of D_{n,r}: 1 - (1/pi) ∫ (1 - e^{iku})^r 𝒥(u) du.
  double stechkin_multiplier(int k) const;

 private:
  JacksonKernel() = default;
  void build();

  int r_ = 1, n_ = 2, m_ = 3;
  double kappa_ = 0.0;
  Eigen::ArrayXd G_;  // G_j for j = 0..degree
};

inline JacksonKernel jackson_kernel(int r, int n) { return JacksonKernel(r, n); }

/// D_{n,r} f, a polynomial of degree n. Requires n >= r.
TrigPolynomial<double> jackson_stechkin(const PeriodicFunction& f, int n, int r, const QuadratureConfig& q = {});
/// Same on samples: applies the multipliers through the FFT.
Eigen::ArrayXd jackson_stechkin(const Eigen::ArrayXd& samples, int n, int r);

struct BestApproxResult {
  double value = 0.0;
  TrigPolynomial<double> minimizer;
  int iterations = 0;
  double step = 0.0;
  bool converged = false;
  int grid = 0;
};

/// E_n(f) = min over T of degree n of ||f - T||, on a sampled grid.
BestApproxResult best_approximation(const PeriodicFunction& f, int n, const ExponentFunction& p, const Weight& w,
                                    const SolverOptions& opts = {});

/// Same on a prepared space; `samples` are f on space.nodes().
BestApproxResult best_approximation(const Eigen::ArrayXd& samples, int n, const ModularSpace& space,
                                    const SolverOptions& opts = {});

}  // namespace vexlab
