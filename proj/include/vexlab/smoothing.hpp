#pragma once

// Averaging and difference operators on periodic functions. Trigonometric
// polynomials go through exact Fourier multipliers, sampled functions through
// the FFT, and expressions or callables through adaptive quadrature.

#include "vexlab/exponent_weight.hpp"
#include "vexlab/fourier.hpp"
#include "vexlab/numerics.hpp"
#include "vexlab/periodic_function.hpp"

#include <memory>
#include <string>
#include <vector>

namespace vexlab {

namespace multiplier {

using fourier::Complex;

/// Steklov mean T_h: (e^{ikh} - 1)/(ikh), 1 at k = 0.
Complex steklov(int k, double h);
/// 𝔑_δ: (2/δ) ∫_{δ/2}^{δ} m_k(h) dh.
Complex r_delta(int k, double delta);
/// (T_h - I)^r.
Complex difference(int k, double h, int r);
/// (T̃_h - I)^r with T̃_h f = f(. + h).
Complex shift_difference(int k, double h, int r);
/// (I - T_h)^r, the operator inside the modulus of smoothness.
Complex modulus(int k, double h, int r);
/// I - (I - 𝔑_δ^r)^r.
Complex realization(int k, double delta, int r);

}  // namespace multiplier

/// Open intervals of the real line; `finiteness` bounds how many contain a point.
struct OpenSetFamily {
  std::vector<Interval> sets;
  int finiteness = 1;

  /// Consecutive unit intervals starting at offset - pi, covering T.
  static OpenSetFamily unit_cover(double offset = 0.0);
  /// Largest number of sets sharing a point.
  int overlap() const;
};

/// (1/h) ∫_x^{x+h} f.
PeriodicFunction steklov(const PeriodicFunction& f, double h, const QuadratureConfig& q = {});

/// λ ∫ over [x + τ - 1/(2λ), x + τ + 1/(2λ)] of f.
PeriodicFunction steklov_translated(const PeriodicFunction& f, double lambda, double tau,
                                    const QuadratureConfig& q = {});

/// Σ_U χ_{U∩T} (1/|U|) ∫_{U∩T} |f|. T is [-pi, pi) here, not the circle.
/// An empty family gives the zero function and a warning.
PeriodicFunction averaging(const PeriodicFunction& f, const OpenSetFamily& family, const QuadratureConfig& q = {});

/// r-fold iterate of 𝔑_δ f(x) = (2/δ) ∫_{δ/2}^{δ} (1/h) ∫_0^h f(x+t) dt dh.
PeriodicFunction r_delta(const PeriodicFunction& f, double delta, int r = 1, const QuadratureConfig& q = {});

/// (T_h - I)^r f.
PeriodicFunction difference(const PeriodicFunction& f, double h, int r = 1, const QuadratureConfig& q = {});

/// Σ_v C(r,v) (-1)^{r-v} f(. + v h).
PeriodicFunction shift_difference(const PeriodicFunction& f, double h, int r = 1);

/// Ω_r(f, δ) = ||(I - T_δ)^r f||; Ω_0 is the norm and Ω_r(f, 0) = 0.
double modulus(const PeriodicFunction& f, double delta, int r, const ExponentFunction& p, const Weight& w,
               const QuadratureConfig& q = {}, double tol = 1e-10);

/// (f * g)(x) = ∫_T f(y) g(x - y) dy.
PeriodicFunction convolve(const PeriodicFunction& f, const PeriodicFunction& g, const QuadratureConfig& q = {});

/// Kernels on the real line for approximate identities: gauss, poisson, box,
/// x2gauss (x^2 e^{-x^2/2}, not radially decreasing), bump, bump(c=C).
class ApproxKernel {
 public:
  /// Rejects kernels whose integral is off 1 by more than 1e-8 with ConfigError.
  static ApproxKernel parse(std::string_view spec);
  static std::vector<std::string> names();

  const std::string& name() const;
  double operator()(double x) const;
  /// ∫ φ(x) e^{-ixξ} dx; φ is even so this is real.
  double transform(double xi) const;
  /// ∫ φ over the line.
  double integral() const;
  /// ||φ̃||_1 for the least radially decreasing majorant φ̃.
  double majorant_l1() const;

  struct Impl;

 private:
  explicit ApproxKernel(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// f * φ_t with φ_t(x) = φ(x/t)/t periodized, as the multiplier φ̂(kt).
/// Non-polynomial inputs are sampled on `grid` points first.
PeriodicFunction approx_identity(const PeriodicFunction& f, const ApproxKernel& kernel, double t, int grid = 4096);

/// u -> ∫_T f(x+u) |F(x)| dx, computed spectrally on `grid` points.
PeriodicFunction transfer_function(const PeriodicFunction& f, const PeriodicFunction& F, int grid = 4096);

/// Applies a multiplier to any function: exactly for polynomials, through the
/// FFT for samples, and on a `grid`-point sampling otherwise.
PeriodicFunction apply_multiplier(const PeriodicFunction& f, const fourier::Multiplier& m, int grid = 4096);

}  // namespace vexlab
