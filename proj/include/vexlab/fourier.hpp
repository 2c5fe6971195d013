#pragma once

// Discrete Fourier helpers on the midpoint grid x_j = -pi + (j + 1/2) 2pi/N.
// Coefficients follow c_k = (1/2pi) ∫ f(t) e^{-ikt} dt, so f = sum c_k e^{ikx}.
// Spectrum index i holds wavenumber i for i <= N/2 and i - N above.

#include "vexlab/trig_polynomial.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>

namespace vexlab::fourier {

using Complex = std::complex<double>;
using Multiplier = std::function<Complex(int)>;

int wavenumber(int index, int n);

Eigen::ArrayXcd spectrum(const Eigen::ArrayXd& samples);

/// Real part of the inverse of spectrum().
Eigen::ArrayXd synthesize(const Eigen::ArrayXcd& c);

/// Applies c_k -> m(k) c_k. The Nyquist bin is dropped.
Eigen::ArrayXd apply(const Eigen::ArrayXd& samples, const Multiplier& m);

/// Same with the multiplier already tabulated per spectrum index.
Eigen::ArrayXd apply_table(const Eigen::ArrayXd& samples, const Eigen::ArrayXcd& table);

/// Multiplier table for an N-point grid (Nyquist entry zero).
Eigen::ArrayXcd tabulate(int n, const Multiplier& m);

/// Trigonometric interpolant of degree N/2 - 1 (Nyquist dropped).
TrigPolynomial<double> interpolant(const Eigen::ArrayXd& samples);

/// Band-limited resampling to a grid of size m.
Eigen::ArrayXd resample(const Eigen::ArrayXd& samples, int m);

/// Applies a multiplier to a trigonometric polynomial exactly.
TrigPolynomial<double> apply(const TrigPolynomial<double>& t, const Multiplier& m);

/// d^r/dx^r by multiplying with (ik)^r.
Eigen::ArrayXd derivative(const Eigen::ArrayXd& samples, int r);

/// Samples of a trigonometric polynomial on the n-point midpoint grid.
Eigen::ArrayXd sample(const TrigPolynomial<double>& t, int n);

}  // namespace vexlab::fourier
