#pragma once

// Reference computations used by the tests. None of them calls into the
// library: plain midpoint rules, bisection and direct sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Midpoint nodes on [-pi, pi).
inline std::vector<double> grid(int n) {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = -pi + (j + 0.5) * 2.0 * pi / n;
  return x;
}

/// Discretized Luxemburg norm: Σ m_j |v_j/α|^{q_j} <= 1, bisection on log α.
inline double luxemburg(const std::vector<double>& v, const std::vector<double>& q, const std::vector<double>& m) {
  auto rho = [&](double a) {
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m[j] * std::pow(std::abs(v[j]) / a, q[j]);
    return s;
  };
  double vmax = 0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax == 0) return 0;
  double lo = vmax * 1e-8, hi = vmax * 1e8;
  for (int it = 0; it < 200 && hi / lo > 1 + 1e-14; ++it) {
    const double mid = std::sqrt(lo * hi);
    (rho(mid) > 1 ? lo : hi) = mid;
  }
  return hi;
}

/// Norm of f on an n-point midpoint rule with weight values sampled at the nodes.
inline double norm(const std::function<double(double)>& f, const std::function<double(double)>& p,
                   const std::function<double(double)>& w, int n = 1 << 14) {
  const auto x = grid(n);
  std::vector<double> v(n), q(n), m(n);
  for (int j = 0; j < n; ++j) {
    v[j] = f(x[j]);
    q[j] = p(x[j]);
    m[j] = w(x[j]) * 2.0 * pi / n;
  }
  return luxemburg(v, q, m);
}

/// Modified Bessel function I_k(z) by its power series.
inline double bessel_i(int k, double z) {
  double term = std::pow(z / 2, k) / std::tgamma(k + 1.0), s = 0;
  for (int j = 0; j < 60; ++j) {
    s += term;
    term *= (z / 2) * (z / 2) / ((j + 1.0) * (j + 1.0 + k));
  }
  return s;
}

/// Random trigonometric polynomial a0/2 + Σ a_k cos kx + b_k sin kx with
/// coefficients uniform in [-1, 1], packed as (a0, a1, b1, ...).
inline std::vector<double> random_packed(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(2 * degree + 1);
  for (double& v : c) v = u(rng);
  return c;
}

inline double eval_packed(const std::vector<double>& c, double x) {
  double s = c[0] / 2;
  for (std::size_t k = 1; 2 * k < c.size() + 1; ++k) s += c[2 * k - 1] * std::cos(k * x) + c[2 * k] * std::sin(k * x);
  return s;
}

}  // namespace oracle
