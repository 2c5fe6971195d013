#include "vexlab/trig_approx.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace vexlab {

namespace {

using Complex = std::complex<double>;

Eigen::ArrayXcd from_spectrum(const Eigen::ArrayXcd& spec, int n) {
  const int N = static_cast<int>(spec.size());
  Eigen::ArrayXcd c = Eigen::ArrayXcd::Zero(2 * n + 1);
  const int keep = std::min(n, N / 2 - 1);
  for (int k = -keep; k <= keep; ++k) c[k + n] = spec[(k + N) % N];
  return c;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

Eigen::ArrayXcd fourier_coeffs(const PeriodicFunction& f, int n, const QuadratureConfig& q) {
  if (n < 0) throw std::invalid_argument("fourier_coeffs needs n >= 0");
  if (const auto* t = f.trig_source()) {
    Eigen::ArrayXcd c(2 * n + 1);
    for (int k = -n; k <= n; ++k) c[k + n] = t->coefficient(k);
    return c;
  }
  if (const auto* s = f.sample_source()) return from_spectrum(fourier::spectrum(*s), n);
  if (f.smoothness() == Smoothness::smooth) {
    int N = std::max(64, next_power_of_two(4L * (n + 1)));
    Eigen::ArrayXcd c = from_spectrum(fourier::spectrum(f.sample(N)), n);
    for (int level = 0; level < q.max_refinements + 4 && N < (1 << 22); ++level) {
      N *= 2;
      Eigen::ArrayXcd next = from_spectrum(fourier::spectrum(f.sample(N)), n);
      const double change = (next - c).abs().maxCoeff();
      const double size = std::max(1.0, next.abs().maxCoeff());
      c = std::move(next);
      if (change <= q.tol * size) return c;
    }
    throw ConvergenceError("Fourier coefficients did not settle under grid doubling", 0.0, 0.0);
  }
  Eigen::ArrayXcd c(2 * n + 1);
  const std::vector<double> sing = singular_points_in(f, -pi, pi);
  QuadratureConfig inner = q;
  inner.rule = QuadratureConfig::Rule::gauss_legendre;
  for (int k = 0; k <= n; ++k) {
    const double re = integrate([&](double t) { return f(t) * std::cos(k * t); }, torus, sing, inner).value;
    const double im = k == 0 ? 0.0 : -integrate([&](double t) { return f(t) * std::sin(k * t); }, torus, sing, inner).value;
    c[n + k] = Complex(re, im) / two_pi;
    c[n - k] = std::conj(c[n + k]);
  }
  return c;
}

TrigPolynomial<double> partial_sum(const PeriodicFunction& f, int n, const QuadratureConfig& q) {
  return TrigPolynomial<double>::from_complex(fourier_coeffs(f, n, q));
}

double vallee_poussin_factor(int k, int n) {
  const int a = std::abs(k);
  if (a <= n) return 1.0;
  if (a <= 2 * n) return static_cast<double>(2 * n + 1 - a) / (n + 1);
  return 0.0;
}

TrigPolynomial<double> vallee_poussin(const TrigPolynomial<double>& t, int n) {
  if (n < 0) throw std::invalid_argument("vallee_poussin needs n >= 0");
  TrigPolynomial<double> w = t.truncated(2 * n);
  for (int k = 1; k <= 2 * n; ++k) {
    const double s = vallee_poussin_factor(k, n);
    w.a(k) *= s;
    w.b(k) *= s;
  }
  return w;
}

TrigPolynomial<double> vallee_poussin(const PeriodicFunction& f, int n, const QuadratureConfig& q) {
  return vallee_poussin(partial_sum(f, 2 * n, q), n);
}

// ------------------------------------------------------------------ Jackson

JacksonKernel::JacksonKernel(int r, int n) : r_(r), n_(n) {
  if (r < 1 || n < 1) throw std::invalid_argument("Jackson kernel needs r >= 1 and n >= 1");
  m_ = n / r + 1;
  build();
}

JacksonKernel JacksonKernel::with_m(int r, int m, int n) {
  if (r < 1 || m < 1) throw std::invalid_argument("Jackson kernel needs r >= 1 and m >= 1");
  JacksonKernel k;
  k.r_ = r;
  k.m_ = m;
  k.n_ = n;
  k.build();
  return k;
}

void JacksonKernel::build() {
  // (sin(mu/2)/sin(u/2))^2 = Σ_{|j|<m} (m - |j|) e^{iju}; raise to the r-th power by convolution
  std::vector<double> base(2 * m_ - 1);
  for (int j = -(m_ - 1); j <= m_ - 1; ++j) base[j + m_ - 1] = m_ - std::abs(j);
  std::vector<double> g = base;
  for (int step = 1; step < r_; ++step) {
    std::vector<double> next(g.size() + base.size() - 1, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < base.size(); ++j) next[i + j] += g[i] * base[j];
    g = std::move(next);
  }
  const int deg = degree();
  G_.resize(deg + 1);
  for (int j = 0; j <= deg; ++j) G_[j] = g[deg + j];
  kappa_ = 2.0 * G_[0];
}

double JacksonKernel::kappa_quadrature() const {
  const int N = next_power_of_two(2L * degree() + 2) * 2;
  const Eigen::ArrayXd u = midpoint_grid(N);
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double d = std::sin(0.5 * u[i]);
    const double ratio = std::abs(d) < 1e-300 ? m_ : std::sin(0.5 * m_ * u[i]) / d;
    s += std::pow(ratio, 2 * r_);
  }
  return s * (two_pi / N) / pi;
}

double JacksonKernel::operator()(double u) const {
  const double d = std::sin(0.5 * u);
  const double ratio = std::abs(d) < 1e-12 ? m_ * std::cos(0.5 * m_ * u) / std::cos(0.5 * u) : std::sin(0.5 * m_ * u) / d;
  return std::pow(ratio, 2 * r_) / kappa_;
}

double JacksonKernel::hat(int k) const {
  const int a = std::abs(k);
  return a > degree() ? 0.0 : G_[a] / G_[0];
}

namespace {

template <typename F>
double kernel_quadrature(const JacksonKernel& J, F&& g) {
  // (2/pi) ∫_0^pi g(u) 𝒥(u) du; 𝒥 is even
  const NodeSet& gl = gauss_legendre(10);
  const int panels = 16 + 4 * J.degree();
  const double w = pi / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (Eigen::Index i = 0; i < gl.x.size(); ++i) {
      const double u = (p + 0.5 + 0.5 * gl.x[i]) * w;
      s += gl.w[i] * 0.5 * w * g(u) * J(u);
    }
  return 2.0 * s / pi;
}

}  // namespace

double JacksonKernel::normalization() const {
  return kernel_quadrature(*this, [](double) { return 1.0; });
}

double JacksonKernel::moment(int i) const {
  return kernel_quadrature(*this, [i](double u) { return std::pow(u, i); });
}

double JacksonKernel::stechkin_multiplier(int k) const {
  if (k == 0) return 1.0;
  double d = 0.0;
  for (int v = 1; v <= r_; ++v) d += ((v % 2) ? 1.0 : -1.0) * binomial(r_, v) * hat(k * v);
  return d;
}

TrigPolynomial<double> jackson_stechkin(const PeriodicFunction& f, int n, int r, const QuadratureConfig& q) {
  if (r < 1 || n < r) throw std::invalid_argument("jackson_stechkin needs 1 <= r <= n");
  const JacksonKernel J(r, n);
  const int deg = J.degree();
  Eigen::ArrayXcd c = fourier_coeffs(f, deg, q);
  for (int k = -deg; k <= deg; ++k) c[k + deg] *= J.stechkin_multiplier(k);
  return TrigPolynomial<double>::from_complex(c).truncated(n);
}

Eigen::ArrayXd jackson_stechkin(const Eigen::ArrayXd& samples, int n, int r) {
  if (r < 1 || n < r) throw std::invalid_argument("jackson_stechkin needs 1 <= r <= n");
  const JacksonKernel J(r, n);
  return fourier::apply(samples, [&J](int k) { return Complex(J.stechkin_multiplier(k)); });
}

// ------------------------------------------------------- best approximation

BestApproxResult best_approximation(const Eigen::ArrayXd& samples, int n, const ModularSpace& space,
                                    const SolverOptions& opts) {
  const int N = static_cast<int>(samples.size());
  if (n < 0) throw std::invalid_argument("best_approximation needs n >= 0");
  if (2 * n + 1 >= N) throw std::invalid_argument("grid too coarse for the requested degree");
  const Eigen::ArrayXcd spec = fourier::spectrum(samples);
  Eigen::VectorXd x0(2 * n + 1);
  x0[0] = 2.0 * spec[0].real();
  for (int k = 1; k <= n; ++k) {
    x0[2 * k - 1] = 2.0 * spec[k].real();
    x0[2 * k] = -2.0 * spec[k].imag();
  }
  DescentTerm term;
  term.space = &space;
  term.target = samples;
  term.columns = trig_basis(space.nodes(), n);
  const std::vector<DescentTerm> terms{std::move(term)};
  const DescentResult d = minimize_norm_sum(terms, x0, {}, opts);

  BestApproxResult r;
  r.value = d.objective;
  r.minimizer = TrigPolynomial<double>::from_packed(d.x);
  r.iterations = d.cycles;
  r.step = d.step;
  r.converged = d.converged;
  r.grid = N;
  // the zero polynomial is always feasible
  const double zero = space.norm(samples, opts.norm_tol).value;
  if (zero < r.value) {
    r.value = zero;
    r.minimizer = TrigPolynomial<double>(n);
  }
  return r;
}

BestApproxResult best_approximation(const PeriodicFunction& f, int n, const ExponentFunction& p, const Weight& w,
                                    const SolverOptions& opts) {
  int N = std::max(opts.grid, next_power_of_two(8L * (n + 1)));
  if (!is_power_of_two(N)) N = next_power_of_two(N);
  const ModularSpace space = ModularSpace::on_grid(p, w, N);
  return best_approximation(f.sample(N), n, space, opts);
}

}  // namespace vexlab
