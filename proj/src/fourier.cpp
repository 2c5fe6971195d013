#include "vexlab/fourier.hpp"

#include "vexlab/numerics.hpp"

#include <unsupported/Eigen/FFT>

#include <stdexcept>
#include <vector>

namespace vexlab::fourier {

namespace {

// kissfft caches twiddle tables inside the FFT object, so each thread keeps its own.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

Complex phase(int k, int n) {
  // (-1)^k e^{-ikh/2} with h = 2pi/n
  const double angle = -pi * k / n;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * Complex(std::cos(angle), std::sin(angle));
}

void require_grid(Eigen::Index n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("grid size must be even");
}

}  // namespace

int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

Eigen::ArrayXcd spectrum(const Eigen::ArrayXd& samples) {
  const int n = static_cast<int>(samples.size());
  require_grid(n);
  std::vector<double> in(samples.data(), samples.data() + n);
  std::vector<Complex> out;
  engine().fwd(out, in);
  Eigen::ArrayXcd c(n);
  for (int i = 0; i < n; ++i) c[i] = out[static_cast<std::size_t>(i)] * phase(wavenumber(i, n), n) / double(n);
  return c;
}

Eigen::ArrayXd synthesize(const Eigen::ArrayXcd& c) {
  const int n = static_cast<int>(c.size());
  require_grid(n);
  std::vector<Complex> in(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = c[i] * std::conj(phase(wavenumber(i, n), n));
  std::vector<Complex> out;
  engine().inv(out, in);
  Eigen::ArrayXd f(n);
  for (int j = 0; j < n; ++j) f[j] = out[static_cast<std::size_t>(j)].real() * n;
  return f;
}

Eigen::ArrayXcd tabulate(int n, const Multiplier& m) {
  Eigen::ArrayXcd table(n);
  for (int i = 0; i < n; ++i) table[i] = (i == n / 2) ? Complex(0) : m(wavenumber(i, n));
  return table;
}

Eigen::ArrayXd apply_table(const Eigen::ArrayXd& samples, const Eigen::ArrayXcd& table) {
  if (table.size() != samples.size()) throw std::invalid_argument("multiplier table size mismatch");
  Eigen::ArrayXcd c = spectrum(samples) * table;
  c[samples.size() / 2] = 0.0;
  return synthesize(c);
}

Eigen::ArrayXd apply(const Eigen::ArrayXd& samples, const Multiplier& m) {
  return apply_table(samples, tabulate(static_cast<int>(samples.size()), m));
}

TrigPolynomial<double> interpolant(const Eigen::ArrayXd& samples) {
  const int n = static_cast<int>(samples.size());
  const Eigen::ArrayXcd c = spectrum(samples);
  const int deg = n / 2 - 1;
  Eigen::ArrayXcd sym(2 * deg + 1);
  for (int k = -deg; k <= deg; ++k) sym[k + deg] = c[(k + n) % n];
  return TrigPolynomial<double>::from_complex(sym);
}

Eigen::ArrayXd resample(const Eigen::ArrayXd& samples, int m) {
  const int n = static_cast<int>(samples.size());
  if (m == n) return samples;
  const Eigen::ArrayXcd c = spectrum(samples);
  Eigen::ArrayXcd d = Eigen::ArrayXcd::Zero(m);
  const int keep = std::min(n, m) / 2 - 1;
  for (int k = -keep; k <= keep; ++k) d[(k + m) % m] = c[(k + n) % n];
  return synthesize(d);
}

TrigPolynomial<double> apply(const TrigPolynomial<double>& t, const Multiplier& m) {
  const int n = t.degree();
  Eigen::ArrayXcd c(2 * n + 1);
  for (int k = -n; k <= n; ++k) c[k + n] = m(k) * t.coefficient(k);
  return TrigPolynomial<double>::from_complex(c);
}

Eigen::ArrayXd derivative(const Eigen::ArrayXd& samples, int r) {
  return apply(samples, [r](int k) {
    Complex m(1.0);
    for (int i = 0; i < r; ++i) m *= Complex(0.0, k);
    return m;
  });
}

Eigen::ArrayXd sample(const TrigPolynomial<double>& t, int n) {
  if (t.degree() >= n / 2) return t.eval(midpoint_grid(n));
  Eigen::ArrayXcd c = Eigen::ArrayXcd::Zero(n);
  for (int k = -t.degree(); k <= t.degree(); ++k) c[(k + n) % n] = t.coefficient(k);
  return synthesize(c);
}

}  // namespace vexlab::fourier
