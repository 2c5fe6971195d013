#include "vexlab/kfunc.hpp"

#include "vexlab/fourier.hpp"
#include "vexlab/smoothing.hpp"

#include <algorithm>
#include <cmath>

namespace vexlab {

namespace {

int spectral_resolution(const Eigen::ArrayXcd& spec) {
  const int N = static_cast<int>(spec.size());
  const double top = spec.abs().maxCoeff();
  if (top == 0.0) return 0;
  for (int k = N / 2 - 1; k > 0; --k)
    if (std::abs(spec[k]) > 1e-13 * top || std::abs(spec[N - k]) > 1e-13 * top) return k;
  return 0;
}

Eigen::VectorXd packed_from_spectrum(const Eigen::ArrayXcd& spec, int M, const fourier::Multiplier& m) {
  Eigen::VectorXd x(2 * M + 1);
  x[0] = 2.0 * (spec[0] * m(0)).real();
  for (int k = 1; k <= M; ++k) {
    const auto c = spec[k] * m(k);
    x[2 * k - 1] = 2.0 * c.real();
    x[2 * k] = -2.0 * c.imag();
  }
  return x;
}

}  // namespace

int resolution(const PeriodicFunction& f) {
  if (const auto* t = f.trig_source()) {
    const double top = std::max(t->cosines().cwiseAbs().maxCoeff(), t->sines().cwiseAbs().maxCoeff());
    return t->effective_degree(1e-13 * top);
  }
  if (const auto* s = f.sample_source()) return spectral_resolution(fourier::spectrum(*s));
  return spectral_resolution(fourier::spectrum(f.sample(4096)));
}

KResult k_functional(const Eigen::ArrayXd& samples, double delta, int r, const ModularSpace& space, int M,
                     const SolverOptions& opts) {
  if (!(delta >= 0.0)) throw std::invalid_argument("k_functional needs delta >= 0");
  if (r < 1) throw std::invalid_argument("k_functional needs r >= 1");
  if (M < 2 * r) throw std::invalid_argument("k_functional needs M >= 2r");
  const int N = static_cast<int>(samples.size());
  if (2 * M + 1 >= N) throw std::invalid_argument("grid too coarse for the requested degree");

  const double dr = std::pow(delta, r);
  const Eigen::ArrayXd& x = space.nodes();
  std::vector<DescentTerm> terms(2);
  terms[0].space = &space;
  terms[0].target = samples;
  terms[0].columns = trig_basis(x, M);
  terms[1].space = &space;
  terms[1].target = Eigen::ArrayXd::Zero(N);
  terms[1].columns = trig_basis(x, M, r);
  terms[1].scale = dr;

  KResult res;
  res.degree = M;
  res.norm_bound = space.norm(samples, opts.norm_tol).value;

  const Eigen::ArrayXcd spec = fourier::spectrum(samples);
  const Eigen::VectorXd partial = packed_from_spectrum(spec, M, [](int) { return fourier::Complex(1.0); });
  // g constant is where the derivative term is not differentiable
  Eigen::VectorXd constant = Eigen::VectorXd::Zero(2 * M + 1);
  {
    const double lo = 2.0 * samples.minCoeff(), hi = 2.0 * samples.maxCoeff();
    if (hi > lo) {
      const MinimizeResult c = brent_minimize(
          [&](double a0) { return space.norm(samples - 0.5 * a0, opts.norm_tol).value; }, lo, hi, 1e-12, 200,
          1e-12 * (hi - lo));
      constant[0] = c.x;
    } else {
      constant[0] = lo;
    }
  }
  std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Zero(2 * M + 1), constant, partial};
  if (delta > 0.0 && delta <= two_pi)
    starts.push_back(packed_from_spectrum(spec, M, [delta, r](int k) { return multiplier::realization(k, delta, r); }));
  Eigen::VectorXd best = starts[0];
  double best_F = descent_objective(terms, best, opts.norm_tol);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const double F = descent_objective(terms, starts[i], opts.norm_tol);
    if (F < best_F) {
      best_F = F;
      best = starts[i];
    }
  }
  std::vector<Eigen::VectorXd> extra;
  if (partial.norm() > 0.0) extra.push_back(partial);
  const DescentResult d = minimize_norm_sum(terms, best, extra, opts, {constant, partial});
  res.value = d.objective;
  res.minimizer = TrigPolynomial<double>::from_packed(d.x);
  res.iterations = d.cycles;
  res.converged = d.converged;
  if (res.norm_bound < res.value) {
    res.value = res.norm_bound;
    res.minimizer = TrigPolynomial<double>(M);
  }
  return res;
}

KResult k_functional(const PeriodicFunction& f, double delta, int r, const ExponentFunction& p, const Weight& w, int M,
                     const SolverOptions& opts, bool check_doubling) {
  if (M == 0) M = std::min(128, std::max(4 * r, 2 * resolution(f)));
  auto solve = [&](int degree) {
    const int N = std::max(next_power_of_two(opts.grid), next_power_of_two(8L * (degree + 1)));
    const ModularSpace space = ModularSpace::on_grid(p, w, N);
    const Eigen::ArrayXd s = f.sample(N);
    KResult k = k_functional(s, delta, r, space, degree, opts);
    if (f.smoothness() == Smoothness::smooth)
      k.derivative_bound = std::pow(delta, r) * space.norm(fourier::derivative(s, r), opts.norm_tol).value;
    return k;
  };
  KResult res = solve(M);
  if (check_doubling) {
    const KResult twice = solve(2 * M);
    res.doubled_value = twice.value;
    const double scale = std::max(res.value, twice.value);
    res.accepted = scale == 0.0 || std::abs(res.value - twice.value) < 0.01 * scale;
  }
  return res;
}

PeriodicFunction realization_operator(const PeriodicFunction& f, double delta, int r, int grid) {
  if (!(delta > 0.0 && delta <= two_pi)) throw std::invalid_argument("realization needs 0 < delta <= 2pi");
  if (r < 1) throw std::invalid_argument("realization needs r >= 1");
  return apply_multiplier(f, [delta, r](int k) { return multiplier::realization(k, delta, r); }, grid);
}

}  // namespace vexlab
