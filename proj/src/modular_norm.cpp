#include "vexlab/modular_norm.hpp"

#include "vexlab/diagnostics.hpp"
#include "vexlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vexlab {

namespace {

// φ(s) = log Σ exp(a_i - q_i s): convex and decreasing in s = log alpha, with
// slope between -max q and -min q.
struct LogModular {
  Eigen::ArrayXd a;
  Eigen::ArrayXd q;

  void value_and_slope(double s, double& phi, double& slope) const {
    const Eigen::ArrayXd e = a - q * s;
    const double top = e.maxCoeff();
    const Eigen::ArrayXd w = (e - top).exp();
    const double sum = w.sum();
    phi = top + std::log(sum);
    slope = -(w * q).sum() / sum;
  }

  double value(double s) const {
    double phi, slope;
    value_and_slope(s, phi, slope);
    return phi;
  }
};

double ess_sup_abs(std::span<const double> v, std::span<const double> q, std::span<const double> m) {
  double top = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::isinf(q[i]) && m[i] > 0.0) top = std::max(top, std::abs(v[i]));
  return top;
}

NormResult solve_constant(std::span<const double> v, std::span<const double> m, double q0, double floor_alpha) {
  double top = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (m[i] > 0.0) top = std::max(top, std::abs(v[i]));
  if (top == 0.0) return {floor_alpha, 0.0, 0.0, 0};
  auto scaled_sum = [&](double scale) {
    double s = 0.0;
    if (q0 == 2.0) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i] / scale;
        s += m[i] * t * t;
      }
    } else {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) s += m[i] * std::pow(std::abs(v[i]) / scale, q0);
    }
    return s;
  };
  double alpha = top * std::pow(scaled_sum(top), 1.0 / q0);
  double rho = scaled_sum(alpha);
  for (int i = 0; i < 16 && rho > 1.0; ++i) {
    alpha = std::nextafter(alpha, std::numeric_limits<double>::infinity());
    rho = scaled_sum(alpha);
  }
  if (floor_alpha > alpha) return {floor_alpha, 0.0, scaled_sum(floor_alpha), 0};
  return {alpha, std::numeric_limits<double>::epsilon(), rho, 0};
}

}  // namespace

ModularValue discrete_modular(std::span<const double> v, std::span<const double> q, std::span<const double> m,
                              double alpha) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0 || m[i] == 0.0) continue;
    const double t = std::abs(v[i]) / alpha;
    if (std::isinf(q[i])) {
      if (t > 1.0) return {0.0, true};
      continue;
    }
    const double term = m[i] * std::pow(t, q[i]);
    if (!std::isfinite(term)) return {0.0, true};
    sum += term;
  }
  if (!std::isfinite(sum)) return {0.0, true};
  return {sum, false};
}

NormResult solve_luxemburg(std::span<const double> v, std::span<const double> q, std::span<const double> m,
                           double tol, double hint) {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("norm tolerance must lie in (0, 1)", "/solver/tol");
  const double alpha_inf = ess_sup_abs(v, q, m);

  std::vector<double> av, qv;
  av.reserve(v.size());
  qv.reserve(v.size());
  bool constant = true;
  double q0 = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0 || !(m[i] > 0.0) || std::isinf(q[i])) continue;
    if (!(q[i] > 0.0)) throw std::invalid_argument("exponents must be positive");
    av.push_back(std::log(m[i]) + q[i] * std::log(std::abs(v[i])));
    qv.push_back(q[i]);
    if (q0 < 0.0) q0 = q[i];
    else if (q[i] != q0) constant = false;
  }
  if (av.empty()) return {alpha_inf, 0.0, 0.0, 0};

  if (constant) {
    // only finite-exponent entries take part in the closed form
    std::vector<double> vv, mm;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!std::isinf(q[i])) {
        vv.push_back(v[i]);
        mm.push_back(m[i]);
      }
    return solve_constant(vv, mm, q0, alpha_inf);
  }

  LogModular phi;
  phi.a = Eigen::Map<const Eigen::ArrayXd>(av.data(), static_cast<Eigen::Index>(av.size()));
  phi.q = Eigen::Map<const Eigen::ArrayXd>(qv.data(), static_cast<Eigen::Index>(qv.size()));

  // Newton from the left never overshoots the root of a convex decreasing φ; a
  // step from the right lands on the left. Probes half a tolerance ahead close
  // the bracket.
  const double tol_s = -std::log1p(-tol);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf, f_lo = 0.0, slope_lo = -1.0;
  double s = hint > 0.0 ? std::log(hint) : 0.0;
  int iterations = 0;
  for (;;) {
    double f, slope;
    phi.value_and_slope(s, f, slope);
    ++iterations;
    if (!std::isfinite(f) || !(slope < 0.0)) throw DivergenceError("modular is not finite at the trial scale");
    double next;
    if (f > 0.0) {
      lo = s;
      f_lo = f;
      slope_lo = slope;
    } else {
      hi = s;
    }
    if (hi - lo <= tol_s) break;
    if (iterations > 200) throw ConvergenceError("Luxemburg iteration did not close its bracket", lo, hi);
    if (lo == -inf) {
      next = s - f / slope;
      if (!(next < hi)) next = hi - tol_s;
    } else {
      next = std::max(lo - f_lo / slope_lo, lo + 0.5 * tol_s);
      // a Newton point that rounded onto the right side: probe just below it
      if (!(next < hi)) next = std::max(hi - 0.5 * tol_s, 0.5 * (lo + hi));
    }
    s = next;
  }

  const double alpha = std::exp(hi);
  if (alpha_inf > alpha) {
    return {alpha_inf, 0.0, std::exp(phi.value(std::log(alpha_inf))), iterations};
  }
  return {alpha, -std::expm1(lo - hi), std::exp(phi.value(hi)), iterations};
}

ModularSpace::ModularSpace(Eigen::ArrayXd exponents, Eigen::ArrayXd masses, Eigen::ArrayXd nodes)
    : exponents_(std::move(exponents)), masses_(std::move(masses)), nodes_(std::move(nodes)) {
  if (exponents_.size() != masses_.size()) throw std::invalid_argument("exponent and mass sizes differ");
  constant_ = exponents_.size() > 0;
  q0_ = exponents_.size() > 0 ? exponents_[0] : 0.0;
  for (Eigen::Index i = 0; i < exponents_.size(); ++i)
    if (exponents_[i] != q0_ || std::isinf(exponents_[i])) constant_ = false;
}

ModularSpace ModularSpace::on_grid(const ExponentFunction& p, const Weight& w, int n) {
  const Eigen::ArrayXd x = midpoint_grid(n);
  return ModularSpace(p.sample(x), cell_masses(w, n), x);
}

ModularSpace ModularSpace::on_nodes(const ExponentFunction& p, const Weight& w, const NodeSet& nodes) {
  return ModularSpace(p.sample(nodes.x), nodes.w * w.sample(nodes.x), nodes.x);
}

ModularValue ModularSpace::modular(const Eigen::ArrayXd& v, double alpha) const {
  return discrete_modular({v.data(), static_cast<std::size_t>(v.size())},
                          {exponents_.data(), static_cast<std::size_t>(exponents_.size())},
                          {masses_.data(), static_cast<std::size_t>(masses_.size())}, alpha);
}

NormResult ModularSpace::norm(const Eigen::ArrayXd& v, double tol, double hint) const {
  if (v.size() != exponents_.size()) throw std::invalid_argument("sample count does not match the space");
  if (constant_) {
    std::span<const double> vs{v.data(), static_cast<std::size_t>(v.size())};
    std::span<const double> ms{masses_.data(), static_cast<std::size_t>(masses_.size())};
    return solve_constant(vs, ms, q0_, 0.0);
  }
  return solve_luxemburg({v.data(), static_cast<std::size_t>(v.size())},
                         {exponents_.data(), static_cast<std::size_t>(exponents_.size())},
                         {masses_.data(), static_cast<std::size_t>(masses_.size())}, tol, hint);
}

Eigen::ArrayXd ModularSpace::gradient(const Eigen::ArrayXd& v, double alpha) const {
  Eigen::ArrayXd g = Eigen::ArrayXd::Zero(v.size());
  if (!(alpha > 0.0)) return g;
  double denom = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double q = exponents_[i];
    if (v[i] == 0.0 || std::isinf(q)) continue;
    const double u = std::abs(v[i]) / alpha;
    const double uq1 = q == 2.0 ? u : std::pow(u, q - 1.0);
    g[i] = masses_[i] * q * uq1 * (v[i] > 0.0 ? 1.0 : -1.0);
    denom += masses_[i] * q * uq1 * u;
  }
  return denom > 0.0 ? Eigen::ArrayXd(g / denom) : g;
}

namespace {

std::vector<double> joint_singular_points(const PeriodicFunction& f, const Weight& w, Interval B) {
  std::vector<double> s = singular_points_in(f, B.lo, B.hi);
  for (double t : w.singular_points()) {
    for (int k = -1; k <= 1; ++k) {
      const double u = t + k * two_pi;
      if (B.contains(u)) s.push_back(u);
    }
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

ModularValue modular(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w, Interval B,
                     const QuadratureConfig& q) {
  const std::vector<double> sing = joint_singular_points(f, w, B);
  bool blown = false;
  const auto integrand = [&](double x) {
    const double fx = std::abs(f(x));
    const double px = p(x);
    if (std::isinf(px)) {
      if (fx > 1.0) blown = true;
      return 0.0;
    }
    if (fx == 0.0) return 0.0;
    return std::pow(fx, px) * w(x);
  };
  const QuadResult r = integrate(integrand, B, sing, q);
  if (blown || !std::isfinite(r.value)) return {0.0, true};
  return {r.value, false};
}

NormResult luxemburg_norm(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w, Interval B,
                          const QuadratureConfig& q, double tol) {
  q.validate();
  if (!(tol > 0.0 && tol <= 1e-3)) throw ConfigError("norm tolerance must lie in (0, 1e-3]", "/solver/tol");
  const std::vector<double> sing = joint_singular_points(f, w, B);
  const double agreement = std::max(q.tol, tol);
  std::vector<double> history;
  NormResult previous;
  for (int level = 0; level <= q.max_refinements; ++level) {
    const NodeSet nodes = discretize(B, sing, q, level);
    Eigen::ArrayXd v(nodes.x.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f(nodes.x[i]);
    const ModularSpace space = ModularSpace::on_nodes(p, w, nodes);
    const NormResult r = space.norm(v, tol);
    history.push_back(r.value);
    if (level > 0 && std::abs(r.value - previous.value) <= agreement * std::max(r.value, 1e-300)) return r;
    if (level > 0 && r.value == 0.0 && previous.value == 0.0) return r;
    previous = r;
  }
  const std::size_t n = history.size();
  if (n >= 3 && history[n - 1] > 1.2 * history[n - 2] && history[n - 2] > 1.2 * history[n - 3])
    throw DivergenceError("norm grows without bound under refinement; the modular is not finite");
  throw ConvergenceError("norm did not settle under quadrature refinement", history[n - 2], history[n - 1]);
}

DualEstimate dual_norm_estimate(const PeriodicFunction& f, const ExponentFunction& p, const Weight& w,
                                const std::vector<PeriodicFunction>& testers, int n) {
  DualEstimate out;
  const Eigen::ArrayXd fv = f.sample(n).abs();
  if ((fv == 0.0).all()) {
    out.used = static_cast<int>(testers.size());
    return out;
  }
  const ModularSpace dual = ModularSpace::on_grid(p.conjugate(), dual_weight(w, p), n);
  const double h = two_pi / n;
  for (const PeriodicFunction& g : testers) {
    const Eigen::ArrayXd gv = g.sample(n);
    const double gn = dual.norm(gv).value;
    if (!(gn > 0.0)) {
      warn("dual norm estimate: skipping a tester with zero dual norm");
      ++out.skipped;
      continue;
    }
    ++out.used;
    out.value = std::max(out.value, h * (fv * gv.abs()).sum() / gn);
  }
  return out;
}

}  // namespace vexlab
