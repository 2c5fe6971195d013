#include "vexlab/descent.hpp"

#include <algorithm>
#include <cmath>

namespace vexlab {

namespace {

class Line {
 public:
  Line(const std::vector<DescentTerm>& terms, std::vector<Eigen::ArrayXd>& residuals, std::vector<double>& norms,
       double norm_tol)
      : terms_(terms), residuals_(residuals), norms_(norms), norm_tol_(norm_tol) {}

  void set_direction(std::vector<Eigen::ArrayXd> d) { dir_ = std::move(d); }

  double operator()(double t) {
    double F = 0.0;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      scratch_ = residuals_[j] - t * dir_[j];
      F += terms_[j].scale * terms_[j].space->norm(scratch_, norm_tol_, norms_[j]).value;
    }
    return F;
  }

  double commit(double t) {
    double F = 0.0;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      residuals_[j] -= t * dir_[j];
      norms_[j] = terms_[j].space->norm(residuals_[j], norm_tol_, norms_[j]).value;
      F += terms_[j].scale * norms_[j];
    }
    return F;
  }

 private:
  const std::vector<DescentTerm>& terms_;
  std::vector<Eigen::ArrayXd>& residuals_;
  std::vector<double>& norms_;
  double norm_tol_;
  std::vector<Eigen::ArrayXd> dir_;
  Eigen::ArrayXd scratch_;
};

/// Minimizes the convex map t -> line(t) starting from t = 0 with trial step delta.
/// Returns the accepted step (0 when nothing improves) and the new value.
/// When neither trial point improves and the parabola through the three values
/// predicts a gain below `negligible`, the search stops without moving.
std::pair<double, double> line_search(Line& line, double f0, double delta, double negligible) {
  double fp = line(delta);
  double fm = line(-delta);
  double a = -delta, b = delta;
  if (fp >= f0 && fm >= f0) {
    const double curvature = 0.5 * (fp + fm - 2.0 * f0) / (delta * delta);
    const double slope = 0.5 * (fp - fm) / delta;
    if (curvature > 0.0 && slope * slope / (4.0 * curvature) < negligible) return {0.0, f0};
  }
  if (fp < f0 || fm < f0) {
    const double sign = fp <= fm ? 1.0 : -1.0;
    double m = delta, fmid = std::min(fp, fm), lo = 0.0, hi = 2.0 * delta;
    double fhi = line(sign * hi);
    for (int i = 0; i < 60 && fhi < fmid; ++i) {
      lo = m;
      m = hi;
      fmid = fhi;
      hi *= 2.0;
      fhi = line(sign * hi);
    }
    a = sign * lo;
    b = sign * hi;
  }
  const MinimizeResult r = brent_minimize([&line](double t) { return line(t); }, a, b, 1e-8, 40, 1e-7 * (b - a));
  double best_t = 0.0, best_f = f0;
  if (r.fx < best_f) {
    best_t = r.x;
    best_f = r.fx;
  }
  if (fp < best_f) {
    best_t = delta;
    best_f = fp;
  }
  if (fm < best_f) {
    best_t = -delta;
    best_f = fm;
  }
  return {best_t, best_f};
}

}  // namespace

double descent_objective(const std::vector<DescentTerm>& terms, const Eigen::VectorXd& x, double norm_tol) {
  double F = 0.0;
  for (const DescentTerm& t : terms) {
    const Eigen::ArrayXd r = t.target - (t.columns * x).array();
    F += t.scale * t.space->norm(r, norm_tol).value;
  }
  return F;
}

DescentResult minimize_norm_sum(const std::vector<DescentTerm>& terms, Eigen::VectorXd x0,
                                const std::vector<Eigen::VectorXd>& extra_directions, const SolverOptions& opts,
                                const std::vector<Eigen::VectorXd>& anchors) {
  DescentResult res;
  const Eigen::Index dim = x0.size();
  std::vector<Eigen::ArrayXd> residuals;
  std::vector<double> norms;
  double scale_hint = 0.0;
  for (const DescentTerm& t : terms) {
    residuals.push_back(t.target - (t.columns * x0).array());
    norms.push_back(t.space->norm(residuals.back(), opts.norm_tol).value);
    scale_hint = std::max(scale_hint, t.space->norm(t.target, opts.norm_tol).value);
  }
  Line line(terms, residuals, norms, opts.norm_tol);
  double F = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) F += terms[j].scale * norms[j];

  const double floor_step = 1e-14 * std::max(1.0, scale_hint);
  Eigen::VectorXd steps = Eigen::VectorXd::Constant(dim, std::max(0.1 * scale_hint, 1e-3));
  std::vector<double> extra_steps(extra_directions.size() + 1, 0.1);

  auto directional = [&](const Eigen::VectorXd& d) {
    std::vector<Eigen::ArrayXd> dirs;
    for (const DescentTerm& t : terms) dirs.push_back((t.columns * d).array());
    return dirs;
  };
  std::vector<std::vector<Eigen::ArrayXd>> extra_dirs;
  for (const auto& d : extra_directions) extra_dirs.push_back(directional(d));

  Eigen::VectorXd x = std::move(x0);
  res.converged = false;

  auto gradient = [&]() {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (norms[j] > 0.0)
        g.noalias() -= terms[j].scale * terms[j].columns.transpose() *
                       terms[j].space->gradient(residuals[j], norms[j]).matrix();
    return g;
  };

  // L-BFGS (two-loop recursion) for at most `iterations` steps
  auto quasi_newton = [&](int iterations) {
    constexpr std::size_t memory = 8;
    std::vector<Eigen::VectorXd> S, Y;
    Eigen::VectorXd g = gradient();
    int quiet = 0;
    for (int it = 0; it < iterations && g.norm() > 0.0; ++it) {
      Eigen::VectorXd d = -g;
      std::vector<double> alpha(S.size());
      for (std::size_t i = S.size(); i-- > 0;) {
        alpha[i] = S[i].dot(d) / Y[i].dot(S[i]);
        d -= alpha[i] * Y[i];
      }
      if (!S.empty()) d *= S.back().dot(Y.back()) / Y.back().squaredNorm();
      for (std::size_t i = 0; i < S.size(); ++i) d += (alpha[i] - Y[i].dot(d) / Y[i].dot(S[i])) * S[i];
      if (d.dot(g) >= 0.0) {
        S.clear();
        Y.clear();
        d = -g;
      }
      std::vector<Eigen::ArrayXd> dirs;
      for (const DescentTerm& t : terms) dirs.push_back((t.columns * d).array());
      line.set_direction(std::move(dirs));
      const double F_before = F;
      const double trial = S.empty() ? std::max(0.1 * scale_hint, 1e-3) / std::max(d.norm(), 1e-300) : 1.0;
      const auto [t, f] = line_search(line, F, trial, 0.0);
      if (t == 0.0) {
        if (S.empty()) break;
        S.clear();
        Y.clear();
        continue;
      }
      F = line.commit(t);
      x += t * d;
      const Eigen::VectorXd g_new = gradient();
      const Eigen::VectorXd step = t * d, dy = g_new - g;
      if (step.dot(dy) > 1e-300) {
        S.push_back(step);
        Y.push_back(dy);
        if (S.size() > memory) {
          S.erase(S.begin());
          Y.erase(Y.begin());
        }
      }
      g = g_new;
      quiet = (F_before - F < opts.tol * (1.0 + F)) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
  };
  quasi_newton(opts.quasi_newton_iterations);

  double pattern_step = 1.0;
  // coordinates that keep returning a zero step are visited every period[i]
  // cycles (doubling up to 16); convergence is only declared after a full sweep
  std::vector<int> period(dim, 1), idle(dim, 0);
  bool full_sweep = true;
  for (int cycle = 1; cycle <= opts.max_cycles; ++cycle) {
    const double F_start = F;
    const Eigen::VectorXd x_start = x;
    const bool sweep = full_sweep;
    double largest = 0.0;
    auto search = [&](std::vector<Eigen::ArrayXd> dirs, double& step) -> double {
      line.set_direction(std::move(dirs));
      const double delta = std::max(step, floor_step);
      const auto [t, f] = line_search(line, F, delta, 0.01 * opts.tol * (1.0 + F));
      largest = std::max(largest, delta);
      step = t != 0.0 ? std::max(2.0 * std::abs(t), 0.25 * delta) : 0.25 * delta;
      if (t != 0.0) F = line.commit(t);
      return t;
    };
    for (const Eigen::VectorXd& anchor : anchors) {
      const Eigen::VectorXd d = anchor - x;
      if (d.norm() == 0.0) continue;
      double unit = 1.0;
      x += search(directional(d), unit) * d;
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (!sweep && (cycle + i) % period[i] != 0) continue;
      std::vector<Eigen::ArrayXd> dirs;
      for (const DescentTerm& t : terms) dirs.push_back(t.columns.col(i).array());
      const double t = search(std::move(dirs), steps[i]);
      x[i] += t;
      if (t != 0.0) {
        period[i] = 1;
        idle[i] = 0;
      } else if (++idle[i] >= 2) {
        period[i] = std::min(2 * period[i], 16);
        idle[i] = 0;
      }
    }
    for (std::size_t e = 0; e < extra_directions.size(); ++e)
      x += search(extra_dirs[e], extra_steps[e]) * extra_directions[e];
    if (x.norm() > 0.0) {
      const Eigen::VectorXd d = x;
      x += search(directional(d), extra_steps.back()) * d;
    }
    // pattern move along the net displacement of the cycle, then a short
    // gradient burst; both help on narrow valleys where single coordinates crawl
    const Eigen::VectorXd moved = x - x_start;
    if (moved.norm() > 0.0) {
      pattern_step = std::max(pattern_step, 1.0);
      x += search(directional(moved), pattern_step) * moved;
    }
    if (opts.quasi_newton_iterations > 0) quasi_newton(std::min(opts.quasi_newton_iterations, 20));
    res.cycles = cycle;
    res.step = largest;
    const bool quiet = F_start - F < opts.tol * (1.0 + F);
    if (quiet && sweep) {
      res.converged = true;
      break;
    }
    full_sweep = quiet;
  }
  // residual updates accumulate rounding; report the objective at x itself
  res.objective = descent_objective(terms, x, opts.norm_tol);
  res.x = std::move(x);
  return res;
}

Eigen::MatrixXd trig_basis(const Eigen::ArrayXd& x, int degree, int derivative) {
  Eigen::MatrixXd B(x.size(), 2 * degree + 1);
  B.col(0).setConstant(derivative == 0 ? 0.5 : 0.0);
  for (int k = 1; k <= degree; ++k) {
    const Eigen::ArrayXd kx = k * x;
    const double s = std::pow(static_cast<double>(k), derivative);
    // d^r/dx^r of cos and sin cycle through (cos, -sin, -cos, sin)
    Eigen::ArrayXd c, sn;
    switch (derivative % 4) {
      case 0: c = kx.cos(); sn = kx.sin(); break;
      case 1: c = -kx.sin(); sn = kx.cos(); break;
      case 2: c = -kx.cos(); sn = -kx.sin(); break;
      default: c = kx.sin(); sn = -kx.cos(); break;
    }
    B.col(2 * k - 1) = (s * c).matrix();
    B.col(2 * k) = (s * sn).matrix();
  }
  return B;
}

}  // namespace vexlab
