#include "vexlab/numerics.hpp"

#include "vexlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace vexlab {

void QuadratureConfig::validate() const {
  if (panels < 8) throw ConfigError("panel count must be at least 8", "/quad/panels");
  if (refinement_factor < 2) throw ConfigError("refinement factor must be at least 2", "/quad/refinement_factor");
  if (!(tol > 0.0 && tol <= 1e-2)) throw ConfigError("tolerance must lie in (0, 1e-2]", "/quad/tol");
  if (order < 2 || order > 64) throw ConfigError("order must lie in [2, 64]", "/quad/order");
  if (max_refinements < 1) throw ConfigError("max_refinements must be positive", "/quad/max_refinements");
}

namespace {

NodeSet compute_gauss_legendre(int n) {
  NodeSet rule{Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

void append_panel(std::vector<double>& xs, std::vector<double>& ws, double a, double b, const NodeSet& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (Eigen::Index i = 0; i < rule.x.size(); ++i) {
    xs.push_back(mid + half * rule.x[i]);
    ws.push_back(half * rule.w[i]);
  }
}

void graded_into(std::vector<double>& xs, std::vector<double>& ws, double a, double b, bool sa, bool sb,
                 int uniform_panels, int layers, const NodeSet& rule) {
  if (sa && sb) {
    const double mid = 0.5 * (a + b);
    const int half = std::max(1, (uniform_panels + 1) / 2);
    graded_into(xs, ws, a, mid, true, false, half, layers, rule);
    graded_into(xs, ws, mid, b, false, true, half, layers, rule);
    return;
  }
  const int np = std::max(1, uniform_panels);
  const double H = (b - a) / np;
  for (int k = 0; k < np; ++k) {
    const double lo = a + k * H;
    const double hi = (k == np - 1) ? b : a + (k + 1) * H;
    const bool grade_lo = sa && k == 0;
    const bool grade_hi = sb && k == np - 1;
    if (!grade_lo && !grade_hi) {
      append_panel(xs, ws, lo, hi, rule);
      continue;
    }
    if (grade_lo) {
      const double width = hi - lo;
      append_panel(xs, ws, lo, lo + width * std::ldexp(1.0, -layers), rule);
      for (int j = layers; j >= 1; --j)
        append_panel(xs, ws, lo + width * std::ldexp(1.0, -j), lo + width * std::ldexp(1.0, -j + 1), rule);
    } else {
      const double width = hi - lo;
      for (int j = 1; j <= layers; ++j)
        append_panel(xs, ws, hi - width * std::ldexp(1.0, -j + 1), hi - width * std::ldexp(1.0, -j), rule);
      append_panel(xs, ws, hi - width * std::ldexp(1.0, -layers), hi, rule);
    }
  }
}

NodeSet to_nodeset(const std::vector<double>& xs, const std::vector<double>& ws) {
  NodeSet s{Eigen::ArrayXd(static_cast<Eigen::Index>(xs.size())), Eigen::ArrayXd(static_cast<Eigen::Index>(ws.size()))};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.x[static_cast<Eigen::Index>(i)] = xs[i];
    s.w[static_cast<Eigen::Index>(i)] = ws[i];
  }
  return s;
}

}  // namespace

const NodeSet& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, NodeSet> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

NodeSet graded_panels(double a, double b, bool singular_a, bool singular_b, int uniform_panels, int layers,
                      int order) {
  std::vector<double> xs, ws;
  graded_into(xs, ws, a, b, singular_a, singular_b, uniform_panels, layers, gauss_legendre(order));
  return to_nodeset(xs, ws);
}

NodeSet discretize(Interval B, std::span<const double> singular_points, const QuadratureConfig& q, int level) {
  const double scale = std::pow(static_cast<double>(q.refinement_factor), level);
  const long panels = std::lround(q.panels * scale);
  const double L = B.length();

  std::vector<double> cuts;
  bool sing_lo = false, sing_hi = false;
  for (double s : singular_points) {
    if (std::abs(s - B.lo) <= 1e-14 * (1.0 + std::abs(s))) sing_lo = true;
    else if (std::abs(s - B.hi) <= 1e-14 * (1.0 + std::abs(s))) sing_hi = true;
    else if (B.interior(s)) cuts.push_back(s);
  }
  if (!cuts.empty() && !q.split_singular)
    throw CapabilityError("integrand has singular points inside the interval but splitting is disabled");

  const bool whole_period = std::abs(L - two_pi) < 1e-12;
  if (q.rule == QuadratureConfig::Rule::trapezoid && whole_period && cuts.empty() && !sing_lo && !sing_hi) {
    NodeSet s{Eigen::ArrayXd(panels), Eigen::ArrayXd::Constant(panels, L / static_cast<double>(panels))};
    for (long j = 0; j < panels; ++j) s.x[j] = B.lo + (j + 0.5) * L / static_cast<double>(panels);
    return s;
  }

  std::sort(cuts.begin(), cuts.end());
  std::vector<double> ends{B.lo};
  ends.insert(ends.end(), cuts.begin(), cuts.end());
  ends.push_back(B.hi);

  const int layers = 24 * (level + 1);
  const NodeSet& rule = gauss_legendre(q.order);
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double a = ends[i], b = ends[i + 1];
    const bool sa = (i == 0) ? sing_lo : true;
    const bool sb = (i + 2 == ends.size()) ? sing_hi : true;
    const int np = static_cast<int>(std::max<long>(1, std::lround(panels * (b - a) / L)));
    graded_into(xs, ws, a, b, sa, sb, np, layers, rule);
  }
  return to_nodeset(xs, ws);
}

QuadResult integrate(const std::function<double(double)>& f, Interval B, std::span<const double> singular_points,
                     const QuadratureConfig& q) {
  q.validate();
  if (!(B.length() > 0.0)) return {};
  double previous = 0.0;
  long evaluations = 0;
  for (int level = 0; level <= q.max_refinements; ++level) {
    const NodeSet nodes = discretize(B, singular_points, q, level);
    double sum = 0.0, abs_sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.x.size(); ++i) {
      const double v = f(nodes.x[i]);
      sum += nodes.w[i] * v;
      abs_sum += nodes.w[i] * std::abs(v);
    }
    evaluations += nodes.x.size();
    if (level > 0) {
      const double scale = std::max(std::abs(sum), abs_sum);
      const double diff = std::abs(sum - previous);
      if (scale == 0.0) return {sum, 0.0, level, evaluations};
      if (diff <= q.tol * scale) return {sum, diff / scale, level, evaluations};
    }
    previous = sum;
    if (level == q.max_refinements)
      throw ConvergenceError("quadrature did not converge", previous, sum);
  }
  throw ConvergenceError("quadrature did not converge", previous, previous);
}

Eigen::ArrayXd midpoint_grid(int n) {
  Eigen::ArrayXd x(n);
  const double h = two_pi / n;
  for (int j = 0; j < n; ++j) x[j] = -pi + (j + 0.5) * h;
  return x;
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(long n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

MinimizeResult brent_minimize(const std::function<double(double)>& f, double a, double b, double rel_tol,
                              int max_evaluations, double abs_tol) {
  constexpr double golden = 0.3819660112501051;
  constexpr double tiny = 1e-300;
  if (a > b) std::swap(a, b);
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evals = 1;
  while (evals < max_evaluations) {
    const double m = 0.5 * (a + b);
    const double tol = rel_tol * std::abs(x) + abs_tol + tiny + 1e-14 * (b - a);
    const double t2 = 2.0 * tol;
    if (std::abs(x - m) <= t2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol) {
      double r = (x - w) * (fx - fv);
      double qq = (x - v) * (fx - fw);
      double p = (x - v) * qq - (x - w) * r;
      qq = 2.0 * (qq - r);
      if (qq > 0.0) p = -p;
      else qq = -qq;
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * qq * etemp) && p > qq * (a - x) && p < qq * (b - x)) {
        d = p / qq;
        const double u = x + d;
        if (u - a < t2 || b - u < t2) d = (m > x) ? tol : -tol;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= m) ? a - x : b - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol) ? x + d : x + (d > 0 ? tol : -tol);
    const double fu = f(u);
    ++evals;
    if (fu <= fx) {
      if (u >= x) a = x;
      else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u;
      else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, evals};
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const int nthreads = std::min(jobs, count);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) {
    threads.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace vexlab
