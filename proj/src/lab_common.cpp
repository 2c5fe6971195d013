#include "lab_common.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/fourier.hpp"
#include "vexlab/kfunc.hpp"
#include "vexlab/numerics.hpp"
#include "vexlab/trig_approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace vexlab::lab {

namespace {

constexpr int k_cycle_cap = 40;
constexpr double k_tol_floor = 1e-8;

template <typename V>
class Memo {
 public:
  template <typename F>
  V get(const std::string& key, F&& compute) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    V v = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return map_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, V> map_;
};

Memo<std::shared_ptr<const ModularSpace>>& space_memo() {
  static Memo<std::shared_ptr<const ModularSpace>> m;
  return m;
}
Memo<std::shared_ptr<const Eigen::ArrayXd>>& sample_memo() {
  static Memo<std::shared_ptr<const Eigen::ArrayXd>> m;
  return m;
}
Memo<Workbench::Best>& best_memo() {
  static Memo<Workbench::Best> m;
  return m;
}
Memo<Workbench::K>& k_memo() {
  static Memo<Workbench::K> m;
  return m;
}

std::string solver_key(const SolverOptions& s) {
  return fmt(s.tol) + "|" + fmt(s.norm_tol) + "|" + std::to_string(s.max_cycles) + "|" +
         std::to_string(s.quasi_newton_iterations);
}

}  // namespace

std::string pad(long v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*ld", width, v);
  return buf;
}

std::string fmt(double v) { return format_double(v); }

std::shared_ptr<const ModularSpace> Workbench::space(const CatalogSpace& s, int N) const {
  return space_memo().get(s.id() + "|" + std::to_string(N), [&] {
    return std::make_shared<const ModularSpace>(ModularSpace::on_grid(s.p, s.w, N));
  });
}

std::shared_ptr<const Eigen::ArrayXd> Workbench::samples(const CatalogFunction& f, int N, int r) const {
  return sample_memo().get(f.id + "|" + std::to_string(N) + "|" + std::to_string(r), [&] {
    return std::make_shared<const Eigen::ArrayXd>(f.derivative_samples(N, r));
  });
}

double Workbench::norm(const CatalogSpace& s, int N, const Eigen::ArrayXd& v) const {
  return space(s, N)->norm(v, opts_.solver.norm_tol).value;
}

double Workbench::scale(const CatalogFunction& f, const CatalogSpace& s, int N, int q) const {
  double top = 0.0;
  for (int i = 0; i <= q; ++i) top = std::max(top, norm(s, N, *samples(f, N, i)));
  double out = N * top;
  if (!f.exact_derivative(q)) out += std::pow(0.5 * N, q) * norm(s, N, *samples(f, N, 0));
  return out;
}

Workbench::Best Workbench::best(const CatalogFunction& f, int r, const CatalogSpace& s, int N, int n) const {
  const std::string key = f.id + "|" + std::to_string(r) + "|" + s.id() + "|" + std::to_string(N) + "|" +
                          std::to_string(n) + "|" + solver_key(opts_.solver);
  return best_memo().get(key, [&] {
    const auto sp = space(s, N);
    const Eigen::ArrayXd& v = *samples(f, N, r);
    const double whole = sp->norm(v, opts_.solver.norm_tol).value;
    const Eigen::ArrayXd partial = fourier::apply(v, [n](int k) {
      return fourier::Complex(std::abs(k) <= n ? 1.0 : 0.0);
    });
    const double tail = sp->norm(v - partial, opts_.solver.norm_tol).value;
    Best b;
    if (tail <= 1e-13 * whole) {
      b.value = tail;
      b.minimizer = fourier::interpolant(partial).truncated(n);
      return b;
    }
    const BestApproxResult res = best_approximation(v, n, *sp, opts_.solver);
    b.value = res.value;
    b.converged = res.converged;
    b.minimizer = res.minimizer;
    return b;
  });
}

Workbench::K Workbench::kfunc(const CatalogFunction& f, int alpha, const CatalogSpace& s, int N, double delta,
                              int r) const {
  const std::string key = f.id + "|" + std::to_string(alpha) + "|" + s.id() + "|" + std::to_string(N) + "|" +
                          fmt(delta) + "|" + std::to_string(r) + "|" + solver_key(opts_.solver);
  return k_memo().get(key, [&] {
    const Eigen::ArrayXd& v = *samples(f, N, alpha);
    const int res = resolution(PeriodicFunction::samples(v));
    const int M = std::min({128, N / 8 - 1, std::max(4 * r, 2 * res)});
    // near large δ and where p touches 1 the objective has kinks and cycles
    // gain ~1e-9 each; the suites need K to a few digits, not to 1e-10
    SolverOptions so = opts_.solver;
    so.max_cycles = std::min(so.max_cycles, k_cycle_cap);
    so.tol = std::max(so.tol, k_tol_floor);
    const KResult k = k_functional(v, delta, r, *space(s, N), M, so);
    return K{k.value, k.converged};
  });
}

SuiteCase make_case(std::string id, ParamMap params, double lhs, double rhs, double scale, bool solver_ok) {
  SuiteCase c;
  c.id = std::move(id);
  c.params = std::move(params);
  c.lhs = lhs;
  c.rhs = rhs;
  if (!(rhs > 10.0 * eps * scale)) {
    c.status = CaseStatus::skipped_degenerate;
    return c;
  }
  c.ratio = lhs / rhs;
  c.status = solver_ok ? CaseStatus::ok : CaseStatus::solver_flagged;
  return c;
}

namespace {

bool counted(const SuiteCase& c) {
  return (c.status == CaseStatus::ok || c.status == CaseStatus::solver_flagged) && c.ratio.has_value();
}

}  // namespace

std::vector<SeriesStat> series_stats(const std::vector<SuiteCase>& cases) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const SuiteCase& c : cases) {
    if (!counted(c) || !std::isfinite(*c.ratio) || !(*c.ratio > 0.0)) continue;
    const auto s = c.params.find("series");
    const auto x = c.params.find("x");
    if (s == c.params.end() || x == c.params.end()) continue;
    auto& g = groups[std::get<std::string>(s->second)];
    g.first.push_back(std::get<double>(x->second));
    g.second.push_back(*c.ratio);
  }
  std::vector<SeriesStat> out;
  for (const auto& [name, g] : groups) {
    SeriesStat st;
    st.name = name;
    st.points = static_cast<int>(g.first.size());
    st.max = *std::max_element(g.second.begin(), g.second.end());
    st.min = *std::min_element(g.second.begin(), g.second.end());
    st.slope = st.points >= 2 ? loglog_slope(g.first, g.second) : 0.0;
    out.push_back(st);
  }
  return out;
}

void finish(SuiteReport& r) {
  std::sort(r.cases.begin(), r.cases.end(), [](const SuiteCase& a, const SuiteCase& b) { return a.id < b.id; });
  r.max_ratio.reset();
  for (const SuiteCase& c : r.cases)
    if (counted(c)) {
      const double v = *c.ratio;
      if (!r.max_ratio || v > *r.max_ratio || std::isnan(v)) r.max_ratio = v;
    }
  r.slope.reset();
  for (const SeriesStat& s : series_stats(r.cases))
    if (s.points >= 2 && (!r.slope || std::abs(s.slope) > std::abs(*r.slope))) r.slope = s.slope;
}

bool all_finite(const SuiteReport& r) {
  for (const SuiteCase& c : r.cases) {
    if (c.status == CaseStatus::violated) return false;
    if (counted(c) && !std::isfinite(*c.ratio)) return false;
  }
  return true;
}

std::vector<SuiteCase> run_tasks(const std::vector<std::function<std::vector<SuiteCase>()>>& tasks, int jobs) {
  std::vector<std::vector<SuiteCase>> slots(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) { slots[i] = tasks[i](); });
  std::vector<SuiteCase> out;
  for (auto& s : slots)
    for (auto& c : s) out.push_back(std::move(c));
  return out;
}

std::vector<CatalogFunction> pick_functions(const LabOptions& o, const std::vector<std::string>& defaults) {
  std::vector<CatalogFunction> out;
  for (const auto& id : o.functions.empty() ? defaults : o.functions) out.push_back(find_function(id));
  return out;
}

std::vector<CatalogSpace> pick_spaces(const LabOptions& o, const std::vector<CatalogSpace>& defaults) {
  if (o.exponents.empty() && o.weights.empty()) return defaults;
  return admissible_spaces(o.exponents.empty() ? catalog_exponents() : o.exponents,
                           o.weights.empty() ? catalog_weights() : o.weights);
}

}  // namespace vexlab::lab
