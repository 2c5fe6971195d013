#include "lab_common.hpp"

#include "vexlab/fourier.hpp"
#include "vexlab/smoothing.hpp"
#include "vexlab/trig_approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace vexlab {

using namespace lab;

namespace {

std::string space_tag(const CatalogSpace& s) { return s.id(); }

ParamMap base_params(const std::string& part, const CatalogFunction* f, const CatalogSpace& s) {
  ParamMap p;
  p["part"] = part;
  if (f) p["function"] = f->id;
  p["exponent"] = s.exponent_id;
  p["weight"] = s.weight_id;
  return p;
}

double geometric_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    if (!(x > 0.0)) return 0.0;
    s += std::log(x);
  }
  return std::exp(s / v.size());
}

/// Uniform on [-1, 1) from the top 53 bits, identical on every platform.
double uniform_pm1(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

}  // namespace

SuiteReport run_jackson_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  const auto spaces = pick_spaces(o, catalog_spaces());
  const auto e_spaces = pick_spaces(o, solver_spaces());
  const auto ns = pick(o.n, {4, 8, 16, 32, 64});
  const auto rs = pick(o.r, {1, 2});
  const auto alphas = pick(o.alpha, {0});
  const int N = o.grid;

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces)
      for (int r : rs)
        for (int a : alphas)
          tasks.push_back([&, r, a] {
            std::vector<SuiteCase> out;
            const Eigen::ArrayXd& fa = *wb.samples(f, N, a);
            const double top = wb.norm(s, N, *wb.samples(f, N, a + r));
            const std::string series = "tur/" + f.id + "/" + space_tag(s) + "/r=" + std::to_string(r) +
                                       "/a=" + std::to_string(a);
            for (int n : ns) {
              if (n < r) continue;
              const double err = wb.norm(s, N, fa - jackson_stechkin(fa, n, r));
              ParamMap p = base_params("tur", &f, s);
              p["n"] = std::int64_t{n};
              p["r"] = std::int64_t{r};
              p["alpha"] = std::int64_t{a};
              p["series"] = series;
              p["x"] = double(n);
              out.push_back(make_case(series + "/n=" + pad(n), std::move(p), err * std::pow(n, r), top,
                                      wb.scale(f, s, N, a + r)));
            }
            return out;
          });
  for (const auto& f : functions)
    for (const auto& s : e_spaces)
      for (int r : rs)
        for (int a : alphas)
          tasks.push_back([&, r, a] {
            std::vector<SuiteCase> out;
            const std::string series = "best/" + f.id + "/" + space_tag(s) + "/r=" + std::to_string(r) +
                                       "/a=" + std::to_string(a);
            for (int n : ns) {
              const auto lo = wb.best(f, a, s, N, n);
              const auto hi = wb.best(f, a + r, s, N, n);
              ParamMap p = base_params("best", &f, s);
              p["n"] = std::int64_t{n};
              p["r"] = std::int64_t{r};
              p["alpha"] = std::int64_t{a};
              p["series"] = series;
              p["x"] = double(n);
              out.push_back(make_case(series + "/n=" + pad(n), std::move(p), lo.value * std::pow(n, r), hi.value,
                                      wb.scale(f, s, N, a + r), lo.converged && hi.converged));
            }
            return out;
          });

  SuiteReport rep;
  rep.suite = "jackson";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  bool pass = all_finite(rep) && rep.max_ratio.has_value();
  for (const SeriesStat& st : series_stats(rep.cases))
    if (st.points >= 2) pass = pass && std::abs(st.slope) <= 0.15 && st.max < 10.0 * st.min;
  rep.pass = pass;
  return rep;
}

SuiteReport run_bernstein_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto spaces = pick_spaces(o, catalog_spaces());
  const auto ns = pick(o.n, {4, 8, 16, 32, 64});
  const auto alphas = pick(o.alpha, {1, 2});
  constexpr int samples = 3;

  // the same polynomials for every space: one stream per degree
  std::map<int, std::vector<std::pair<std::string, TrigPolynomial<double>>>> polys;
  for (int n : ns) {
    std::mt19937_64 rng(o.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n));
    TrigPolynomial<double> c(n);
    c.a(n) = 1.0;
    polys[n].emplace_back("cos", c);
    for (int i = 0; i < samples; ++i) {
      TrigPolynomial<double> t(n);
      for (int k = 0; k <= n; ++k) {
        t.a(k) = uniform_pm1(rng);
        if (k > 0) t.b(k) = uniform_pm1(rng);
      }
      polys[n].emplace_back("rand" + std::to_string(i + 1), t);
    }
  }

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& s : spaces)
    for (int a : alphas)
      for (int n : ns)
        tasks.push_back([&, a, n] {
          std::vector<SuiteCase> out;
          const int N = std::max(o.grid, next_power_of_two(8L * (n + 1)));
          const double h = pi / n;
          for (const auto& [name, T] : polys.at(n)) {
            const Eigen::ArrayXd v = fourier::sample(T, N);
            const double lhs = wb.norm(s, N, fourier::sample(T.derivative(a), N)) * std::pow(2.0 * std::sin(n * h / 2), a);
            const double diff = wb.norm(s, N, fourier::sample(fourier::apply(T, [h, a](int k) {
                                                 return multiplier::difference(k, h, a);
                                               }), N));
            ParamMap p = base_params("bernstein", nullptr, s);
            p["n"] = std::int64_t{n};
            p["alpha"] = std::int64_t{a};
            p["h"] = h;
            p["sample"] = name;
            const std::string series = space_tag(s) + "/a=" + std::to_string(a);
            p["series"] = series;
            p["x"] = double(n);
            out.push_back(make_case(series + "/n=" + pad(n) + "/" + name, std::move(p), lhs,
                                    std::pow(n, a) * diff, N * wb.norm(s, N, v)));
          }
          return out;
        });

  SuiteReport rep;
  rep.suite = "bernstein";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  // drift of the per-degree maximum along each series
  std::map<std::string, std::map<double, double>> per_n;
  for (const SuiteCase& c : rep.cases)
    if (c.status == CaseStatus::ok && c.ratio) {
      double& m = per_n[std::get<std::string>(c.params.at("series"))][std::get<double>(c.params.at("x"))];
      m = std::max(m, *c.ratio);
    }
  bool pass = all_finite(rep) && rep.max_ratio.has_value();
  for (const auto& [series, m] : per_n) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& [n, v] : m) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    pass = pass && hi < 2.0 * lo;
  }
  rep.pass = pass;
  return rep;
}

SuiteReport run_kfunc_jackson_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  const auto spaces = pick_spaces(o, solver_spaces());
  const auto ns = pick(o.n, {4, 8, 16, 32});
  const auto rs = pick(o.r, {1});
  const auto alphas = pick(o.alpha, {0});
  const int N = o.grid;

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces)
      for (int r : rs)
        for (int a : alphas)
          tasks.push_back([&, r, a] {
            std::vector<SuiteCase> out;
            const int m = r;
            const Eigen::ArrayXd& fa = *wb.samples(f, N, a);
            const double scale = wb.scale(f, s, N, a + r);
            const std::string tail = f.id + "/" + space_tag(s) + "/r=" + std::to_string(r) + "/a=" + std::to_string(a);
            const int n_max = *std::max_element(ns.begin(), ns.end());
            std::vector<double> E;
            bool conv = true;
            for (int v = 1; v <= n_max; ++v) {
              const auto b = wb.best(f, a, s, N, v);
              E.push_back(b.value);
              conv = conv && b.converged;
            }
            for (int n : ns) {
              if (n < r) continue;
              const auto k0 = wb.kfunc(f, a, s, N, 1.0 / n, m);
              const auto kr = wb.kfunc(f, a + r, s, N, 1.0 / n, m);
              auto params = [&](const std::string& part) {
                ParamMap p = base_params(part, &f, s);
                p["n"] = std::int64_t{n};
                p["r"] = std::int64_t{r};
                p["m"] = std::int64_t{m};
                p["alpha"] = std::int64_t{a};
                p["series"] = part + "/" + tail;
                p["x"] = double(n);
                return p;
              };
              const std::string suffix = "/n=" + pad(n);
              const double err = wb.norm(s, N, fa - jackson_stechkin(fa, n, r));
              out.push_back(make_case("stechkin/" + tail + suffix, params("stechkin"), err, k0.value, scale,
                                      k0.converged));
              const double En = E[n - 1];
              out.push_back(make_case("best/" + tail + suffix, params("best"), En * std::pow(n, r), kr.value, scale,
                                      conv && kr.converged));
              const double gm = geometric_mean(std::vector<double>(E.begin(), E.begin() + n));
              SuiteCase c = make_case("geometric/" + tail + suffix, params("geometric"), gm * std::pow(n, r),
                                      kr.value, scale, conv && kr.converged);
              // E_s is non-increasing, so the mean cannot exceed E_1
              if (gm > E[0] * (1.0 + 1e-8) + 10.0 * eps * scale) c.status = CaseStatus::violated;
              out.push_back(std::move(c));
            }
            return out;
          });

  SuiteReport rep;
  rep.suite = "kfunc_jackson";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  // no trend band here: every ratio finite and nothing violated
  rep.pass = all_finite(rep) && rep.max_ratio.has_value();
  return rep;
}

SuiteReport run_simultaneous_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  const auto spaces = pick_spaces(o, solver_spaces());
  const auto ns = pick(o.n, {4, 8, 16});
  const auto rs = pick(o.r, {1, 2});
  const int s_order = 1;
  const int N = o.grid;

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces)
      for (int r : rs)
        tasks.push_back([&, r] {
          std::vector<SuiteCase> out;
          const Eigen::ArrayXd& fr = *wb.samples(f, N, r);
          const double scale = wb.scale(f, s, N, r);
          for (int n : ns) {
            const auto best = wb.best(f, 0, s, N, n);
            const auto er = wb.best(f, r, s, N, n);
            const double h = 1.0 / n;
            const double omega = wb.norm(s, N, fourier::apply(fr, [h, s_order](int k) {
                                           return multiplier::modulus(k, h, s_order);
                                         }));
            const Eigen::ArrayXd& f0 = *wb.samples(f, N, 0);
            const Eigen::ArrayXd w = fourier::apply(f0, [n](int k) {
              return fourier::Complex(vallee_poussin_factor(k, n));
            });
            for (int k = 0; k <= r; ++k) {
              const Eigen::ArrayXd& fk = *wb.samples(f, N, k);
              const std::string tail = f.id + "/" + space_tag(s) + "/r=" + std::to_string(r) + "/k=" +
                                       std::to_string(k);
              auto params = [&](const std::string& part) {
                ParamMap p = base_params(part, &f, s);
                p["n"] = std::int64_t{n};
                p["r"] = std::int64_t{r};
                p["k"] = std::int64_t{k};
                p["series"] = part + "/" + tail;
                p["x"] = double(n);
                if (part == "vallee_poussin") p["s"] = std::int64_t{s_order};
                return p;
              };
              const double lhs_best =
                  wb.norm(s, N, fk - fourier::sample(best.minimizer.derivative(k), N)) * std::pow(n, r - k);
              out.push_back(make_case("best/" + tail + "/n=" + pad(n), params("best"), lhs_best, er.value, scale,
                                      best.converged && er.converged));
              const Eigen::ArrayXd wk = k == 0 ? w : fourier::derivative(w, k);
              const double lhs_w = wb.norm(s, N, fk - wk) * std::pow(n, r - k);
              out.push_back(make_case("vallee_poussin/" + tail + "/n=" + pad(n), params("vallee_poussin"), lhs_w,
                                      omega, scale));
            }
          }
          return out;
        });

  SuiteReport rep;
  rep.suite = "simultaneous";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  // no trend band here: every ratio finite and nothing violated
  rep.pass = all_finite(rep) && rep.max_ratio.has_value();
  return rep;
}

}  // namespace vexlab
