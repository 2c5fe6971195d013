#include "lab_common.hpp"

#include "vexlab/fourier.hpp"
#include "vexlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vexlab {

using namespace lab;

namespace {

ParamMap base_params(const std::string& part, const CatalogFunction& f, const CatalogSpace& s) {
  ParamMap p;
  p["part"] = part;
  p["function"] = f.id;
  p["exponent"] = s.exponent_id;
  p["weight"] = s.weight_id;
  return p;
}

/// E_0, E_1, ... until the partial-sum tail falls below 1e-13 ||f|| (every
/// later value is then smaller still) or the degree reaches `cap`.
std::vector<Workbench::Best> best_sequence(const Workbench& wb, const CatalogFunction& f, const CatalogSpace& s,
                                           int N, int at_least, int cap) {
  std::vector<Workbench::Best> E;
  const double whole = wb.norm(s, N, *wb.samples(f, N, 0));
  for (int v = 0; v <= cap; ++v) {
    E.push_back(wb.best(f, 0, s, N, v));
    if (v >= at_least && E.back().value <= 1e-13 * whole) break;
  }
  return E;
}

}  // namespace

SuiteReport run_inverse_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  const auto spaces = pick_spaces(o, solver_spaces());
  const auto ns = pick(o.n, {4, 8, 16});
  const auto rs = pick(o.r, {1, 2});
  const int N = o.grid;
  const int n_max = *std::max_element(ns.begin(), ns.end());
  const int cap = std::min(128, N / 8 - 1);

  // Marchaud nodes u_j = 2^{-j/2}; t runs over a subset of them inside (0, 1/2)
  constexpr int last_node = 9;
  const std::vector<int> t_nodes{3, 5, 7, 9};
  const int mr = 1, mk = 1;

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces) {
      tasks.push_back([&] {
        std::vector<SuiteCase> out;
        const auto E = best_sequence(wb, f, s, N, n_max + 1, cap);
        bool conv = true;
        for (const auto& e : E) conv = conv && e.converged;
        auto Ev = [&](int v) { return v < static_cast<int>(E.size()) ? E[v].value : 0.0; };
        const double base = wb.norm(s, N, *wb.samples(f, N, 0));
        for (int r : rs) {
          const double scale = wb.scale(f, s, N, r);
          const std::string tail = f.id + "/" + s.id() + "/r=" + std::to_string(r);
          for (int n : ns) {
            auto params = [&](const std::string& part) {
              ParamMap p = base_params(part, f, s);
              p["n"] = std::int64_t{n};
              p["r"] = std::int64_t{r};
              p["series"] = part + "/" + tail;
              p["x"] = double(n);
              return p;
            };
            const std::string suffix = "/n=" + pad(n);
            // (i) K_r(f, 1/n) n^r against Σ_{ν<=n} (ν+1)^{r-1} E_ν
            const auto K = wb.kfunc(f, 0, s, N, 1.0 / n, r);
            double sum = 0.0;
            for (int v = 0; v <= n; ++v) sum += std::pow(v + 1.0, r - 1) * Ev(v);
            out.push_back(make_case("sum/" + tail + suffix, params("sum"), K.value * std::pow(n, r), sum, scale,
                                    conv && K.converged));
            // (iii) E_n(f^(r)) against (n+1)^r E_n + Σ_{ν>n} ν^{r-1} E_ν
            double beyond = 0.0;
            for (int v = n + 1; v < static_cast<int>(E.size()); ++v) beyond += std::pow(v, r - 1) * Ev(v);
            const auto Er = wb.best(f, r, s, N, n);
            out.push_back(make_case("derivative/" + tail + suffix, params("derivative"), Er.value,
                                    std::pow(n + 1.0, r) * Ev(n) + beyond, scale, conv && Er.converged));
            // (iv) K_1(f^(r), 1/n) against n^{-1} Σ_{ν<=n} (ν+1)^r E_ν + Σ_{ν>n} ν^{r-1} E_ν
            const int k = 1;
            const auto Kr = wb.kfunc(f, r, s, N, 1.0 / n, k);
            double head = 0.0;
            for (int v = 0; v <= n; ++v) head += std::pow(v + 1.0, k + r - 1) * Ev(v);
            ParamMap pc = params("combined");
            pc["k"] = std::int64_t{k};
            out.push_back(make_case("combined/" + tail + suffix, std::move(pc), Kr.value,
                                    std::pow(n, -k) * head + beyond, scale, conv && Kr.converged));
          }
        }
        // (ii) Marchaud: K_r(f, t) against t^r ∫_t^1 K_{r+k}(f, u) u^{-r-1} du, trapezoid in log u
        const double scale = N * base;
        std::vector<double> nodes(last_node + 1), values(last_node + 1);
        bool kconv = true;
        for (int j = 0; j <= last_node; ++j) {
          nodes[j] = std::pow(2.0, -j / 2.0);
          const auto K = wb.kfunc(f, 0, s, N, nodes[j], mr + mk);
          values[j] = K.value * std::pow(nodes[j], -mr);  // integrand in d(log u)
          kconv = kconv && K.converged;
        }
        const double ds = std::log(2.0) / 2.0;
        for (int j : t_nodes) {
          double integral = 0.0;
          for (int i = 0; i < j; ++i) integral += 0.5 * ds * (values[i] + values[i + 1]);
          const double t = nodes[j];
          const auto Kt = wb.kfunc(f, 0, s, N, t, mr);
          ParamMap p = base_params("marchaud", f, s);
          p["t"] = t;
          p["r"] = std::int64_t{mr};
          p["k"] = std::int64_t{mk};
          const std::string series = "marchaud/" + f.id + "/" + s.id();
          p["series"] = series;
          p["x"] = 1.0 / t;
          out.push_back(make_case(series + "/j=" + pad(j), std::move(p), Kt.value, std::pow(t, mr) * integral, scale,
                                  kconv && Kt.converged));
        }
        return out;
      });
    }

  SuiteReport rep;
  rep.suite = "inverse";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  // no trend band here: every ratio finite and nothing violated
  rep.pass = all_finite(rep) && rep.max_ratio.has_value();
  return rep;
}

SuiteReport run_lipschitz_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto sigmas = pick(o.sigma, {0.5, 1.0});

  struct Setting {
    CatalogSpace space;
    int J;
    std::vector<int> ns;
    std::vector<double> deltas;
    double band;
  };
  auto powers = [](int from, int to) {
    std::vector<double> d;
    for (int i = from; i <= to; ++i) d.push_back(std::ldexp(1.0, -i));
    return d;
  };
  std::vector<Setting> settings;
  const std::vector<CatalogSpace> chosen =
      pick_spaces(o, {make_space("2", "1"), make_space("2+cos(x)", "power_weight(gamma=0.5)")});
  for (const auto& s : chosen) {
    const bool plain = s.p.is_constant() && s.p(0.0) == 2.0 && s.w.is_unit();
    if (plain)
      settings.push_back({s, 14, pick(o.n, {2, 4, 8, 16, 32, 64}), pick(o.delta, powers(4, 10)), 0.1});
    else
      settings.push_back({s, 12, pick(o.n, {2, 4, 8, 16, 32}), pick(o.delta, powers(3, 8)), 0.2});
  }

  std::map<std::string, double> bands;
  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const Setting& st : settings)
    for (double sigma : sigmas) {
      const std::string tail = "sigma=" + fmt(sigma) + "/" + st.space.id();
      bands["best/" + tail] = st.band;
      bands["modulus/" + tail] = st.band;
      tasks.push_back([&, sigma, tail] {
        std::vector<SuiteCase> out;
        const CatalogFunction f = lacunary(sigma, st.J);
        const int N = 4 << st.J;
        const int rbar = static_cast<int>(std::floor(sigma / 2.0)) + 1;
        const double scale = N * wb.norm(st.space, N, *wb.samples(f, N, 0));
        for (int n : st.ns) {
          const auto E = wb.best(f, 0, st.space, N, n);
          ParamMap p = base_params("best", f, st.space);
          p["n"] = std::int64_t{n};
          p["sigma"] = sigma;
          p["J"] = std::int64_t{st.J};
          p["series"] = "best/" + tail;
          p["x"] = double(n);
          out.push_back(make_case("best/" + tail + "/n=" + pad(n), std::move(p), E.value, std::pow(n, -sigma), scale,
                                  E.converged));
        }
        const Eigen::ArrayXd& v = *wb.samples(f, N, 0);
        for (double d : st.deltas) {
          const double omega = wb.norm(st.space, N, fourier::apply(v, [d, rbar](int k) {
                                         return multiplier::modulus(k, d, rbar);
                                       }));
          ParamMap p = base_params("modulus", f, st.space);
          p["delta"] = d;
          p["r"] = std::int64_t{rbar};
          p["sigma"] = sigma;
          p["J"] = std::int64_t{st.J};
          p["series"] = "modulus/" + tail;
          p["x"] = 1.0 / d;
          out.push_back(make_case("modulus/" + tail + "/inv_delta=" + pad(std::lround(1.0 / d), 5), std::move(p),
                                  omega, std::pow(d, sigma), scale));
        }
        return out;
      });
    }

  SuiteReport rep;
  rep.suite = "lipschitz";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  bool pass = all_finite(rep) && rep.max_ratio.has_value();
  for (const SeriesStat& s : series_stats(rep.cases)) pass = pass && std::abs(s.slope) <= bands.at(s.name);
  rep.pass = pass;
  return rep;
}

}  // namespace vexlab
