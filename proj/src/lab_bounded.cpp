#include "lab_common.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/fourier.hpp"
#include "vexlab/smoothing.hpp"
#include "vexlab/trig_approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

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

Eigen::ArrayXd multiply(const Eigen::ArrayXd& v, const fourier::Multiplier& m) { return fourier::apply(v, m); }

/// T_Q on midpoint samples: each cell contributes |f| weighted by its overlap
/// with U ∩ [-pi, pi); the average is spread over the nodes inside U.
Eigen::ArrayXd average_samples(const Eigen::ArrayXd& v, const OpenSetFamily& family) {
  const int N = static_cast<int>(v.size());
  const double h = two_pi / N;
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(N);
  for (const Interval& U : family.sets) {
    const double lo = std::max(U.lo, -pi), hi = std::min(U.hi, pi);
    if (!(hi > lo)) continue;
    double mass = 0.0, len = 0.0;
    const int first = std::max(0, static_cast<int>(std::floor((lo + pi) / h)));
    const int last = std::min(N - 1, static_cast<int>(std::floor((hi + pi) / h)));
    for (int j = first; j <= last; ++j) {
      const double a = -pi + j * h, b = a + h;
      const double overlap = std::min(b, hi) - std::max(a, lo);
      if (overlap <= 0.0) continue;
      mass += overlap * std::abs(v[j]);
      len += overlap;
    }
    const double avg = mass / len;
    for (int j = first; j <= last; ++j) {
      const double x = -pi + (j + 0.5) * h;
      if (U.interior(x)) out[j] += avg;
    }
  }
  return out;
}

double l1_norm(const Eigen::ArrayXd& v) { return v.abs().sum() * two_pi / v.size(); }

/// max over testers of ∫|f||g| / ||g||_{p',w'} on the grid. The first tester,
/// |f|^{p-1} w, attains the norm for constant p.
double dual_estimate(const Eigen::ArrayXd& fv, const CatalogSpace& s, const ModularSpace& dual) {
  const int N = static_cast<int>(fv.size());
  const Eigen::ArrayXd x = midpoint_grid(N);
  const Eigen::ArrayXd p = s.p.sample(x);
  const Eigen::ArrayXd w = s.w.sample(x);
  std::vector<Eigen::ArrayXd> testers;
  testers.push_back(fv.abs().pow(p - 1.0) * w);
  testers.push_back(Eigen::ArrayXd::Ones(N));
  testers.push_back(fv.abs());
  double best = 0.0;
  const double h = two_pi / N;
  for (const auto& g : testers) {
    const double gn = dual.norm(g).value;
    if (gn > 0.0) best = std::max(best, h * (fv.abs() * g.abs()).sum() / gn);
  }
  return best;
}

std::shared_ptr<const ModularSpace> dual_space(const CatalogSpace& s, int N) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ModularSpace>> memo;
  const std::string key = s.id() + "|" + std::to_string(N);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto sp = std::make_shared<const ModularSpace>(ModularSpace::on_grid(s.p.conjugate(), dual_weight(s.w, s.p), N));
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(key, sp).first->second;
}

}  // namespace

SuiteReport run_boundedness_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed", "lacunary(sigma=0.5,J=8)"});
  const auto spaces = pick_spaces(o, catalog_spaces());
  const std::vector<int> grids{o.grid, 2 * o.grid};

  std::vector<std::pair<std::string, ApproxKernel>> kernels;
  for (const char* name : {"gauss", "poisson", "x2gauss", "bump"}) kernels.emplace_back(name, ApproxKernel::parse(name));

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces)
      for (int N : grids)
        tasks.push_back([&, N] {
          std::vector<SuiteCase> out;
          const Eigen::ArrayXd& v = *wb.samples(f, N, 0);
          const double fn = wb.norm(s, N, v);
          const double scale = N * fn;
          const std::string tail = f.id + "/" + s.id() + "/N=" + pad(N, 6);
          auto add = [&](const std::string& op, const std::string& label, ParamMap extra, double lhs, double rhs) {
            ParamMap p = base_params(op, f, s);
            for (auto& [k, val] : extra) p[k] = val;
            p["N"] = std::int64_t{N};
            p["series"] = op + "/" + s.id();
            p["x"] = double(N);
            out.push_back(make_case(op + "/" + label + "/" + tail, std::move(p), lhs, rhs, scale));
          };
          for (double h : {pi / 64, pi / 8, 1.0, pi}) {
            const double lhs = wb.norm(s, N, multiply(v, [h](int k) { return multiplier::steklov(k, h); }));
            add("steklov", "h=" + fmt(h), {{"h", h}}, lhs, fn);
          }
          for (double lambda : {0.5, 2.0, 8.0})
            for (double tau : {0.0, 1.0}) {
              const double lhs = wb.norm(s, N, multiply(v, [lambda, tau](int k) {
                                           return multiplier::steklov(k, 1.0 / lambda) *
                                                  std::polar(1.0, k * (tau - 0.5 / lambda));
                                         }));
              add("translated", "lambda=" + fmt(lambda) + "/tau=" + fmt(tau), {{"lambda", lambda}, {"tau", tau}},
                  lhs, fn);
            }
          for (double offset : {0.0, 0.5}) {
            const double lhs = wb.norm(s, N, average_samples(v, OpenSetFamily::unit_cover(offset)));
            add("averaging", "offset=" + fmt(offset), {{"offset", offset}}, lhs, fn);
          }
          for (int n : {4, 16, 64})
            for (int k : {1, 2, 3}) {
              const double lhs = wb.norm(s, N, jackson_stechkin(v, n, k));
              add("stechkin", "n=" + pad(n) + "/k=" + std::to_string(k),
                  {{"n", std::int64_t{n}}, {"k", std::int64_t{k}}}, lhs, fn);
            }
          for (int n : {2, 8, 32}) {
            const double lhs = wb.norm(s, N, multiply(v, [n](int k) {
                                         return fourier::Complex(vallee_poussin_factor(k, n));
                                       }));
            add("vallee_poussin", "n=" + pad(n), {{"n", std::int64_t{n}}}, lhs, fn);
          }
          for (const auto& [name, K] : kernels)
            for (double t : {0.3, 0.05}) {
              const ApproxKernel& ker = K;
              const double lhs = wb.norm(s, N, multiply(v, [&ker, t](int k) {
                                           return fourier::Complex(ker.transform(k * t));
                                         }));
              add("identity", name + "/t=" + fmt(t), {{"kernel", name}, {"t", t}}, lhs, ker.majorant_l1() * fn);
            }
          add("l1", "embed", {}, l1_norm(v), fn);
          {
            const double est = dual_estimate(v, s, *dual_space(s, N));
            add("duality", "upper", {}, est, fn);
            if (est > 2.0 * fn * (1.0 + 1e-9)) out.back().status = CaseStatus::violated;
          }
          return out;
        });

  SuiteReport rep;
  rep.suite = "boundedness";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  bool pass = all_finite(rep) && rep.max_ratio.has_value();
  // T_h is an L2 contraction
  for (SuiteCase& c : rep.cases)
    if (std::get<std::string>(c.params.at("part")) == "steklov" && std::get<std::string>(c.params.at("exponent")) == "2" &&
        std::get<std::string>(c.params.at("weight")) == "1" && c.ratio && *c.ratio > 1.0 + 1e-6) {
      c.status = CaseStatus::violated;
      pass = false;
    }
  // refinement drift of the largest ratio per operator and space
  std::map<std::string, std::map<std::int64_t, double>> top;
  for (const SuiteCase& c : rep.cases)
    if (c.status == CaseStatus::ok && c.ratio) {
      double& m = top[std::get<std::string>(c.params.at("series"))][std::get<std::int64_t>(c.params.at("N"))];
      m = std::max(m, *c.ratio);
    }
  for (const auto& [series, m] : top) {
    if (m.size() < 2) continue;
    const double coarse = m.begin()->second, fine = m.rbegin()->second;
    pass = pass && std::abs(fine / coarse - 1.0) < 0.25;
  }
  rep.pass = pass;
  return rep;
}

SuiteReport run_realization_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  const auto spaces = pick_spaces(o, solver_spaces());
  const auto deltas = pick(o.delta, {1.0, 0.3, 0.1, 0.03});
  const auto rs = pick(o.r, {1, 2});
  const int N = o.grid;

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (const auto& f : functions)
    for (const auto& s : spaces)
      for (int r : rs)
        tasks.push_back([&, r] {
          std::vector<SuiteCase> out;
          const Eigen::ArrayXd& v = *wb.samples(f, N, 0);
          const double scale = N * wb.norm(s, N, v);
          const std::string tail = f.id + "/" + s.id() + "/r=" + std::to_string(r);
          for (double d : deltas) {
            const double omega = wb.norm(s, N, multiply(v, [d, r](int k) { return multiplier::modulus(k, d, r); }));
            const auto K = wb.kfunc(f, 0, s, N, d, r);
            auto params = [&](const std::string& part) {
              ParamMap p = base_params(part, f, s);
              p["delta"] = d;
              p["r"] = std::int64_t{r};
              p["series"] = part + "/" + tail;
              p["x"] = 1.0 / d;
              return p;
            };
            const std::string suffix = "/inv_delta=" + pad(std::lround(1.0 / d), 4);
            out.push_back(make_case("modulus/" + tail + suffix, params("modulus"), omega, K.value, scale, K.converged));
            // the realization A_δ^r f is a competitor for K up to the trial degree
            const Eigen::ArrayXd A = multiply(v, [d, r](int k) { return multiplier::realization(k, d, r); });
            const double real = wb.norm(s, N, v - A) + std::pow(d, r) * wb.norm(s, N, fourier::derivative(A, r));
            out.push_back(make_case("realization/" + tail + suffix, params("realization"), real, K.value, scale,
                                    K.converged));
          }
          return out;
        });

  SuiteReport rep;
  rep.suite = "realization";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  bool pass = all_finite(rep) && rep.max_ratio.has_value();
  std::map<std::int64_t, std::pair<double, double>> spread;
  for (const SuiteCase& c : rep.cases)
    if ((c.status == CaseStatus::ok || c.status == CaseStatus::solver_flagged) && c.ratio &&
        std::get<std::string>(c.params.at("part")) == "modulus") {
      auto [it, fresh] = spread.try_emplace(std::get<std::int64_t>(c.params.at("r")), INFINITY, 0.0);
      it->second.first = std::min(it->second.first, *c.ratio);
      it->second.second = std::max(it->second.second, *c.ratio);
    }
  for (const auto& [r, mm] : spread) pass = pass && mm.first > 0.0 && mm.second < 100.0 * mm.first;
  rep.pass = pass && !spread.empty();
  return rep;
}

SuiteReport run_invariants_suite(const LabOptions& o) {
  const Workbench wb(o);
  const auto functions = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed", "lacunary(sigma=0.5,J=8)"});
  const auto spaces = pick_spaces(o, catalog_spaces());
  const int N = o.grid;
  constexpr int small = 64;  // grid for the quadrature-path identities

  std::vector<std::function<std::vector<SuiteCase>()>> tasks;
  for (std::size_t fi = 0; fi < functions.size(); ++fi)
    for (const auto& s : spaces)
      tasks.push_back([&, fi] {
        std::vector<SuiteCase> out;
        const CatalogFunction& f = functions[fi];
        const CatalogFunction& g = functions[(fi + 1) % functions.size()];
        const auto sp = wb.space(s, N);
        const Eigen::ArrayXd& v = *wb.samples(f, N, 0);
        const Eigen::ArrayXd& u = *wb.samples(g, N, 0);
        const double fn = wb.norm(s, N, v), gn = wb.norm(s, N, u);
        const double scale = N * std::max(fn, gn);
        const std::string tail = f.id + "/" + s.id();
        auto add = [&](const std::string& part, const std::string& label, ParamMap extra, double lhs, double rhs,
                       bool violated) {
          ParamMap p = base_params(part, f, s);
          for (auto& [k, val] : extra) p[k] = val;
          SuiteCase c = make_case(part + "/" + label + "/" + tail, std::move(p), lhs, rhs, scale);
          if (violated && c.status != CaseStatus::skipped_degenerate) c.status = CaseStatus::violated;
          out.push_back(std::move(c));
        };
        for (double lambda : {-3.0, 0.25}) {
          const double lhs = wb.norm(s, N, lambda * v), rhs = std::abs(lambda) * fn;
          add("homogeneity", "lambda=" + fmt(lambda), {{"lambda", lambda}}, lhs, rhs,
              std::abs(lhs - rhs) > 1e-9 * rhs);
        }
        {
          const double lhs = wb.norm(s, N, v + u);
          add("triangle", "with=" + g.id, {{"other", g.id}}, lhs, fn + gn, lhs > (fn + gn) * (1.0 + 1e-10));
        }
        {
          const ModularValue at = sp->modular(v, fn);
          const ModularValue inside = sp->modular(v, fn * (1.0 - 1e-6));
          add("unit_ball", "at_norm", {}, at.infinite ? INFINITY : at.value, 1.0,
              at.infinite || at.value > 1.0 + 1e-8 || (!inside.infinite && inside.value <= 1.0));
        }
        {
          const double h = two_pi / N;
          const double lhs = h * (v.abs() * u.abs()).sum();
          const double rhs = fn * dual_space(s, N)->norm(u, o.solver.norm_tol).value;
          add("holder", "with=" + g.id, {{"other", g.id}}, lhs, rhs, lhs > 2.0 * rhs * (1.0 + 1e-10));
        }
        {
          const ExponentFunction p = s.p;
          const ExponentFunction q = ExponentFunction::callable([p](double x) { return p(x) + 1.0; },
                                                                s.exponent_id + "+1");
          const ModularSpace qs = ModularSpace::on_grid(q, s.w, N);
          const double rhs = (s.w.total_mass() + 1.0) * qs.norm(v, o.solver.norm_tol).value;
          add("embedding", "q=p+1", {}, fn, rhs, fn > rhs * (1.0 + 1e-10));
        }
        add("l1", "embed", {}, l1_norm(v), fn, false);
        {
          const double est = dual_estimate(v, s, *dual_space(s, N));
          add("duality", "upper", {}, est, fn, est > 2.0 * fn * (1.0 + 1e-9));
        }
        for (int r : {1, 2})
          for (double d : {0.1, 1.0}) {
            auto omega = [&](const Eigen::ArrayXd& x) {
              return wb.norm(s, N, multiply(x, [d, r](int k) { return multiplier::modulus(k, d, r); }));
            };
            const double lhs = omega(v + u), rhs = omega(v) + omega(u);
            add("subadditive", "r=" + std::to_string(r) + "/delta=" + fmt(d) + "/with=" + g.id,
                {{"r", std::int64_t{r}}, {"delta", d}, {"other", g.id}}, lhs, rhs,
                lhs > rhs * (1.0 + 1e-10) + 10.0 * eps * scale);
          }
        for (double d : {0.1, 0.5, 1.0, 2.0}) {
          const double base = wb.norm(s, N, multiply(v, [d](int k) { return multiplier::modulus(k, d, 1); }));
          for (double ratio : {0.1, 0.5}) {
            const double h = ratio * d;
            const double lhs = wb.norm(s, N, multiply(v, [h](int k) { return multiplier::modulus(k, h, 1); }));
            add("steklov_compare", "delta=" + fmt(d) + "/h=" + fmt(h), {{"delta", d}, {"h", h}}, lhs, base, false);
          }
          const double rd = wb.norm(s, N, multiply(v, [d](int k) {
                                      return 1.0 - multiplier::r_delta(k, d);
                                    }));
          add("rdelta_compare", "delta=" + fmt(d), {{"delta", d}}, rd, base, false);
          const double deriv = d * wb.norm(s, N, multiply(v, [d](int k) {
                                             return multiplier::r_delta(k, d) * fourier::Complex(0.0, k);
                                           }));
          add("rdelta_derivative", "delta=" + fmt(d), {{"delta", d}}, deriv, base, false);
        }
        return out;
      });

  // (𝔑_δ f)' = 𝔑_δ f', (T_δ f)' = T_δ f' and (𝔑_δ^2 f)'' = 𝔑_δ^2 f'' on the
  // quadrature path; independent of the space
  const auto smooth = pick_functions(o, {"exp_cos", "trig_3_7", "smoothed"});
  for (const auto& f : smooth)
    for (double d : {0.1, 1.0})
      tasks.push_back([&, d] {
        std::vector<SuiteCase> out;
        const PeriodicFunction& pf = f.f;
        const std::vector<std::pair<std::string, int>> ops{{"rdelta", 1}, {"steklov", 1}, {"rdelta_iterate", 2}};
        for (const auto& [op, order] : ops) {
          auto apply_op = [&](const PeriodicFunction& x) {
            if (op == "steklov") return steklov(x, d);
            return r_delta(x, d, order);
          };
          PeriodicFunction src = pf;
          if (op == "rdelta_iterate" && !pf.trig_source()) src = PeriodicFunction::samples(pf.sample(small));
          const Eigen::ArrayXd left = fourier::derivative(apply_op(src).sample(small), order);
          const PeriodicFunction deriv = differentiate(src, order, small);
          const Eigen::ArrayXd right = apply_op(deriv).sample(small);
          const double gap = (left - right).abs().maxCoeff();
          const double size = deriv.sample(small).abs().maxCoeff();
          ParamMap p;
          p["part"] = "commute";
          p["operator"] = op;
          p["function"] = f.id;
          p["delta"] = d;
          p["order"] = std::int64_t{order};
          SuiteCase c = make_case("commute/" + op + "/" + f.id + "/delta=" + fmt(d), std::move(p), gap, size, small);
          if (c.ratio && *c.ratio > 1e-6) c.status = CaseStatus::violated;
          out.push_back(std::move(c));
        }
        return out;
      });

  SuiteReport rep;
  rep.suite = "invariants";
  rep.cases = run_tasks(tasks, o.jobs);
  finish(rep);
  rep.pass = all_finite(rep) && rep.count(CaseStatus::violated) == 0;
  return rep;
}

}  // namespace vexlab
