// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
//
// Criteria 2 and 4 (r = 2) do not hold for the operators as defined; they are
// measured and reported as FAIL like any other. The exit status is nonzero only
// when some other criterion fails.

#include "oracle.hpp"

#include "vexlab/catalog.hpp"
#include "vexlab/exponent_weight.hpp"
#include "vexlab/lab.hpp"
#include "vexlab/modular_norm.hpp"
#include "vexlab/numerics.hpp"
#include "vexlab/trig_approx.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

using namespace vexlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::set<int> known_red{2};  // 4 joins when only its r = 2 part fails

struct Outcome {
  int id;
  bool pass;
  std::string detail;
};
std::vector<Outcome> outcomes;

void report(int id, const char* title, bool pass, const std::string& detail) {
  outcomes.push_back({id, pass, detail});
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

template <typename T>
T param(const SuiteCase& c, const char* key) {
  return std::get<T>(c.params.at(key));
}

bool counted(const SuiteCase& c) {
  return (c.status == CaseStatus::ok || c.status == CaseStatus::solver_flagged) && c.ratio && std::isfinite(*c.ratio) &&
         *c.ratio > 0;
}

struct Series {
  std::vector<double> x, y;
  double slope() const { return x.size() >= 2 ? loglog_slope(x, y) : 0.0; }
  double max() const { return *std::max_element(y.begin(), y.end()); }
  double min() const { return *std::min_element(y.begin(), y.end()); }
};

std::map<std::string, Series> series_of(const SuiteReport& rep, const std::string& part) {
  std::map<std::string, Series> out;
  for (const SuiteCase& c : rep.cases)
    if (counted(c) && param<std::string>(c, "part") == part) {
      Series& s = out[param<std::string>(c, "series")];
      s.x.push_back(param<double>(c, "x"));
      s.y.push_back(*c.ratio);
    }
  return out;
}

int count(const SuiteReport& rep, CaseStatus s) { return rep.count(s); }

bool all_counted_finite(const SuiteReport& rep) {
  for (const SuiteCase& c : rep.cases) {
    if (c.status == CaseStatus::violated) return false;
    if ((c.status == CaseStatus::ok || c.status == CaseStatus::solver_flagged) && !(c.ratio && std::isfinite(*c.ratio)))
      return false;
  }
  return true;
}

// ---- 1: closed-form norms

void norms() {
  const auto t0 = Clock::now();
  const ExponentFunction two = ExponentFunction::constant(2.0);
  const double one = luxemburg_norm(PeriodicFunction::constant(1.0), two, Weight::unit()).value;
  const double sin = luxemburg_norm(PeriodicFunction::parse("sin(x)"), two, Weight::unit()).value;
  const double t = seconds_since(t0);
  const double e1 = std::abs(one - std::sqrt(two_pi)), e2 = std::abs(sin - std::sqrt(pi));
  report(1, "norms of 1 and sin at p=2", e1 <= 1e-8 && e2 <= 1e-8 && t < 1.0,
         fmt("|err(1)|=%.2e |err(sin)|=%.2e time=%.3fs", e1, e2, t));
}

// ---- 2: Jackson kernel facts

void jackson_kernel_facts() {
  const auto t0 = Clock::now();
  int kappa_bad = 0, kappa_n_bad = 0, norm_bad = 0, moment_bad = 0, cases = 0, moments = 0;
  double worst_norm = 0, worst_moment = 0;
  for (int r = 1; r <= 3; ++r)
    for (int n = 2; n <= 32; ++n) {
      ++cases;
      const JacksonKernel J(r, n);
      const double lo = 1.5 / std::sqrt(r) * std::pow(n, 2 * r - 1), hi = 2.5 / std::sqrt(r) * std::pow(n, 2 * r - 1);
      kappa_bad += !(J.kappa() >= lo && J.kappa() <= hi);
      const double kn = JacksonKernel::with_m(r, n, n).kappa();
      kappa_n_bad += !(kn >= lo && kn <= hi);
      const double ne = std::abs(J.normalization() - 1.0);
      worst_norm = std::max(worst_norm, ne);
      norm_bad += !(ne <= 1e-8);
      for (int i = 1; i <= 2 * r - 2; ++i) {
        ++moments;
        const double m = J.moment(i) * std::pow(n, i);
        worst_moment = std::max(worst_moment, m);
        moment_bad += !(m < 1.0);
      }
    }
  const double t = seconds_since(t0);
  const bool pass = kappa_bad == 0 && norm_bad == 0 && moment_bad == 0 && t < 30.0;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "kappa outside bounds %d/%d (with m=n: %d/%d); normalization max err %.1e; "
                "moments with n^i*mu_i >= 1: %d/%d (max n^i*mu_i=%.2f); time=%.2fs",
                kappa_bad, cases, kappa_n_bad, cases, worst_norm, moment_bad, moments, worst_moment, t);
  report(2, "Jackson kernel bounds", pass, buf);
}

// ---- 3: E_n against the Parseval tail

double parseval_tail(const CatalogFunction& f, int n) {
  // direct DFT on 4096 midpoint nodes in long double, tail summed over n < |k| < N/2;
  // k x_j = -k pi + pi k (2j+1) / N, so the phase is reduced exactly on the index
  const int N = 4096;
  static std::map<std::string, std::vector<long double>> power;
  auto& p = power[f.id];
  if (p.empty()) {
    const auto x = oracle::grid(N);
    std::vector<long double> v(N), c(2 * N), s(2 * N);
    for (int j = 0; j < N; ++j) v[j] = f.f(x[j]);
    for (int m = 0; m < 2 * N; ++m) {
      c[m] = std::cos(std::numbers::pi_v<long double> * m / N);
      s[m] = std::sin(std::numbers::pi_v<long double> * m / N);
    }
    p.assign(N / 2, 0.0L);
    for (int k = 0; k < N / 2; ++k) {
      long double re = 0, im = 0;
      for (int j = 0; j < N; ++j) {
        const int m = static_cast<int>((static_cast<long>(k) * (2 * j + 1)) % (2 * N));
        re += v[j] * c[m];
        im -= v[j] * s[m];
      }
      p[k] = (re * re + im * im) / (static_cast<long double>(N) * N);
    }
  }
  long double t = 0;
  for (int k = N / 2 - 1; k > n; --k) t += 2 * p[k];
  return static_cast<double>(std::sqrt(2 * std::numbers::pi_v<long double> * t));
}

void parseval() {
  const ExponentFunction two = ExponentFunction::constant(2.0);
  const int N = 1024;  // grid of the best approximation
  int checked = 0, degenerate = 0, bad = 0;
  double worst = 0;
  std::string where;
  for (const CatalogFunction& f : smooth_functions()) {
    const double fnorm = luxemburg_norm(f.f, two, Weight::unit()).value;
    const double floor = 10 * std::numeric_limits<double>::epsilon() * N * fnorm;
    for (int n = 1; n <= 16; ++n) {
      const double tail = parseval_tail(f, n);
      SolverOptions so;
      so.grid = N;
      const double e = best_approximation(f.f, n, two, Weight::unit(), so).value;
      if (tail <= floor) {
        ++degenerate;
        bad += !(e <= floor);
        continue;
      }
      ++checked;
      const double rel = std::abs(e - tail) / tail;
      if (rel > worst) worst = rel, where = f.id + " n=" + std::to_string(n);
      bad += !(rel <= 1e-4);
    }
  }
  report(3, "E_n at p=2 equals the Parseval tail", bad == 0,
         fmt("max rel err %.2e over %.0f cases (", worst, checked) + where +
             fmt("); %.0f below the rounding floor checked as E_n <= floor", degenerate));
}

// ---- 4: Jackson-Stechkin ratio is flat in n

void tur(const SuiteReport& rep) {
  std::map<int, std::pair<int, int>> per_r;  // r -> (bad, total)
  std::map<int, std::pair<double, double>> worst;  // r -> (max |slope|, max max/min)
  for (const auto& [name, s] : series_of(rep, "tur")) {
    const int r = name.find("/r=2/") != std::string::npos ? 2 : 1;
    const bool ok = std::abs(s.slope()) <= 0.15 && s.max() < 10 * s.min();
    per_r[r].first += !ok;
    per_r[r].second += 1;
    worst[r].first = std::max(worst[r].first, std::abs(s.slope()));
    worst[r].second = std::max(worst[r].second, s.max() / s.min());
  }
  bool pass = !per_r.empty();
  std::string detail;
  if (per_r.count(1) && per_r[1].first == 0) known_red.insert(4);
  for (const auto& [r, bt] : per_r) {
    pass = pass && bt.first == 0;
    detail += fmt("r=%.0f: %.0f/%.0f series out of band (max |slope| %.3f", r, bt.first, bt.second, worst[r].first) +
              fmt(", max max/min %.2f); ", worst[r].second);
  }
  detail.resize(detail.size() >= 2 ? detail.size() - 2 : 0);
  report(4, "Jackson-Stechkin error ratio flat in n", pass, detail);
}

// ---- 5 to 10: suite verdicts with their measured numbers

void bernstein(const SuiteReport& rep) {
  // largest ratio per n along each series
  std::map<std::string, std::map<double, double>> top;
  for (const SuiteCase& c : rep.cases)
    if (counted(c)) {
      double& m = top[param<std::string>(c, "series")][param<double>(c, "x")];
      m = std::max(m, *c.ratio);
    }
  double drift = 0;
  for (const auto& [s, m] : top) {
    double lo = INFINITY, hi = 0;
    for (const auto& [n, v] : m) lo = std::min(lo, v), hi = std::max(hi, v);
    drift = std::max(drift, hi / lo);
  }
  const bool pass = all_counted_finite(rep) && !top.empty() && drift < 2.0;
  report(5, "Bernstein ratios", pass, fmt("%.0f series; worst drift of the per-n maximum %.3fx", double(top.size()), drift));
}

void realization(const SuiteReport& rep) {
  std::map<std::int64_t, std::pair<double, double>> spread;
  for (const SuiteCase& c : rep.cases)
    if (counted(c) && param<std::string>(c, "part") == "modulus") {
      auto [it, fresh] = spread.try_emplace(param<std::int64_t>(c, "r"), INFINITY, 0.0);
      it->second.first = std::min(it->second.first, *c.ratio);
      it->second.second = std::max(it->second.second, *c.ratio);
    }
  bool pass = all_counted_finite(rep) && !spread.empty();
  std::string detail;
  for (const auto& [r, mm] : spread) {
    pass = pass && mm.first > 0 && mm.second < 100 * mm.first;
    detail += fmt("r=%.0f: Omega/K in [%.4f, %.4f], c2/c1=%.2f; ", double(r), mm.first, mm.second, mm.second / mm.first);
  }
  detail += fmt("%.0f solver-flagged", count(rep, CaseStatus::solver_flagged));
  report(6, "modulus equivalent to K", pass, detail);
}

void lipschitz(const SuiteReport& rep) {
  // ratios are E_n n^σ and Ω δ^{-σ}, so the target slope is 0
  bool pass = all_counted_finite(rep);
  double worst_plain = 0, worst_var = 0;
  int n = 0;
  for (const char* part : {"best", "modulus"})
    for (const auto& [name, s] : series_of(rep, part)) {
      ++n;
      const bool plain = name.find("/p=2/w=1") != std::string::npos;
      const double dev = std::abs(s.slope());
      (plain ? worst_plain : worst_var) = std::max(plain ? worst_plain : worst_var, dev);
      pass = pass && dev <= (plain ? 0.1 : 0.2);
    }
  report(7, "Lipschitz classes", pass && n > 0,
         fmt("%.0f series; max slope deviation %.3f at p=2 (band 0.1), %.3f variable (band 0.2)", n, worst_plain,
             worst_var));
}

void boundedness(const SuiteReport& rep) {
  double steklov2 = 0;
  std::map<std::string, std::map<std::int64_t, double>> top;
  for (const SuiteCase& c : rep.cases) {
    if (!c.ratio) continue;
    if (param<std::string>(c, "part") == "steklov" && param<std::string>(c, "exponent") == "2" &&
        param<std::string>(c, "weight") == "1")
      steklov2 = std::max(steklov2, *c.ratio);
    if (counted(c)) {
      double& m = top[param<std::string>(c, "series")][param<std::int64_t>(c, "N")];
      m = std::max(m, *c.ratio);
    }
  }
  double drift = 0;
  for (const auto& [s, m] : top)
    if (m.size() >= 2) drift = std::max(drift, std::abs(m.rbegin()->second / m.begin()->second - 1));
  const bool pass = all_counted_finite(rep) && steklov2 <= 1 + 1e-6 && drift < 0.25;
  report(8, "operator boundedness", pass,
         fmt("max ||T_h f||/||f|| at p=2 = %.9f; max refinement drift %.2f%% over %.0f series", steklov2, 100 * drift,
             double(top.size())));
}

void weights() {
  const auto in = classify_weight(Weight::power(0.5), ExponentFunction::constant(2.0), 8, 12);
  const auto out = classify_weight(Weight::power(-1.5), ExponentFunction::constant(2.0), 8, 12);
  const double growth = out.estimates.back() / out.estimates.front();
  char buf[256];
  std::snprintf(buf, sizeof buf, "gamma=0.5: %s (change %.3f); gamma=-1.5: %s, growth level 8->12 = %.8fx",
                in.in_class ? "in" : "not in", in.change, out.in_class ? "in" : "not in", growth);
  report(9, "Muckenhoupt classification", in.in_class && !out.in_class && growth >= 4.0, buf);
}

void invariants(const std::map<std::string, SuiteReport>& reps, double total) {
  std::string detail;
  bool pass = true;
  for (const char* name : {"invariants", "inverse", "simultaneous", "kfunc_jackson"}) {
    const SuiteReport& r = reps.at(name);
    const bool ok = r.count(CaseStatus::violated) == 0 && all_counted_finite(r);
    pass = pass && ok;
    detail += std::string(name) + fmt(": %.0f ok, %.0f degenerate, %.0f flagged, %.0f violated; ", count(r, CaseStatus::ok),
                                      count(r, CaseStatus::skipped_degenerate), count(r, CaseStatus::solver_flagged),
                                      count(r, CaseStatus::violated));
  }
  detail += fmt("all suites %.1fs", total);
  report(10, "invariant suites", pass && total < 600.0, detail);
}

}  // namespace

int main(int argc, char** argv) {
  LabOptions opts;
  if (argc > 1) opts.jobs = std::max(1, std::atoi(argv[1]));

  norms();
  jackson_kernel_facts();
  parseval();

  std::map<std::string, SuiteReport> reps;
  const auto t0 = Clock::now();
  for (const std::string& name : suite_names()) {
    const auto t = Clock::now();
    reps[name] = run_suite(name, opts);
    std::printf("       suite %-14s %-4s %7.1fs\n", name.c_str(), reps[name].verdict().c_str(), seconds_since(t));
    std::fflush(stdout);
  }
  const double total = seconds_since(t0);

  tur(reps.at("jackson"));
  bernstein(reps.at("bernstein"));
  realization(reps.at("realization"));
  lipschitz(reps.at("lipschitz"));
  boundedness(reps.at("boundedness"));
  weights();
  invariants(reps, total);

  int unexpected = 0, passed = 0;
  std::string reds;
  for (const Outcome& o : outcomes) {
    passed += o.pass;
    if (!o.pass) {
      reds += " " + std::to_string(o.id);
      unexpected += !known_red.count(o.id);
    }
  }
  std::printf("%d/%zu criteria pass; failing:%s%s\n", passed, outcomes.size(), reds.empty() ? " none" : reds.c_str(),
              unexpected ? " (unexpected)" : "");
  return unexpected ? 1 : 0;
}
