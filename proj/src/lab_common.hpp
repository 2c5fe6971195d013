#pragma once

#include "vexlab/catalog.hpp"
#include "vexlab/lab.hpp"
#include "vexlab/modular_norm.hpp"
#include "vexlab/report.hpp"
#include "vexlab/trig_polynomial.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace vexlab::lab {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

/// Process-wide memo of spaces, samples, best approximations and K-functionals.
/// Entries depend only on their key, so sharing them across suites and
/// threads cannot change any result.
class Workbench {
 public:
  explicit Workbench(const LabOptions& opts) : opts_(opts) {}

  const LabOptions& options() const { return opts_; }

  std::shared_ptr<const ModularSpace> space(const CatalogSpace& s, int N) const;
  std::shared_ptr<const Eigen::ArrayXd> samples(const CatalogFunction& f, int N, int r) const;

  double norm(const CatalogSpace& s, int N, const Eigen::ArrayXd& v) const;

  /// Size against which a right-hand side counts as zero: N max_{i<=q} ||f^(i)||,
  /// plus (N/2)^q ||f|| when f^(q) comes from spectral differentiation, whose
  /// rounding grows like the top wavenumber to the q-th power.
  double scale(const CatalogFunction& f, const CatalogSpace& s, int N, int q) const;

  struct Best {
    double value = 0.0;
    bool converged = true;
    TrigPolynomial<double> minimizer;
  };
  /// E_n(f^(r)) on the N grid. When ||f^(r) - S_n f^(r)|| is already below
  /// 1e-13 ||f^(r)|| the partial sum is taken as the minimizer.
  Best best(const CatalogFunction& f, int r, const CatalogSpace& s, int N, int n) const;

  struct K {
    double value = 0.0;
    bool converged = true;
  };
  /// K_r(f^(alpha), δ) with the default trial degree.
  K kfunc(const CatalogFunction& f, int alpha, const CatalogSpace& s, int N, double delta, int r) const;

 private:
  LabOptions opts_;
};

std::string pad(long v, int width = 3);
std::string fmt(double v);

/// Status and ratio from lhs/rhs; rhs <= 10 eps scale marks the case degenerate.
SuiteCase make_case(std::string id, ParamMap params, double lhs, double rhs, double scale, bool solver_ok = true);

struct SeriesStat {
  std::string name;
  double slope = 0.0;
  double max = 0.0;
  double min = 0.0;
  int points = 0;
};

/// Groups counted cases (status ok or solver-flagged, positive finite ratio)
/// by their "series" parameter and fits log(ratio) against log(x).
std::vector<SeriesStat> series_stats(const std::vector<SuiteCase>& cases);

/// Sorts cases, fills max_ratio from counted cases and slope from the series
/// with the largest |slope|. Does not decide the verdict.
void finish(SuiteReport& r);

/// True when no counted case has a non-finite ratio and none is violated.
bool all_finite(const SuiteReport& r);

/// Runs the tasks on opts.jobs threads; each task appends its cases to its own slot.
std::vector<SuiteCase> run_tasks(const std::vector<std::function<std::vector<SuiteCase>()>>& tasks, int jobs);

std::vector<CatalogFunction> pick_functions(const LabOptions& o, const std::vector<std::string>& defaults);
std::vector<CatalogSpace> pick_spaces(const LabOptions& o, const std::vector<CatalogSpace>& defaults);
template <typename T>
std::vector<T> pick(const std::vector<T>& chosen, std::vector<T> defaults) {
  return chosen.empty() ? defaults : chosen;
}

}  // namespace vexlab::lab
