#include "vexlab/lab.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/numerics.hpp"

#include <cmath>

namespace vexlab {

void LabOptions::validate() const {
  if (grid < 64 || !is_power_of_two(grid)) throw ConfigError("grid must be a power of two >= 64", "/grid");
  if (jobs < 1) throw ConfigError("jobs must be >= 1", "/jobs");
  if (!(solver.tol > 0.0)) throw ConfigError("tolerance must be positive", "/solver/tol");
  if (!(solver.norm_tol > 0.0)) throw ConfigError("tolerance must be positive", "/solver/norm_tol");
  if (solver.max_cycles < 1) throw ConfigError("max_cycles must be >= 1", "/solver/max_cycles");
  if (solver.quasi_newton_iterations < 0)
    throw ConfigError("quasi_newton_iterations must be >= 0", "/solver/quasi_newton_iterations");
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] < 1 || 8L * (n[i] + 1) > 4L * grid) throw ConfigError("degree out of range for the grid", "/n/" + std::to_string(i));
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] < 1 || r[i] > 8) throw ConfigError("r must lie in 1..8", "/r/" + std::to_string(i));
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] < 0 || alpha[i] > 4) throw ConfigError("alpha must lie in 0..4", "/alpha/" + std::to_string(i));
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (!(delta[i] > 0.0 && delta[i] <= two_pi)) throw ConfigError("delta must lie in (0, 2pi]", "/delta/" + std::to_string(i));
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (!(sigma[i] > 0.0 && sigma[i] < 2.0)) throw ConfigError("sigma must lie in (0, 2)", "/sigma/" + std::to_string(i));
  for (std::size_t i = 0; i < functions.size(); ++i) {
    try {
      find_function(functions[i]);
    } catch (const std::exception& e) {
      throw ConfigError(e.what(), "/functions/" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    try {
      ExponentFunction::parse(exponents[i]);
    } catch (const std::exception& e) {
      throw ConfigError(e.what(), "/exponents/" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    try {
      Weight::parse(weights[i]);
    } catch (const std::exception& e) {
      throw ConfigError(e.what(), "/weights/" + std::to_string(i));
    }
  }
}

std::vector<std::string> suite_names() {
  return {"jackson", "bernstein", "kfunc_jackson", "inverse", "simultaneous",
          "lipschitz", "boundedness", "realization", "invariants"};
}

SuiteReport run_suite(const std::string& name, const LabOptions& opts) {
  opts.validate();
  if (name == "jackson") return run_jackson_suite(opts);
  if (name == "bernstein") return run_bernstein_suite(opts);
  if (name == "kfunc_jackson") return run_kfunc_jackson_suite(opts);
  if (name == "inverse") return run_inverse_suite(opts);
  if (name == "simultaneous") return run_simultaneous_suite(opts);
  if (name == "lipschitz") return run_lipschitz_suite(opts);
  if (name == "boundedness") return run_boundedness_suite(opts);
  if (name == "realization") return run_realization_suite(opts);
  if (name == "invariants") return run_invariants_suite(opts);
  throw ConfigError("unknown suite '" + name + "'", "/suite/name");
}

}  // namespace vexlab
