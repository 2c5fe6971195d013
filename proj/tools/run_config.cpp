#include "run_config.hpp"

#include "vexlab/catalog.hpp"
#include "vexlab/errors.hpp"
#include "vexlab/exponent_weight.hpp"
#include "vexlab/kfunc.hpp"
#include "vexlab/modular_norm.hpp"
#include "vexlab/periodic_function.hpp"
#include "vexlab/report.hpp"
#include "vexlab/trig_approx.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

namespace vexlab::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

/// Walks one JSON object, remembering which keys were read so the rest can
/// be rejected.
class Reader {
 public:
  Reader(const json& obj, std::string pointer) : obj_(obj), pointer_(std::move(pointer)) {
    if (!obj_.is_object()) throw ConfigError("expected an object", pointer_.empty() ? "/" : pointer_);
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  std::string at(const std::string& key) const { return pointer_ + "/" + key; }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    out = convert<T>(obj_.at(key), at(key));
  }

  template <typename T>
  void get_list(const std::string& key, std::vector<T>& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    const json& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError("expected an array", at(key));
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<T>(v[i], at(key) + "/" + std::to_string(i)));
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(obj_.at(key), at(key));
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key", at(it.key()));
  }

 private:
  template <typename T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("expected a boolean", where);
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("expected a string", where);
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer", where);
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("expected an integer", where);
      const auto x = v.get<std::int64_t>();
      if (x < -1000000000 || x > 1000000000) throw ConfigError("integer out of range", where);
      return static_cast<T>(x);
    } else {
      if (!v.is_number()) throw ConfigError("expected a number", where);
      return v.get<double>();
    }
  }

  const json& obj_;
  std::string pointer_;
  std::set<std::string> seen_;
};

void read_solver(Reader rd, SolverOptions& s) {
  rd.get("tol", s.tol);
  rd.get("max_cycles", s.max_cycles);
  rd.get("quasi_newton_iterations", s.quasi_newton_iterations);
  rd.get("norm_tol", s.norm_tol);
  rd.get("grid", s.grid);
  rd.finish();
}

void read_quad(Reader rd, QuadratureConfig& q) {
  std::string rule = q.rule == QuadratureConfig::Rule::trapezoid ? "trapezoid" : "gauss_legendre";
  rd.get("rule", rule);
  if (rule == "trapezoid")
    q.rule = QuadratureConfig::Rule::trapezoid;
  else if (rule == "gauss_legendre")
    q.rule = QuadratureConfig::Rule::gauss_legendre;
  else
    throw ConfigError("rule must be trapezoid or gauss_legendre", rd.at("rule"));
  rd.get("panels", q.panels);
  rd.get("refinement_factor", q.refinement_factor);
  rd.get("tol", q.tol);
  rd.get("split_singular", q.split_singular);
  rd.get("order", q.order);
  rd.get("max_refinements", q.max_refinements);
  rd.finish();
}

void read_suite(Reader rd, RunConfig& c) {
  if (rd.has("name") && rd.has("names")) throw ConfigError("give either name or names", rd.at("names"));
  std::string name;
  rd.get("name", name);
  if (!name.empty()) c.suites = {name};
  rd.get_list("names", c.suites);
  rd.get("grid", c.lab.grid);
  rd.get_list("n", c.lab.n);
  rd.get_list("r", c.lab.r);
  rd.get_list("alpha", c.lab.alpha);
  rd.get_list("delta", c.lab.delta);
  rd.get_list("sigma", c.lab.sigma);
  rd.get_list("functions", c.lab.functions);
  rd.get_list("exponents", c.lab.exponents);
  rd.get_list("weights", c.lab.weights);
  rd.finish();
}

void read_output(Reader rd, OutputConfig& o) {
  rd.get("dir", o.dir);
  rd.get("stem", o.stem);
  rd.get("csv", o.csv);
  rd.get("plot", o.plot);
  rd.finish();
}

}  // namespace

RunConfig parse_config(std::string_view json_text, const Overrides& over) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "/");
  }
  RunConfig c;
  Reader rd(root, "");
  rd.get("command", c.command);
  rd.get("f", c.f);
  rd.get("p", c.p);
  rd.get("w", c.w);
  rd.get("n", c.n);
  rd.get("r", c.r);
  rd.get("delta", c.delta);
  rd.get("degree", c.degree);
  rd.get("check_doubling", c.check_doubling);
  rd.get("first_level", c.first_level);
  rd.get("last_level", c.last_level);
  rd.get("seed", c.seed);
  rd.get("jobs", c.jobs);
  if (rd.has("solver")) read_solver(rd.child("solver"), c.solver);
  if (rd.has("quad")) read_quad(rd.child("quad"), c.quadrature);
  if (rd.has("suite")) read_suite(rd.child("suite"), c);
  if (rd.has("output")) read_output(rd.child("output"), c.output);
  rd.finish();

  if (over.command) {
    if (!c.command.empty() && c.command != *over.command)
      throw ConfigError("command differs from the one on the command line", "/command");
    c.command = *over.command;
  }
  if (over.out) c.output.dir = *over.out;
  if (over.jobs) c.jobs = *over.jobs;
  if (over.seed) c.seed = *over.seed;
  if (over.quad_panels) c.quadrature.panels = *over.quad_panels;
  if (over.tol) c.solver.tol = *over.tol;

  c.lab.jobs = c.jobs;
  c.lab.seed = c.seed;
  c.lab.solver = c.solver;
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (command.empty()) throw ConfigError("no command given", "/command");
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError("unknown command '" + command + "'", "/command");
  if (jobs < 1) throw ConfigError("jobs must be >= 1", "/jobs");
  if (!(solver.tol > 0.0)) throw ConfigError("tolerance must be positive", "/solver/tol");
  if (!(solver.norm_tol > 0.0)) throw ConfigError("tolerance must be positive", "/solver/norm_tol");
  if (solver.max_cycles < 1) throw ConfigError("max_cycles must be >= 1", "/solver/max_cycles");
  if (solver.quasi_newton_iterations < 0)
    throw ConfigError("quasi_newton_iterations must be >= 0", "/solver/quasi_newton_iterations");
  if (solver.grid < 16 || !is_power_of_two(solver.grid))
    throw ConfigError("grid must be a power of two >= 16", "/solver/grid");
  quadrature.validate();
  if (output.dir.empty()) throw ConfigError("output directory is empty", "/output/dir");
  if (output.stem.find('/') != std::string::npos) throw ConfigError("stem must be a plain file name", "/output/stem");

  auto check_expr = [](auto parse, const std::string& text, const char* where) {
    try {
      parse(text);
    } catch (const std::exception& e) {
      throw ConfigError(e.what(), where);
    }
  };
  if (command == "norm" || command == "approx" || command == "kfunc")
    check_expr([](const std::string& t) { PeriodicFunction::parse(t); }, f, "/f");
  if (command != "suite" && command != "catalog") {
    check_expr([](const std::string& t) { ExponentFunction::parse(t); }, p, "/p");
    check_expr([](const std::string& t) { Weight::parse(t); }, w, "/w");
  }
  if (command == "approx" || command == "kfunc")
    if (n < 0 || n > 512) throw ConfigError("n must lie in 0..512", "/n");
  if (command == "kfunc") {
    if (r < 1 || r > 8) throw ConfigError("r must lie in 1..8", "/r");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive", "/delta");
    if (degree != 0 && (degree < 2 * r || degree > 512)) throw ConfigError("degree must be 0 or in 2r..512", "/degree");
  }
  if (command == "apweight") {
    if (first_level < 1 || first_level > 16) throw ConfigError("first_level must lie in 1..16", "/first_level");
    if (last_level <= first_level || last_level > 16)
      throw ConfigError("last_level must lie in first_level+1..16", "/last_level");
  }
  if (command == "suite") {
    if (suites.empty()) throw ConfigError("no suite named", "/suite/name");
    const auto known = suite_names();
    for (std::size_t i = 0; i < suites.size(); ++i)
      if (std::find(known.begin(), known.end(), suites[i]) == known.end())
        throw ConfigError("unknown suite '" + suites[i] + "'",
                          suites.size() == 1 ? "/suite/name" : "/suite/names/" + std::to_string(i));
    try {
      lab.validate();
    } catch (const ConfigError& e) {
      const std::string& ptr = e.pointer();
      const bool top = ptr.rfind("/solver", 0) == 0 || ptr == "/jobs";
      std::string msg = e.what();
      if (msg.rfind(ptr + ": ", 0) == 0) msg = msg.substr(ptr.size() + 2);
      throw ConfigError(msg, top ? ptr : "/suite" + ptr);
    }
  }
}

namespace {

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

/// Doubles as JSON numbers when finite, otherwise the strings used by reports.
ojson number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string stem_or(const RunConfig& c, const std::string& fallback) {
  return c.output.stem.empty() ? fallback : c.output.stem;
}

std::vector<Artifact> run_norm(const RunConfig& c) {
  const auto f = PeriodicFunction::parse(c.f);
  const NormResult r = luxemburg_norm(f, ExponentFunction::parse(c.p), Weight::parse(c.w), torus, c.quadrature,
                                      c.solver.norm_tol);
  ojson j;
  j["value"] = number(r.value);
  j["modular_at_solution"] = number(r.modular_at_solution);
  j["iterations"] = r.iterations;
  return {{stem_or(c, "norm") + ".json", dump(j)}};
}

std::vector<Artifact> run_apweight(const RunConfig& c) {
  const WeightClassification wc =
      classify_weight(Weight::parse(c.w), ExponentFunction::parse(c.p), c.first_level, c.last_level, c.quadrature);
  ojson j;
  j["levels"] = wc.levels;
  ojson est = ojson::array();
  for (double e : wc.estimates) est.push_back(number(e));
  j["estimates"] = est;
  j["change"] = number(wc.change);
  j["classification"] = wc.in_class ? "in" : "not in";
  return {{stem_or(c, "apweight") + ".json", dump(j)}};
}

std::vector<Artifact> run_approx(const RunConfig& c) {
  const BestApproxResult r = best_approximation(PeriodicFunction::parse(c.f), c.n, ExponentFunction::parse(c.p),
                                                Weight::parse(c.w), c.solver);
  ojson j;
  j["E_n"] = number(r.value);
  ojson coeffs = ojson::array();
  const Eigen::VectorXd packed = r.minimizer.packed();
  for (Eigen::Index i = 0; i < packed.size(); ++i) coeffs.push_back(number(packed[i]));
  j["coefficients"] = coeffs;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  return {{stem_or(c, "approx") + ".json", dump(j)}};
}

std::vector<Artifact> run_kfunc(const RunConfig& c) {
  const KResult k = k_functional(PeriodicFunction::parse(c.f), c.delta, c.r, ExponentFunction::parse(c.p),
                                 Weight::parse(c.w), c.degree, c.solver, c.check_doubling);
  ojson j;
  j["K"] = number(k.value);
  j["M"] = k.degree;
  ojson bounds;
  bounds["norm"] = number(k.norm_bound);
  if (k.derivative_bound) bounds["derivative"] = number(*k.derivative_bound);
  j["upper_bounds"] = bounds;
  j["iterations"] = k.iterations;
  j["converged"] = k.converged;
  if (k.doubled_value) j["doubled_K"] = number(*k.doubled_value);
  j["accepted"] = k.accepted;
  return {{stem_or(c, "kfunc") + ".json", dump(j)}};
}

std::vector<Artifact> run_catalog(const RunConfig& c) {
  ojson j;
  ojson fs = ojson::array();
  for (const auto& f : smooth_functions()) fs.push_back(f.id);
  fs.push_back("lacunary(sigma=S,J=J)");
  j["functions"] = fs;
  j["exponents"] = catalog_exponents();
  j["weights"] = catalog_weights();
  ojson spaces = ojson::array();
  for (const auto& s : catalog_spaces()) spaces.push_back(s.id());
  j["spaces"] = spaces;
  j["suites"] = suite_names();
  return {{stem_or(c, "catalog") + ".json", dump(j)}};
}

std::vector<Artifact> run_suites(const RunConfig& c) {
  std::vector<SuiteReport> reports(c.suites.size());
  // several suites share the job budget; one suite gets all of it
  LabOptions opts = c.lab;
  const int outer = std::min<int>(c.jobs, static_cast<int>(c.suites.size()));
  if (c.suites.size() > 1) opts.jobs = std::max(1, c.jobs / outer);
  parallel_for(static_cast<int>(c.suites.size()), outer,
               [&](int i) { reports[i] = run_suite(c.suites[i], opts); });
  std::vector<Artifact> out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const std::string stem =
        c.output.stem.empty() ? c.suites[i] : (c.suites.size() == 1 ? c.output.stem : c.output.stem + "_" + c.suites[i]);
    out.push_back({stem + ".json", to_json(reports[i])});
    if (c.output.csv) out.push_back({stem + ".csv", to_csv(reports[i])});
    if (c.output.plot) out.push_back({stem + ".tsv", plot_tsv(reports[i])});
  }
  return out;
}

}  // namespace

std::vector<Artifact> run(const RunConfig& c) {
  if (c.command == "norm") return run_norm(c);
  if (c.command == "apweight") return run_apweight(c);
  if (c.command == "approx") return run_approx(c);
  if (c.command == "kfunc") return run_kfunc(c);
  if (c.command == "catalog") return run_catalog(c);
  return run_suites(c);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace vexlab::cli
