#include "run_config.hpp"

#include "vexlab/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int fail(int code, const std::string& message, const std::string& pointer = {}) {
  nlohmann::ordered_json j;
  // ConfigError::what() already starts with the pointer
  const std::string prefix = pointer + ": ";
  j["error"] = !pointer.empty() && message.rfind(prefix, 0) == 0 ? message.substr(prefix.size()) : message;
  if (!pointer.empty()) j["pointer"] = pointer;
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vexlab;
  CLI::App app{"vexlab: norms, best approximation and inequality suites in weighted variable-exponent spaces"};
  std::string command, config_path;
  cli::Overrides over;
  std::string out;
  int jobs = 0, panels = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;

  app.add_option("command", command, "norm | apweight | approx | kfunc | suite | catalog")
      ->check(CLI::IsMember(cli::commands));
  app.add_option("--config", config_path, "JSON configuration file");
  auto* out_opt = app.add_option("--out", out, "output directory (VEXLAB_OUT takes precedence)");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* panels_opt = app.add_option("--quad-panels", panels, "initial quadrature panels");
  auto* tol_opt = app.add_option("--tol", tol, "solver tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(1, e.what());
  }

  if (!command.empty()) over.command = command;
  if (*out_opt) over.out = out;
  if (const char* env = std::getenv("VEXLAB_OUT"); env && *env) over.out = env;
  if (*jobs_opt) over.jobs = jobs;
  if (*seed_opt) over.seed = seed;
  if (*panels_opt) over.quad_panels = panels;
  if (*tol_opt) over.tol = tol;

  cli::RunConfig cfg;
  try {
    std::string text = "{}";
    if (!config_path.empty()) {
      std::ifstream is(config_path, std::ios::binary);
      if (!is) return fail(1, "cannot read " + config_path);
      std::ostringstream ss;
      ss << is.rdbuf();
      text = ss.str();
    }
    cfg = cli::parse_config(text, over);
  } catch (const ConfigError& e) {
    return fail(1, e.what(), e.pointer());
  }

  std::vector<cli::Artifact> files;
  try {
    files = cli::run(cfg);
  } catch (const ConfigError& e) {
    return fail(1, e.what(), e.pointer());
  } catch (const ParseError& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }

  try {
    for (const auto& a : files) {
      const std::string path = cfg.output.dir + "/" + a.file;
      cli::write_atomic(path, a.content);
      std::cout << path << "\n";
    }
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
  return 0;
}
