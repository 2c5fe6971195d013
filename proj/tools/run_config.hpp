#pragma once

// Configuration and dispatch for the vexlab command-line tool.

#include "vexlab/descent.hpp"
#include "vexlab/lab.hpp"
#include "vexlab/numerics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vexlab::cli {

inline const std::vector<std::string> commands{"norm", "apweight", "approx", "kfunc", "suite", "catalog"};

struct OutputConfig {
  std::string dir = ".";
  std::string stem;  // file name without extension; defaults to the command or suite name
  bool csv = false;
  bool plot = false;
};

struct RunConfig {
  std::string command;

  // norm, approx, kfunc, apweight
  std::string f = "1";
  std::string p = "2";
  std::string w = "1";
  int n = 8;
  int r = 1;
  double delta = 0.5;
  int degree = 0;  // K-functional trial degree, 0 for the default
  bool check_doubling = true;
  int first_level = 8;
  int last_level = 12;

  // suite
  std::vector<std::string> suites;
  LabOptions lab;

  QuadratureConfig quadrature;
  SolverOptions solver{1e-10, 400, 200, 1e-12, 1024};
  std::uint64_t seed = 20240601;
  int jobs = 1;
  OutputConfig output;

  /// ConfigError with the JSON pointer of the first bad value.
  void validate() const;
};

/// Values given on the command line; they override the file.
struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_panels;
  std::optional<double> tol;
};

/// Strict parse: unknown keys and wrong types raise ConfigError with a pointer.
RunConfig parse_config(std::string_view json_text, const Overrides& over = {});

struct Artifact {
  std::string file;  // name inside the output directory
  std::string content;
};

/// Runs the command and returns the files to write, JSON first.
std::vector<Artifact> run(const RunConfig& cfg);

/// Writes to a temporary file beside `path`, then renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace vexlab::cli
