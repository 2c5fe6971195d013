#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vexlab {

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

enum class CaseStatus { ok, skipped_degenerate, solver_flagged, violated };

std::string_view to_string(CaseStatus s);
/// Inverse of to_string; ConfigError on anything else.
CaseStatus parse_status(std::string_view s);

struct SuiteCase {
  std::string id;
  ParamMap params;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;  // absent for skipped-degenerate cases
  CaseStatus status = CaseStatus::ok;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCase> cases;
  std::optional<double> max_ratio;
  std::optional<double> slope;
  bool pass = false;

  std::string verdict() const { return pass ? "pass" : "fail"; }
  int count(CaseStatus s) const;
};

/// Pretty-printed JSON, two-space indent, trailing newline. Doubles print in
/// shortest round-trip form; non-finite values print as the strings "inf",
/// "-inf" and "nan".
std::string to_json(const SuiteReport& r);
/// Parses to_json output. Throws ConfigError naming a JSON pointer on schema errors.
SuiteReport report_from_json(std::string_view text);

/// One row per case: id, status, lhs, rhs, ratio, then every parameter as name=value.
std::string to_csv(const SuiteReport& r);

/// Two-column x/y blocks, one per series, for cases carrying "series" and "x" parameters.
std::string plot_tsv(const SuiteReport& r);

/// Shortest decimal form that parses back to the same double (at most 17 significant digits).
std::string format_double(double v);

}  // namespace vexlab
