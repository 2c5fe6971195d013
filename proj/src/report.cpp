#include "vexlab/report.hpp"

#include "vexlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace vexlab {

using ojson = nlohmann::ordered_json;

std::string_view to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::ok: return "ok";
    case CaseStatus::skipped_degenerate: return "skipped-degenerate";
    case CaseStatus::solver_flagged: return "solver-flagged";
    case CaseStatus::violated: return "violated";
  }
  return "ok";
}

CaseStatus parse_status(std::string_view s) {
  for (CaseStatus c : {CaseStatus::ok, CaseStatus::skipped_degenerate, CaseStatus::solver_flagged,
                       CaseStatus::violated})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown case status '" + std::string(s) + "'");
}

int SuiteReport::count(CaseStatus s) const {
  int n = 0;
  for (const auto& c : cases) n += c.status == s;
  return n;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // plain shortest output writes large integral values digit by digit
  const auto res = std::abs(v) >= 1e17 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific)
                                       : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

ojson number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double read_number(const ojson& j, const std::string& pointer) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw ConfigError("expected a number", pointer);
}

std::optional<double> read_optional(const ojson& j, const std::string& key, const std::string& pointer) {
  if (!j.contains(key)) throw ConfigError("missing key", pointer + "/" + key);
  const ojson& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return read_number(v, pointer + "/" + key);
}

ojson param_json(const ParamValue& v) {
  return std::visit([](const auto& x) -> ojson {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, double>) return number(x);
    else return x;
  }, v);
}

std::string param_text(const ParamValue& v) {
  return std::visit([](const auto& x) -> std::string {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, double>) return format_double(x);
    else if constexpr (std::is_same_v<T, std::string>) return x;
    else return std::to_string(x);
  }, v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void check_keys(const ojson& j, std::initializer_list<const char*> allowed, const std::string& pointer) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown key", pointer + "/" + k);
  }
}

}  // namespace

std::string to_json(const SuiteReport& r) {
  ojson j;
  j["suite"] = r.suite;
  ojson cases = ojson::array();
  for (const SuiteCase& c : r.cases) {
    ojson jc;
    jc["id"] = c.id;
    ojson params = ojson::object();
    for (const auto& [k, v] : c.params) params[k] = param_json(v);
    jc["params"] = std::move(params);
    jc["lhs"] = number(c.lhs);
    jc["rhs"] = number(c.rhs);
    jc["ratio"] = c.ratio ? number(*c.ratio) : ojson(nullptr);
    jc["status"] = std::string(to_string(c.status));
    cases.push_back(std::move(jc));
  }
  j["cases"] = std::move(cases);
  j["max_ratio"] = r.max_ratio ? number(*r.max_ratio) : ojson(nullptr);
  j["slope"] = r.slope ? number(*r.slope) : ojson(nullptr);
  j["verdict"] = r.verdict();
  return j.dump(2) + "\n";
}

SuiteReport report_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "");
  }
  if (!j.is_object()) throw ConfigError("report must be an object", "");
  check_keys(j, {"suite", "cases", "max_ratio", "slope", "verdict"}, "");
  SuiteReport r;
  if (!j.contains("suite") || !j["suite"].is_string()) throw ConfigError("expected a string", "/suite");
  r.suite = j["suite"].get<std::string>();
  if (!j.contains("cases") || !j["cases"].is_array()) throw ConfigError("expected an array", "/cases");
  for (std::size_t i = 0; i < j["cases"].size(); ++i) {
    const ojson& jc = j["cases"][i];
    const std::string ptr = "/cases/" + std::to_string(i);
    if (!jc.is_object()) throw ConfigError("expected an object", ptr);
    check_keys(jc, {"id", "params", "lhs", "rhs", "ratio", "status"}, ptr);
    SuiteCase c;
    if (!jc.contains("id") || !jc["id"].is_string()) throw ConfigError("expected a string", ptr + "/id");
    c.id = jc["id"].get<std::string>();
    if (!jc.contains("params") || !jc["params"].is_object()) throw ConfigError("expected an object", ptr + "/params");
    for (const auto& [k, v] : jc["params"].items()) {
      if (v.is_number_integer()) c.params[k] = v.get<std::int64_t>();
      else if (v.is_number()) c.params[k] = v.get<double>();
      else if (v.is_string()) c.params[k] = v.get<std::string>();
      else throw ConfigError("unsupported parameter type", ptr + "/params/" + k);
    }
    if (!jc.contains("lhs")) throw ConfigError("missing key", ptr + "/lhs");
    if (!jc.contains("rhs")) throw ConfigError("missing key", ptr + "/rhs");
    c.lhs = read_number(jc["lhs"], ptr + "/lhs");
    c.rhs = read_number(jc["rhs"], ptr + "/rhs");
    c.ratio = read_optional(jc, "ratio", ptr);
    if (!jc.contains("status") || !jc["status"].is_string()) throw ConfigError("expected a string", ptr + "/status");
    try {
      c.status = parse_status(jc["status"].get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), ptr + "/status");
    }
    r.cases.push_back(std::move(c));
  }
  r.max_ratio = read_optional(j, "max_ratio", "");
  r.slope = read_optional(j, "slope", "");
  if (!j.contains("verdict") || !j["verdict"].is_string()) throw ConfigError("expected a string", "/verdict");
  const std::string v = j["verdict"].get<std::string>();
  if (v != "pass" && v != "fail") throw ConfigError("verdict must be pass or fail", "/verdict");
  r.pass = v == "pass";
  return r;
}

std::string to_csv(const SuiteReport& r) {
  std::ostringstream out;
  out << "id,status,lhs,rhs,ratio,params\n";
  for (const SuiteCase& c : r.cases) {
    std::string params;
    for (const auto& [k, v] : c.params) {
      if (!params.empty()) params += ';';
      params += k + "=" + param_text(v);
    }
    out << csv_field(c.id) << ',' << to_string(c.status) << ',' << format_double(c.lhs) << ','
        << format_double(c.rhs) << ',' << (c.ratio ? format_double(*c.ratio) : "") << ',' << csv_field(params)
        << '\n';
  }
  return out.str();
}

std::string plot_tsv(const SuiteReport& r) {
  // series in order of first appearance; cases are already sorted by id
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> data;
  for (const SuiteCase& c : r.cases) {
    const auto s = c.params.find("series");
    const auto x = c.params.find("x");
    if (s == c.params.end() || x == c.params.end() || !c.ratio) continue;
    const auto* name = std::get_if<std::string>(&s->second);
    const auto* xv = std::get_if<double>(&x->second);
    if (!name || !xv) continue;
    if (!data.count(*name)) order.push_back(*name);
    data[*name].emplace_back(*xv, *c.ratio);
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& name : order) {
    if (!first) out << "\n\n";
    first = false;
    out << "# " << name << "\n";
    auto pts = data[name];
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [x, y] : pts) out << format_double(x) << '\t' << format_double(y) << '\n';
  }
  return out.str();
}

}  // namespace vexlab
