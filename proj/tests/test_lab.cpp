#include "oracle.hpp"

#include "vexlab/catalog.hpp"
#include "vexlab/errors.hpp"
#include "vexlab/lab.hpp"
#include "vexlab/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <cstring>
#include <sstream>

using namespace vexlab;

namespace {

SuiteReport sample_report() {
  SuiteReport r;
  r.suite = "demo";
  SuiteCase a;
  a.id = "a/1";
  a.params = {{"n", std::int64_t{4}}, {"x", 0.1}, {"series", std::string("a")}, {"tiny", 1e-300}};
  a.lhs = 1.0 / 3.0;
  a.rhs = 2.0;
  a.ratio = 1.0 / 6.0;
  SuiteCase b;
  b.id = "b/2";
  b.params = {{"series", std::string("b")}, {"x", 8.0}, {"note", std::string("quote \" and, comma")}};
  b.lhs = std::numeric_limits<double>::infinity();
  b.rhs = 0.0;
  b.status = CaseStatus::skipped_degenerate;
  SuiteCase c;
  c.id = "c/3";
  c.lhs = std::nan("");
  c.rhs = -0.0;
  c.ratio = -std::numeric_limits<double>::infinity();
  c.status = CaseStatus::solver_flagged;
  r.cases = {a, b, c};
  r.max_ratio = 1.0 / 6.0;
  r.slope = -1.25;
  r.pass = true;
  return r;
}

LabOptions small() {
  LabOptions o;
  o.grid = 256;
  return o;
}

}  // namespace

TEST_SUITE("inequality_lab") {
  TEST_CASE("shortest round-trip doubles") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::strtod(format_double(1.0).c_str(), nullptr) == 1.0);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::nan("")) == "nan");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5000; ++i) {
      double v;
      const std::uint64_t bits = rng();
      std::memcpy(&v, &bits, sizeof v);
      if (!std::isfinite(v)) continue;
      const std::string s = format_double(v);
      CHECK(std::strtod(s.c_str(), nullptr) == v);
      std::string mantissa;
      for (char ch : s.substr(0, s.find_first_of("eE")))
        if (std::isdigit(static_cast<unsigned char>(ch))) mantissa += ch;
      mantissa.erase(0, mantissa.find_first_not_of('0'));
      mantissa.erase(mantissa.find_last_not_of('0') + 1);
      CHECK(mantissa.size() <= 17);
    }
  }

  TEST_CASE("report JSON round trip is byte-identical") {
    const SuiteReport r = sample_report();
    const std::string text = to_json(r);
    CHECK(text.back() == '\n');
    const SuiteReport back = report_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(back.cases.size() == 3);
    CHECK(back.cases[1].status == CaseStatus::skipped_degenerate);
    CHECK_FALSE(back.cases[1].ratio.has_value());
    CHECK(std::isinf(back.cases[1].lhs));
    CHECK(std::get<std::int64_t>(back.cases[0].params.at("n")) == 4);
    CHECK(back.verdict() == "pass");
    CHECK(text.find("\"verdict\": \"pass\"") != std::string::npos);
  }

  TEST_CASE("malformed reports name a pointer") {
    try {
      report_from_json(R"({"suite": "x", "cases": [{"id": 3}]})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer().rfind("/cases/0", 0) == 0);
    }
    CHECK_THROWS_AS(report_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_status("fine"), ConfigError);
    for (CaseStatus s : {CaseStatus::ok, CaseStatus::skipped_degenerate, CaseStatus::solver_flagged, CaseStatus::violated})
      CHECK(parse_status(to_string(s)) == s);
  }

  TEST_CASE("CSV and plot blocks") {
    const SuiteReport r = sample_report();
    const std::string csv = to_csv(r);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("id,status,lhs,rhs,ratio", 0) == 0);
    int rows = 0;
    while (std::getline(is, line)) rows += !line.empty();
    CHECK(rows == 3);
    // parameters share one quoted field
    CHECK(csv.find(",\"note=quote \"\" and, comma;series=b;x=8") != std::string::npos);
    const std::string tsv = plot_tsv(r);
    CHECK(tsv.find("0.1\t") != std::string::npos);
    CHECK(tsv.find("# a\n") != std::string::npos);
    CHECK(tsv.find("# b") == std::string::npos);  // no ratio, no point
  }

  TEST_CASE("catalog") {
    CHECK(catalog_spaces().size() == 8);
    CHECK(solver_spaces().size() == 3);
    CHECK(smooth_functions().size() == 3);
    CHECK(admissible(ExponentFunction::constant(2.0), Weight::power(0.5)));
    CHECK_FALSE(admissible(ExponentFunction::constant(2.0), Weight::power(1.5)));
    CHECK_FALSE(admissible(ExponentFunction::parse("1.2+0.5*abs(sin(x))"), Weight::power(0.5)));
    CHECK_THROWS(find_function("no_such_function"));
    // tail sqrt(pi Σ_{j>J} 4^{-σj}) = sqrt(pi 4^{-σ(J+1)} / (1 - 4^{-σ}))
    for (double sigma : {1.0, 1.5}) {
      const int J = lacunary_terms(sigma, 1e-4);
      auto tail = [&](int j) { return std::sqrt(pi * std::pow(4.0, -sigma * (j + 1)) / (1 - std::pow(4.0, -sigma))); };
      CHECK(tail(J) < 1e-4);
      CHECK(tail(J - 1) >= 1e-4);
    }
    CHECK(lacunary_terms(0.5, 1e-8) == 16);  // capped
    const CatalogFunction lac = lacunary(1.0, 3);
    CHECK(lac.f(0.0) == doctest::Approx(1 + 0.5 + 0.25 + 0.125));
    const CatalogFunction smoothed = find_function("smoothed");
    CHECK(smoothed.f(0.0) == doctest::Approx(std::pow(0.25, 0.75)));
    const Eigen::ArrayXd d = smoothed.derivative_samples(256, 2);
    CHECK(d.size() == 256);
  }

  TEST_CASE("options are validated with pointers") {
    LabOptions o;
    o.grid = 100;
    CHECK_THROWS_WITH_AS(o.validate(), doctest::Contains("/grid"), ConfigError);
    o = {};
    o.n = {4, 0};
    try {
      o.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer() == "/n/1");
    }
    o = {};
    o.functions = {"exp_cos", "bogus"};
    try {
      o.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.pointer() == "/functions/1");
    }
    CHECK_THROWS_AS(run_suite("no_such_suite"), ConfigError);
    CHECK(suite_names().size() == 9);
  }

  TEST_CASE("Bernstein suite is seed-deterministic") {
    LabOptions o = small();
    o.n = {4, 8};
    const SuiteReport a = run_suite("bernstein", o);
    const SuiteReport b = run_suite("bernstein", o);
    CHECK(to_json(a) == to_json(b));
    o.jobs = 3;
    CHECK(to_json(run_suite("bernstein", o)) == to_json(a));
    o.jobs = 1;
    o.seed += 1;
    CHECK(to_json(run_suite("bernstein", o)) != to_json(a));
    CHECK(std::is_sorted(a.cases.begin(), a.cases.end(), [](const SuiteCase& x, const SuiteCase& y) { return x.id < y.id; }));
    CHECK(a.max_ratio.has_value());
  }

  TEST_CASE("Jackson suite flags exact fits as degenerate") {
    LabOptions o = small();
    o.n = {4, 8, 16};
    o.r = {1};
    o.alpha = {0};
    o.functions = {"trig_3_7"};
    o.exponents = {"2"};
    o.weights = {"1"};
    const SuiteReport rep = run_suite("jackson", o);
    CHECK(rep.count(CaseStatus::skipped_degenerate) > 0);
    CHECK(rep.count(CaseStatus::violated) == 0);
    for (const SuiteCase& c : rep.cases) {
      CAPTURE(c.id);
      CHECK(c.ratio.has_value() == (c.status != CaseStatus::skipped_degenerate));
    }
  }

  TEST_CASE("boundedness suite on a reduced catalog") {
    LabOptions o = small();
    o.functions = {"exp_cos"};
    o.exponents = {"2"};
    o.weights = {"1", "power_weight(gamma=0.5)"};
    const SuiteReport rep = run_suite("boundedness", o);
    CHECK(rep.pass);
    CHECK(rep.count(CaseStatus::violated) == 0);
    for (const SuiteCase& c : rep.cases)
      if (c.ratio) CHECK(std::isfinite(*c.ratio));
  }
}
