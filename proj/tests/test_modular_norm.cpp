#include "oracle.hpp"

#include "vexlab/catalog.hpp"
#include "vexlab/errors.hpp"
#include "vexlab/modular_norm.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace vexlab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Eigen::ArrayXd random_samples(std::mt19937_64& rng, int degree, int n) {
  const auto c = oracle::random_packed(rng, degree);
  const auto x = oracle::grid(n);
  Eigen::ArrayXd v(n);
  for (int j = 0; j < n; ++j) v[j] = oracle::eval_packed(c, x[j]);
  return v;
}

}  // namespace

TEST_SUITE("modular_norm") {
  TEST_CASE("modular values") {
    const ExponentFunction two = ExponentFunction::constant(2.0);
    CHECK(modular(PeriodicFunction::constant(1.0), two, Weight::unit()).value == doctest::Approx(two_pi).epsilon(1e-10));
    CHECK(modular(PeriodicFunction::parse("sin(x)"), two, Weight::unit()).value == doctest::Approx(pi).epsilon(1e-10));
    CHECK(modular(PeriodicFunction::constant(1.0), ExponentFunction::parse("2+cos(x)"), Weight::unit()).value ==
          doctest::Approx(two_pi).epsilon(1e-10));
  }

  TEST_CASE("norms against closed forms") {
    const ExponentFunction two = ExponentFunction::constant(2.0);
    const NormResult one = luxemburg_norm(PeriodicFunction::constant(1.0), two, Weight::unit());
    CHECK(one.value == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-8));
    CHECK(one.modular_at_solution == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(luxemburg_norm(PeriodicFunction::parse("sin(x)"), two, Weight::unit()).value ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
    CHECK(luxemburg_norm(PeriodicFunction(), two, Weight::unit()).value == 0.0);
    // constant exponent 3 on [0, 1]: (∫_0^1 1)^{1/3}
    CHECK(luxemburg_norm(PeriodicFunction::constant(2.0), ExponentFunction::constant(3.0), Weight::unit(), {0.0, 1.0})
              .value == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("variable exponent norms against a bisection oracle") {
    const auto p = ExponentFunction::parse("2+cos(x)");
    const auto pf = [](double x) { return 2 + std::cos(x); };
    const auto one = [](double) { return 1.0; };
    struct Case {
      const char* f;
      std::function<double(double)> g;
    };
    const Case cases[] = {{"1", [](double) { return 1.0; }},
                          {"exp(cos(x))", [](double x) { return std::exp(std::cos(x)); }},
                          {"cos(3*x)+0.5*sin(7*x)", [](double x) { return std::cos(3 * x) + 0.5 * std::sin(7 * x); }},
                          {"0.01*sin(x)", [](double x) { return 0.01 * std::sin(x); }}};
    for (const auto& c : cases) {
      CAPTURE(c.f);
      const double expected = oracle::norm(c.g, pf, one);
      CHECK(luxemburg_norm(PeriodicFunction::parse(c.f), p, Weight::unit()).value ==
            doctest::Approx(expected).epsilon(1e-6));
    }
  }

  TEST_CASE("weighted norm against a fine midpoint oracle") {
    const auto pf = [](double x) { return 1.2 + 0.5 * std::abs(std::sin(x)); };
    const auto wf = [](double x) { return std::pow(std::abs(std::sin(x / 2)), 0.5); };
    const double expected = oracle::norm([](double x) { return std::exp(std::cos(x)); }, pf, wf, 1 << 18);
    const double got = luxemburg_norm(PeriodicFunction::parse("exp(cos(x))"), ExponentFunction::parse("1.2+0.5*abs(sin(x))"),
                                      Weight::power(0.5))
                           .value;
    CHECK(got == doctest::Approx(expected).epsilon(1e-5));
  }

  TEST_CASE("infinite exponents") {
    const std::vector<double> v{0.5, 2.0}, q{inf, 2.0}, m{1.0, 1.0};
    const ModularValue r = discrete_modular(v, q, m);
    CHECK_FALSE(r.infinite);
    CHECK(r.value == doctest::Approx(4.0));
    const std::vector<double> big{3.0};
    const std::vector<double> qi{inf}, mi{1.0};
    CHECK(discrete_modular(big, qi, mi).infinite);
    CHECK(solve_luxemburg(big, qi, mi).value == doctest::Approx(3.0).epsilon(1e-9));
    const std::vector<double> mixed{3.0, 1.0};
    CHECK(solve_luxemburg(mixed, q, m).value == doctest::Approx(3.0).epsilon(1e-9));
  }

  TEST_CASE("norm axioms on random polynomials") {
    std::mt19937_64 rng(21);
    for (const CatalogSpace& s : catalog_spaces()) {
      CAPTURE(s.id());
      const ModularSpace space = ModularSpace::on_grid(s.p, s.w, 512);
      for (int trial = 0; trial < 6; ++trial) {
        const Eigen::ArrayXd f = random_samples(rng, 1 + trial, 512);
        const Eigen::ArrayXd g = random_samples(rng, 3 + trial, 512);
        const double nf = space(f, 1e-12), ng = space(g, 1e-12);
        for (double c : {0.1, 3.0, 100.0}) CHECK(space(c * f, 1e-12) == doctest::Approx(c * nf).epsilon(2e-12));
        CHECK(space(-f, 1e-12) == doctest::Approx(nf).epsilon(2e-12));
        CHECK(space(f + g, 1e-12) <= (nf + ng) * (1 + 2e-12));
        CHECK(space.modular(f, nf).value <= 1.0 + 1e-9);
        CHECK(space.modular(f, 0.9 * nf).value > 1.0);
      }
    }
  }

  TEST_CASE("gradient matches finite differences") {
    std::mt19937_64 rng(4);
    const ModularSpace space = ModularSpace::on_grid(ExponentFunction::parse("2+cos(x)"), Weight::power(0.5), 64);
    const Eigen::ArrayXd v = random_samples(rng, 4, 64);
    const double a = space(v, 1e-14);
    const Eigen::ArrayXd g = space.gradient(v, a);
    for (int i : {0, 7, 31, 50}) {
      Eigen::ArrayXd e = Eigen::ArrayXd::Zero(64);
      e[i] = 1e-6;
      const double fd = (space(v + e, 1e-14) - space(v - e, 1e-14)) / 2e-6;
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
    }
  }

  TEST_CASE("Hölder inequality with the dual weight") {
    std::mt19937_64 rng(8);
    for (const CatalogSpace& s : catalog_spaces()) {
      CAPTURE(s.id());
      const ExponentFunction q = conjugate_exponent(s.p);
      const ModularSpace space = ModularSpace::on_grid(s.p, s.w, 1024);
      const ModularSpace dual = ModularSpace::on_grid(q, dual_weight(s.w, s.p), 1024);
      for (int trial = 0; trial < 4; ++trial) {
        const Eigen::ArrayXd f = random_samples(rng, 2 + trial, 1024);
        const Eigen::ArrayXd g = random_samples(rng, 5, 1024);
        const double lhs = (f * g).abs().sum() * two_pi / 1024;
        CHECK(lhs <= 2.0 * space(f) * dual(g) * (1 + 1e-9));
      }
    }
  }

  TEST_CASE("embedding of constant exponent spaces") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::ArrayXd f = random_samples(rng, 1 + trial, 256);
      const double n15 = ModularSpace::on_grid(ExponentFunction::constant(1.5), Weight::unit(), 256)(f);
      const double n3 = ModularSpace::on_grid(ExponentFunction::constant(3.0), Weight::unit(), 256)(f);
      CHECK(n15 <= (1 + two_pi) * n3);
      // the sharp constant for constant exponents is |T|^{1/1.5 - 1/3}
      CHECK(n15 <= std::pow(two_pi, 1.0 / 1.5 - 1.0 / 3.0) * n3 * (1 + 1e-9));
    }
  }

  TEST_CASE("dual norm estimates") {
    const ExponentFunction two = ExponentFunction::constant(2.0);
    const auto sin = PeriodicFunction::parse("sin(x)");
    const DualEstimate d = dual_norm_estimate(sin, two, Weight::unit(), {sin});
    CHECK(d.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
    CHECK(dual_norm_estimate(PeriodicFunction(), two, Weight::unit(), {sin}).value == 0.0);
    const DualEstimate skipped = dual_norm_estimate(sin, two, Weight::unit(), {PeriodicFunction(), sin});
    CHECK(skipped.skipped == 1);
    CHECK(skipped.used == 1);
    for (const CatalogSpace& s : catalog_spaces())
      for (const CatalogFunction& f : smooth_functions()) {
        CAPTURE(s.id());
        CAPTURE(f.id);
        std::vector<PeriodicFunction> testers{f.f, PeriodicFunction::parse("cos(x)"), PeriodicFunction::constant(1.0)};
        const double e = dual_norm_estimate(f.f, s.p, s.w, testers).value;
        const double nf = ModularSpace::on_grid(s.p, s.w, 2048)(f.f.sample(2048));
        CHECK(e <= 2.0 * nf * (1 + 1e-6));
        CHECK(e > 0.0);
      }
  }
}
