#include "oracle.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/exponent_weight.hpp"

#include <doctest.h>

#include <cmath>

using namespace vexlab;

namespace {

// ∫_T |sin(x/2)|^γ = 2 sqrt(pi) Γ((γ+1)/2) / Γ(γ/2 + 1)
double power_mass(double gamma) { return 2.0 * std::sqrt(pi) * std::tgamma((gamma + 1) / 2) / std::tgamma(gamma / 2 + 1); }

}  // namespace

TEST_SUITE("exponent_weight") {
  TEST_CASE("exponent parsing and bounds") {
    const auto p = ExponentFunction::parse("p=2+cos(x)");
    CHECK(p(0.0) == 3.0);
    CHECK(p.lower() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.upper() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK_FALSE(p.is_constant());
    CHECK(ExponentFunction::parse("3").is_constant());
    CHECK_THROWS(ExponentFunction::parse("0.5+0*x"));
  }

  TEST_CASE("conjugate exponents") {
    CHECK(conjugate_exponent(ExponentFunction::constant(2.0))(0.3) == doctest::Approx(2.0));
    CHECK(conjugate_exponent(ExponentFunction::constant(3.0))(0.3) == doctest::Approx(1.5));
    const auto p = ExponentFunction::parse("2+cos(x)");
    const auto q = conjugate_exponent(p);
    CHECK(q.infinite_at(pi));
    CHECK_FALSE(q.infinite_at(0.0));
    CHECK(q(0.0) == doctest::Approx(1.5));
    CHECK(q.conjugate()(1.0) == doctest::Approx(p(1.0)).epsilon(1e-14));
  }

  TEST_CASE("log-Hölder estimates") {
    CHECK(log_holder_constant(ExponentFunction::constant(2.0)).value == 0.0);
    const auto smooth = log_holder_stability(ExponentFunction::parse("2+cos(x)"));
    CHECK(smooth.log_holder);
    CHECK(smooth.fine.value <= 1.05 * smooth.coarse.value);
    const auto step = ExponentFunction::callable([](double x) { return x < 0.3 ? 1.5 : 2.5; }, "step");
    const auto jump = log_holder_stability(step);
    CHECK_FALSE(jump.log_holder);
    CHECK(jump.growth >= 2.0);
  }

  TEST_CASE("weights") {
    const auto w = Weight::parse("power_weight(gamma=0.5)");
    REQUIRE(w.power_exponent().has_value());
    CHECK(*w.power_exponent() == 0.5);
    CHECK(w(pi) == doctest::Approx(1.0));
    CHECK(Weight::parse("1").is_unit());
    CHECK(Weight::unit().total_mass() == doctest::Approx(two_pi).epsilon(1e-12));
    for (double g : {0.5, -0.3, -0.7, 1.5}) CHECK(Weight::power(g).total_mass() == doctest::Approx(power_mass(g)).epsilon(1e-8));
    CHECK_THROWS_AS(Weight::power(-1.5).total_mass(), ConvergenceError);
  }

  TEST_CASE("cell masses add up to the total mass") {
    for (double g : {0.0, 0.5, -0.3}) {
      const Eigen::ArrayXd m = cell_masses(Weight::power(g), 256);
      CHECK(m.size() == 256);
      CHECK((m > 0).all());
      CHECK(m.sum() == doctest::Approx(power_mass(g)).epsilon(1e-8));
    }
  }

  TEST_CASE("dual weights") {
    CHECK(dual_weight(Weight::unit(), ExponentFunction::constant(2.0))(0.4) == doctest::Approx(1.0));
    const auto w = Weight::parse("2+sin(x)");
    CHECK(dual_weight(w, ExponentFunction::constant(2.0))(0.4) == doctest::Approx(1.0 / (2 + std::sin(0.4))).epsilon(1e-14));
    CHECK(dual_weight(Weight::parse("2"), ExponentFunction::constant(3.0))(1.0) == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK_THROWS_AS(dual_weight(Weight::parse("2"), ExponentFunction::constant(1.0))(0.0), CapabilityError);
  }

  TEST_CASE("harmonic mean exponent") {
    CHECK(harmonic_mean_exponent(ExponentFunction::constant(2.0), torus) == doctest::Approx(2.0).epsilon(1e-12));
    // ∫_0^pi dx/(2 + cos x) = pi/sqrt(3)
    const auto p = ExponentFunction::parse("2+cos(x)");
    CHECK(harmonic_mean_exponent(p, torus) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
    CHECK(harmonic_mean_exponent(p, {0.0, pi}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
    const double inv = oracle::simpson([](double x) { return 1.0 / (2 + std::cos(x)); }, 0.2, 1.7, 2000);
    CHECK(harmonic_mean_exponent(p, {0.2, 1.7}) == doctest::Approx(1.5 / inv).epsilon(1e-9));
  }

  TEST_CASE("Muckenhoupt constant of the unit weight with constant exponent is 1") {
    const auto fam = IntervalFamily::dyadic(6);
    for (double p : {1.5, 2.0, 3.0}) {
      CHECK(muckenhoupt_constant(Weight::unit(), ExponentFunction::constant(p), fam).value == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(classical_ap_constant(Weight::unit(), p, fam).value == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(classical_ap_constant(Weight::parse("3"), 2.0, fam).value == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("classical constants decrease in p interval by interval") {
    const auto fam = IntervalFamily::dyadic(5);
    for (double g : {0.5, -0.3}) {
      const auto w = Weight::power(g);
      const auto a = classical_ap_values(w, 1.5, fam);
      const auto b = classical_ap_values(w, 2.0, fam);
      const auto c = classical_ap_values(w, 3.0, fam);
      REQUIRE(a.size() == fam.intervals.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i] <= a[i] * (1 + 1e-8));
        CHECK(c[i] <= b[i] * (1 + 1e-8));
        CHECK(c[i] >= 1.0 - 1e-8);
      }
    }
  }

  TEST_CASE("averages are controlled by the A_2 constant") {
    const auto w = Weight::power(0.5);
    const auto fam = IntervalFamily::dyadic(4);
    const double c = classical_ap_constant(w, 2.0, fam).value;
    const auto wf = [](double x) { return std::pow(std::abs(std::sin(x / 2)), 0.5); };
    const std::function<double(double)> fs[] = {[](double x) { return std::exp(std::cos(x)); },
                                                [](double x) { return std::cos(3 * x) + 0.5 * std::sin(7 * x); },
                                                [](double x) { return x > 0 ? 1.0 : 0.1; }};
    for (const auto& f : fs)
      for (const Interval& B : fam.intervals) {
        // split at 0 so the singular factor sits at an endpoint
        auto integral = [&](const std::function<double(double)>& g) {
          if (B.interior(0.0)) return oracle::simpson(g, B.lo, 0.0, 20000) + oracle::simpson(g, 0.0, B.hi, 20000);
          return oracle::simpson(g, B.lo, B.hi, 20000);
        };
        const double avg = integral([&](double x) { return std::abs(f(x)); }) / B.length();
        const double lhs = avg * avg * integral(wf);
        const double rhs = integral([&](double x) { return f(x) * f(x) * wf(x); });
        CHECK(lhs <= 1.05 * c * rhs);
      }
  }

  TEST_CASE("classification of power weights") {
    const auto in = classify_weight(Weight::power(0.5), ExponentFunction::constant(2.0));
    CHECK(in.in_class);
    CHECK(in.change < 0.25);
    const auto out = classify_weight(Weight::power(-1.5), ExponentFunction::constant(2.0));
    CHECK_FALSE(out.in_class);
    REQUIRE(out.estimates.size() == 5);
    CHECK(out.estimates.back() >= 4.0 * out.estimates.front());
    for (std::size_t i = 1; i < out.estimates.size(); ++i) CHECK(out.estimates[i] > out.estimates[i - 1]);
  }
}
