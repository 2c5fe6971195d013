#include "oracle.hpp"

#include "vexlab/catalog.hpp"
#include "vexlab/kfunc.hpp"
#include "vexlab/smoothing.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vexlab;

namespace {

// inf over g = c cos of ||cos - g|| + δ ||g'|| at p = 2, scanned densely in c;
// other frequencies only add to both terms
double k_cos_oracle(double delta) {
  double best = 1e300;
  for (int i = 0; i <= 20000; ++i) {
    const double c = -0.5 + 2.0 * i / 20000;
    best = std::min(best, (std::abs(1 - c) + delta * std::abs(c)) * std::sqrt(pi));
  }
  return best;
}

}  // namespace

TEST_SUITE("kfunc") {
  TEST_CASE("K of cos at p = 2") {
    const auto cos = PeriodicFunction::parse("cos(x)");
    const ExponentFunction two = ExponentFunction::constant(2.0);
    for (double d : {0.25, 0.5, 1.0, 2.0}) {
      CAPTURE(d);
      const KResult k = k_functional(cos, d, 1, two, Weight::unit());
      CHECK(k.value == doctest::Approx(k_cos_oracle(d)).epsilon(1e-3));
      CHECK(k.value == doctest::Approx(std::sqrt(pi) * std::min(1.0, d)).epsilon(1e-3));
      CHECK(k.norm_bound == doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
      REQUIRE(k.derivative_bound.has_value());
      CHECK(*k.derivative_bound == doctest::Approx(d * std::sqrt(pi)).epsilon(1e-8));
    }
  }

  TEST_CASE("K is bounded by both trivial choices") {
    for (const CatalogSpace& s : solver_spaces())
      for (const CatalogFunction& f : smooth_functions())
        for (int r : {1, 2}) {
          CAPTURE(s.id());
          CAPTURE(f.id);
          CAPTURE(r);
          const KResult k = k_functional(f.f, 0.3, r, s.p, s.w);
          CHECK(k.value <= k.norm_bound * (1 + 1e-8));
          REQUIRE(k.derivative_bound.has_value());
          CHECK(k.value <= *k.derivative_bound * (1 + 1e-8));
          CHECK(k.value > 0.0);
        }
  }

  TEST_CASE("K increases with delta and tends to zero") {
    const auto f = PeriodicFunction::parse("exp(cos(x))");
    for (const char* p : {"2", "2+cos(x)"}) {
      CAPTURE(p);
      const ExponentFunction e = ExponentFunction::parse(p);
      const Weight w = Weight::power(0.5);
      double previous = 1e300;
      double norm = 0;
      for (double d : {1.0, 0.3, 0.1, 0.03, 0.01}) {
        const KResult k = k_functional(f, d, 1, e, w);
        norm = k.norm_bound;
        CHECK(k.value < previous);
        previous = k.value;
      }
      CHECK(previous < 0.05 * norm);
    }
  }

  TEST_CASE("degree doubling leaves K unchanged for smooth inputs") {
    const KResult k = k_functional(PeriodicFunction::parse("cos(3*x)+0.5*sin(7*x)"), 0.2, 2, ExponentFunction::constant(2.0),
                                   Weight::unit(), 0, {}, true);
    REQUIRE(k.doubled_value.has_value());
    CHECK(k.accepted);
    CHECK(*k.doubled_value == doctest::Approx(k.value).epsilon(1e-2));
  }

  TEST_CASE("polynomials of degree n have K below the derivative term") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 3; ++trial) {
      const auto c = oracle::random_packed(rng, 3 + trial);
      const auto t = TrigPolynomial<double>::from_packed(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
      const double d = 0.05 * (trial + 1);
      const ExponentFunction p = ExponentFunction::parse("2+cos(x)");
      const KResult k = k_functional(PeriodicFunction::trig(t), d, 2, p, Weight::unit());
      const double bound = d * d * ModularSpace::on_grid(p, Weight::unit(), 1024)(fourier::sample(t.derivative(2), 1024));
      CHECK(k.value <= bound * (1 + 1e-6));
    }
  }

  TEST_CASE("modulus is controlled by the derivative at p = 2") {
    // |1 - m_k(δ)| <= |k| δ / 2, so Ω_r(f, δ) <= (δ/2)^r ||f^(r)||
    const ExponentFunction two = ExponentFunction::constant(2.0);
    for (const CatalogFunction& f : smooth_functions())
      for (int r : {1, 2, 3})
        for (double d : {0.5, 0.1, 0.02}) {
          CAPTURE(f.id);
          const double om = modulus(PeriodicFunction::samples(f.f.sample(1024)), d, r, two, Weight::unit());
          const double der = ModularSpace::on_grid(two, Weight::unit(), 1024)(f.derivative_samples(1024, r));
          CHECK(om <= std::pow(d / 2, r) * der * (1 + 1e-6));
        }
  }

  TEST_CASE("realization operator") {
    const auto c = realization_operator(PeriodicFunction::constant(2.0), 0.5, 2);
    CHECK(c(0.3) == doctest::Approx(2.0).epsilon(1e-12));
    const auto cos = realization_operator(PeriodicFunction::parse("cos(x)"), 0.5, 1);
    const auto m = multiplier::r_delta(1, 0.5);
    for (double x : {-1.0, 0.2}) CHECK(cos(x) == doctest::Approx((m * std::exp(fourier::Complex(0, x))).real()).epsilon(1e-10));
  }

  TEST_CASE("resolution") {
    CHECK(resolution(PeriodicFunction::parse("cos(3*x)+0.5*sin(7*x)")) == 7);
    CHECK(resolution(PeriodicFunction::constant(1.0)) == 0);
    const int r = resolution(PeriodicFunction::parse("exp(cos(x))"));
    CHECK(r >= 12);
    CHECK(r <= 20);
  }
}
