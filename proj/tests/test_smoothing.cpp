#include "oracle.hpp"

#include "vexlab/diagnostics.hpp"
#include "vexlab/errors.hpp"
#include "vexlab/modular_norm.hpp"
#include "vexlab/smoothing.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace vexlab;
using cd = std::complex<double>;

namespace {

const std::vector<double> probes{-3.0, -2.2, -1.0, -0.1, 0.0, 0.45, 1.3, 2.0, 3.1};

double max_diff(const PeriodicFunction& f, const std::function<double(double)>& g) {
  double e = 0;
  for (double x : probes) e = std::max(e, std::abs(f(x) - g(x)));
  return e;
}

TrigPolynomial<double> random_trig(std::mt19937_64& rng, int degree) {
  const auto c = oracle::random_packed(rng, degree);
  return TrigPolynomial<double>::from_packed(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
}

// (2/δ) ∫_{δ/2}^{δ} (e^{ikh} - 1)/(ikh) dh by Simpson on real and imaginary parts
cd r_delta_oracle(int k, double delta) {
  if (k == 0) return 1.0;
  const double re = oracle::simpson([k](double h) { return std::sin(k * h) / (k * h); }, delta / 2, delta, 2000);
  const double im = oracle::simpson([k](double h) { return (1 - std::cos(k * h)) / (k * h); }, delta / 2, delta, 2000);
  return cd(re, im) * (2.0 / delta);
}

}  // namespace

TEST_SUITE("smoothing_ops") {
  TEST_CASE("Steklov means") {
    CHECK(max_diff(steklov(PeriodicFunction::constant(2.5), 0.3), [](double) { return 2.5; }) < 1e-12);
    CHECK(max_diff(steklov(PeriodicFunction::parse("sin(x)"), pi), [](double x) { return 2 * std::cos(x) / pi; }) < 1e-10);
    // quadrature path on a singular function
    const auto f = PeriodicFunction::parse("abs(sin(x/2))^0.5", Smoothness::singular, {0.0});
    const auto g = [](double t) { return std::sqrt(std::abs(std::sin(t / 2))); };
    const double h = 0.5;
    const auto Tf = steklov(f, h);
    for (double x : {-0.3, -0.1, 0.2, 1.0}) {
      double ref;
      if (x < 0 && x + h > 0)
        ref = (oracle::simpson(g, x, 0.0, 40000) + oracle::simpson(g, 0.0, x + h, 40000)) / h;
      else
        ref = oracle::simpson(g, x, x + h, 40000) / h;
      CHECK(Tf(x) == doctest::Approx(ref).epsilon(1e-6));
    }
  }

  TEST_CASE("translated Steklov means") {
    for (double lambda : {0.5, 2.0, 10.0}) {
      const double m = 2 * lambda * std::sin(1 / (2 * lambda));
      CHECK(max_diff(steklov_translated(PeriodicFunction::parse("cos(x)"), lambda, 0.0),
                     [m](double x) { return m * std::cos(x); }) < 1e-9);
    }
    CHECK(max_diff(steklov_translated(PeriodicFunction::parse("cos(x)"), 64.0, 0.5),
                   [](double x) { return std::cos(x + 0.5); }) <= 1e-3);
  }

  TEST_CASE("averaging over open sets") {
    OpenSetFamily one{{{0.0, 1.0}}, 1};
    const auto a = averaging(PeriodicFunction::parse("sin(x)"), one);
    CHECK(a(0.5) == doctest::Approx(1 - std::cos(1.0)).epsilon(1e-10));
    CHECK(a(-0.5) == 0.0);
    CHECK(a(2.0) == 0.0);
    const auto cover = OpenSetFamily::unit_cover();
    CHECK(cover.overlap() == 1);
    const auto c = averaging(PeriodicFunction::constant(3.0), cover);
    // the last unit interval overhangs pi, so its average is scaled by |U∩T|
    const double edge = -pi + 6.0;
    for (double x : probes) {
      CAPTURE(x);
      const double expected = x < edge ? 3.0 : 3.0 * (pi - edge);
      CHECK(c(x) == doctest::Approx(expected).epsilon(1e-10));
    }
    std::string seen;
    auto previous = set_warning_sink([&](std::string_view m) { seen = m; });
    const auto z = averaging(PeriodicFunction::constant(3.0), OpenSetFamily{});
    set_warning_sink(previous);
    CHECK(z(0.0) == 0.0);
    CHECK_FALSE(seen.empty());
  }

  TEST_CASE("multiplier of the double mean against its integral") {
    for (int k : {1, 2, 5, 17})
      for (double d : {0.01, 0.3, 1.0, 2.5}) {
        const cd m = multiplier::r_delta(k, d);
        const cd ref = r_delta_oracle(k, d);
        CHECK(std::abs(m - ref) < 1e-10);
        CHECK(std::abs(multiplier::r_delta(-k, d) - std::conj(ref)) < 1e-10);
      }
    CHECK(multiplier::r_delta(0, 0.4) == cd(1.0));
    CHECK(std::abs(multiplier::steklov(3, 0.7) - (std::exp(cd(0, 2.1)) - 1.0) / cd(0, 2.1)) < 1e-14);
  }

  TEST_CASE("double mean through quadrature") {
    const double d = 0.6;
    const cd m = r_delta_oracle(3, d);
    const auto Rf = r_delta(PeriodicFunction::parse("cos(3*x)"), d);
    CHECK(max_diff(Rf, [&](double x) { return (m * std::exp(cd(0, 3 * x))).real(); }) < 1e-8);
    const auto Rc = r_delta(PeriodicFunction::constant(-1.5), d, 3);
    CHECK(max_diff(Rc, [](double) { return -1.5; }) < 1e-10);
  }

  TEST_CASE("iterates and commutation on random polynomials") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
      const auto t = random_trig(rng, 2 + trial % 7);
      const auto f = PeriodicFunction::trig(t);
      const double d = 0.1 + 0.2 * trial;
      const auto twice = r_delta(r_delta(f, d), d);
      CHECK(max_diff(r_delta(f, d, 2), [&](double x) { return twice(x); }) < 1e-12);
      const auto a = differentiate(r_delta(f, d, 2), 1);
      const auto b = r_delta(differentiate(f, 1), d, 2);
      CHECK(max_diff(a, [&](double x) { return b(x); }) < 1e-11);
      const auto dd = difference(difference(f, d), d);
      CHECK(max_diff(difference(f, d, 2), [&](double x) { return dd(x); }) < 1e-12);
      const auto sd = shift_difference(shift_difference(f, d), d);
      CHECK(max_diff(shift_difference(f, d, 2), [&](double x) { return sd(x); }) < 1e-12);
      // binomial form of the forward difference
      const auto s3 = shift_difference(f, d, 3);
      CHECK(max_diff(s3, [&](double x) { return t(x + 3 * d) - 3 * t(x + 2 * d) + 3 * t(x + d) - t(x); }) < 1e-12);
    }
  }

  TEST_CASE("differences annihilate constants") {
    const auto c = PeriodicFunction::constant(4.0);
    for (int r = 1; r <= 3; ++r) {
      CHECK(max_diff(difference(c, 0.4, r), [](double) { return 0.0; }) < 1e-12);
      CHECK(max_diff(shift_difference(c, 0.4, r), [](double) { return 0.0; }) < 1e-12);
    }
  }

  TEST_CASE("modulus of smoothness") {
    const ExponentFunction two = ExponentFunction::constant(2.0);
    const auto cos = PeriodicFunction::parse("cos(x)");
    CHECK(modulus(cos, 0.0, 1, two, Weight::unit()) == 0.0);
    CHECK(modulus(cos, 0.7, 0, two, Weight::unit()) == doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
    for (double d : {0.1, 0.5, 2.0}) {
      const cd m = (std::exp(cd(0, d)) - 1.0) / cd(0, d);
      CHECK(modulus(cos, d, 1, two, Weight::unit()) == doctest::Approx(std::abs(1.0 - m) * std::sqrt(pi)).epsilon(1e-7));
      CHECK(modulus(cos, d, 2, two, Weight::unit()) ==
            doctest::Approx(std::norm(1.0 - m) * std::sqrt(pi)).epsilon(1e-7));
    }
  }

  TEST_CASE("convolution") {
    const auto f = PeriodicFunction::parse("exp(cos(x))");
    const auto one = convolve(f, PeriodicFunction::constant(1.0));
    CHECK(one(0.3) == doctest::Approx(two_pi * oracle::bessel_i(0, 1.0)).epsilon(1e-9));
    const auto c3 = PeriodicFunction::parse("cos(3*x)");
    CHECK(max_diff(convolve(c3, c3), [](double x) { return pi * std::cos(3 * x); }) < 1e-9);
    std::mt19937_64 rng(2);
    const auto a = PeriodicFunction::trig(random_trig(rng, 5));
    const auto b = PeriodicFunction::trig(random_trig(rng, 3));
    const auto ab = convolve(a, b), ba = convolve(b, a);
    CHECK(max_diff(ab, [&](double x) { return ba(x); }) < 1e-12);
  }

  TEST_CASE("approximation kernels") {
    for (const auto& name : ApproxKernel::names()) {
      CAPTURE(name);
      const auto k = ApproxKernel::parse(name);
      CHECK(k.integral() == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(k.transform(0.0) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(k.majorant_l1() >= 1.0 - 1e-8);
    }
    CHECK(ApproxKernel::parse("x2gauss").majorant_l1() > 1.1);
    CHECK_THROWS_AS(ApproxKernel::parse("bump(c=2)"), ConfigError);
    CHECK_THROWS_AS(ApproxKernel::parse("gauss(c=1)"), ConfigError);
    CHECK_THROWS_AS(ApproxKernel::parse("triangle"), ConfigError);
  }

  TEST_CASE("approximate identities converge and keep the mean") {
    const auto f = PeriodicFunction::parse("exp(cos(x))");
    const double mean = two_pi * oracle::bessel_i(0, 1.0);
    for (const auto& name : {"gauss", "poisson", "box"}) {
      const auto k = ApproxKernel::parse(name);
      double previous = 1e300;
      for (double t : {0.4, 0.1, 0.025}) {
        const auto g = approx_identity(f, k, t, 1024);
        const Eigen::ArrayXd s = g.sample(1024);
        CHECK(s.sum() * two_pi / 1024 == doctest::Approx(mean).epsilon(1e-8));
        const double err = max_diff(g, [&](double x) { return f(x); });
        CHECK(err < previous);
        previous = err;
      }
    }
  }

  TEST_CASE("transfer function") {
    const auto f = PeriodicFunction::parse("exp(cos(x))");
    const auto F = PeriodicFunction::parse("sin(x)");
    const auto u = transfer_function(f, F, 1024);
    // ∫ e^{cos x} |sin x| dx = 2 (e - 1/e)
    CHECK(u(0.0) == doctest::Approx(2 * (std::exp(1.0) - std::exp(-1.0))).epsilon(1e-4));
    const auto c = transfer_function(PeriodicFunction::constant(2.0), F, 1024);
    CHECK(c(1.2) == doctest::Approx(8.0).epsilon(1e-4));
  }
}
