#include "vexlab/smoothing.hpp"

#include "vexlab/diagnostics.hpp"
#include "vexlab/errors.hpp"
#include "vexlab/modular_norm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <regex>

namespace vexlab {

using fourier::Complex;

namespace multiplier {

Complex steklov(int k, double h) {
  if (k == 0) return 1.0;
  const double u = k * h;
  const double s = std::sin(0.5 * u);
  return {std::sin(u) / u, 2.0 * s * s / u};
}

Complex r_delta(int k, double delta) {
  if (k == 0) return 1.0;
  const NodeSet& gl = gauss_legendre(10);
  const int panels = 2 + static_cast<int>(std::ceil(std::abs(k) * delta));
  const double a = 0.5 * delta, width = 0.5 * delta / panels;
  Complex sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (Eigen::Index i = 0; i < gl.x.size(); ++i) sum += gl.w[i] * 0.5 * width * steklov(k, mid + 0.5 * width * gl.x[i]);
  }
  return sum * (2.0 / delta);
}

Complex difference(int k, double h, int r) { return std::pow(steklov(k, h) - 1.0, r); }

Complex shift_difference(int k, double h, int r) {
  if (k == 0) return r == 0 ? 1.0 : 0.0;
  // e^{iu} - 1 = 2i sin(u/2) e^{iu/2}, accurate for small u
  const double u = k * h;
  return std::pow(Complex(0.0, 2.0 * std::sin(0.5 * u)) * std::polar(1.0, 0.5 * u), r);
}

Complex modulus(int k, double h, int r) { return std::pow(1.0 - steklov(k, h), r); }

Complex realization(int k, double delta, int r) {
  const Complex mu_r = std::pow(r_delta(k, delta), r);
  return 1.0 - std::pow(1.0 - mu_r, r);
}

}  // namespace multiplier

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// ∫_a^b f(x+t) K(t) dt, split at kernel breakpoints and at singular points of f.
double kernel_integral(const PeriodicFunction& f, double x, double a, double b,
                       const std::function<double(double)>& K, std::vector<double> breaks,
                       const QuadratureConfig& q) {
  for (double s : f.singular_points()) {
    const double base = s - x;
    const long j0 = static_cast<long>(std::floor((a - base) / two_pi)) - 1;
    for (long j = j0; base + j * two_pi < b; ++j) {
      const double t = base + j * two_pi;
      if (t > a && t < b) breaks.push_back(t);
    }
  }
  std::erase_if(breaks, [&](double t) { return !(t > a && t < b); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadratureConfig inner = q;
  inner.rule = QuadratureConfig::Rule::gauss_legendre;
  return integrate([&](double t) { return f(x + t) * K(t); }, Interval{a, b}, breaks, inner).value;
}

bool spectral(const PeriodicFunction& f) {
  return f.source() == PeriodicFunction::Source::trig || f.source() == PeriodicFunction::Source::samples;
}

Smoothness smoother(const PeriodicFunction& f) {
  return f.smoothness() == Smoothness::singular ? Smoothness::piecewise : f.smoothness();
}

/// Cardinal B-spline of order j on [0, j].
double cardinal_bspline(int j, double x) {
  if (x <= 0.0 || x >= j) return 0.0;
  double sum = 0.0, fact = 1.0;
  for (int i = 2; i < j; ++i) fact *= i;
  for (int i = 0; i <= j && i < x; ++i)
    sum += ((i % 2) ? -1.0 : 1.0) * binomial(j, i) * std::pow(x - i, j - 1);
  return sum / fact;
}

/// T_h^j f(x) as a single integral against the B-spline kernel.
double steklov_power(const PeriodicFunction& f, double x, double h, int j, const QuadratureConfig& q) {
  if (j == 0) return f(x);
  std::vector<double> breaks;
  for (int i = 1; i < j; ++i) breaks.push_back(i * h);
  return kernel_integral(
      f, x, 0.0, j * h, [h, j](double t) { return cardinal_bspline(j, t / h) / h; }, breaks, q);
}

}  // namespace

OpenSetFamily OpenSetFamily::unit_cover(double offset) {
  OpenSetFamily fam;
  for (double lo = -pi + offset - std::ceil(offset); lo < pi; lo += 1.0) fam.sets.push_back({lo, lo + 1.0});
  return fam;
}

int OpenSetFamily::overlap() const {
  std::vector<std::pair<double, int>> events;
  for (const Interval& U : sets) {
    events.emplace_back(U.lo, 1);
    events.emplace_back(U.hi, -1);
  }
  // open sets: a closing endpoint is processed before an opening one at the same point
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
  int depth = 0, best = 0;
  for (const auto& e : events) best = std::max(best, depth += e.second);
  return best;
}

PeriodicFunction apply_multiplier(const PeriodicFunction& f, const fourier::Multiplier& m, int grid) {
  if (const auto* t = f.trig_source()) return PeriodicFunction::trig(fourier::apply(*t, m));
  if (const auto* s = f.sample_source()) return PeriodicFunction::samples(fourier::apply(*s, m), smoother(f));
  return PeriodicFunction::samples(fourier::apply(f.sample(grid), m), smoother(f));
}

PeriodicFunction steklov(const PeriodicFunction& f, double h, const QuadratureConfig& q) {
  if (!(h > 0.0 && h <= two_pi)) throw std::invalid_argument("steklov needs 0 < h <= 2pi");
  if (spectral(f)) return apply_multiplier(f, [h](int k) { return multiplier::steklov(k, h); });
  return PeriodicFunction::callable(
      [f, h, q](double x) { return kernel_integral(f, x, 0.0, h, [](double) { return 1.0; }, {}, q) / h; },
      smoother(f));
}

PeriodicFunction steklov_translated(const PeriodicFunction& f, double lambda, double tau,
                                    const QuadratureConfig& q) {
  if (!(lambda > 0.0)) throw std::invalid_argument("steklov_translated needs lambda > 0");
  const double half = 0.5 / lambda;
  if (spectral(f))
    return apply_multiplier(f, [half, tau](int k) {
      const double u = k * half;
      const double sinc = k == 0 ? 1.0 : std::sin(u) / u;
      return sinc * std::polar(1.0, k * tau);
    });
  return PeriodicFunction::callable(
      [f, lambda, tau, half, q](double x) {
        return lambda * kernel_integral(f, x, tau - half, tau + half, [](double) { return 1.0; }, {}, q);
      },
      smoother(f));
}

PeriodicFunction averaging(const PeriodicFunction& f, const OpenSetFamily& family, const QuadratureConfig& q) {
  if (family.sets.empty()) {
    warn("averaging over an empty family returns the zero function");
    return PeriodicFunction::constant(0.0);
  }
  std::vector<Interval> pieces;
  std::vector<double> averages;
  std::vector<double> edges;
  QuadratureConfig inner = q;
  inner.rule = QuadratureConfig::Rule::gauss_legendre;
  for (const Interval& U : family.sets) {
    const Interval B{std::max(U.lo, -pi), std::min(U.hi, pi)};
    if (!(B.hi > B.lo)) continue;
    std::vector<double> sing = singular_points_in(f, B.lo, B.hi);
    const double I = integrate([&f](double x) { return std::abs(f(x)); }, B, sing, inner).value;
    pieces.push_back(B);
    averages.push_back(I / U.length());
    edges.push_back(B.lo);
    edges.push_back(B.hi);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return PeriodicFunction::callable(
      [pieces, averages](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < pieces.size(); ++i)
          if (pieces[i].interior(x)) s += averages[i];
        return s;
      },
      Smoothness::piecewise, edges);
}

PeriodicFunction r_delta(const PeriodicFunction& f, double delta, int r, const QuadratureConfig& q) {
  if (!(delta > 0.0 && delta <= two_pi)) throw std::invalid_argument("r_delta needs 0 < delta <= 2pi");
  if (r < 1) throw std::invalid_argument("r_delta needs r >= 1");
  if (spectral(f)) return apply_multiplier(f, [delta, r](int k) { return std::pow(multiplier::r_delta(k, delta), r); });
  PeriodicFunction g = f;
  for (int i = 0; i < r; ++i) {
    g = PeriodicFunction::callable(
        [g, delta, q](double x) {
          return kernel_integral(
              g, x, 0.0, delta,
              [delta](double t) { return (2.0 / delta) * std::log(delta / std::max(t, 0.5 * delta)); },
              {0.5 * delta}, q);
        },
        smoother(f));
  }
  return g;
}

PeriodicFunction difference(const PeriodicFunction& f, double h, int r, const QuadratureConfig& q) {
  if (!(h > 0.0)) throw std::invalid_argument("difference needs h > 0");
  if (r < 0) throw std::invalid_argument("difference needs r >= 0");
  if (r == 0) return f;
  if (spectral(f)) return apply_multiplier(f, [h, r](int k) { return multiplier::difference(k, h, r); });
  return PeriodicFunction::callable(
      [f, h, r, q](double x) {
        double s = 0.0;
        for (int j = 0; j <= r; ++j) s += (((r - j) % 2) ? -1.0 : 1.0) * binomial(r, j) * steklov_power(f, x, h, j, q);
        return s;
      },
      smoother(f));
}

PeriodicFunction shift_difference(const PeriodicFunction& f, double h, int r) {
  if (r < 0) throw std::invalid_argument("shift_difference needs r >= 0");
  if (r == 0) return f;
  if (f.trig_source()) return apply_multiplier(f, [h, r](int k) { return multiplier::shift_difference(k, h, r); });
  std::vector<double> sing;
  for (double s : f.singular_points())
    for (int v = 0; v <= r; ++v) sing.push_back(reduce(s - v * h));
  return PeriodicFunction::callable(
      [f, h, r](double x) {
        double s = 0.0;
        for (int v = 0; v <= r; ++v) s += (((r - v) % 2) ? -1.0 : 1.0) * binomial(r, v) * f(x + v * h);
        return s;
      },
      f.smoothness(), sing);
}

double modulus(const PeriodicFunction& f, double delta, int r, const ExponentFunction& p, const Weight& w,
               const QuadratureConfig& q, double tol) {
  if (r < 0 || delta < 0.0) throw std::invalid_argument("modulus needs r >= 0 and delta >= 0");
  if (r == 0) return luxemburg_norm(f, p, w, torus, q, tol).value;
  if (delta == 0.0) return 0.0;
  return luxemburg_norm(difference(f, delta, r, q), p, w, torus, q, tol).value;
}

PeriodicFunction convolve(const PeriodicFunction& f, const PeriodicFunction& g, const QuadratureConfig& q) {
  const auto* tf = f.trig_source();
  const auto* tg = g.trig_source();
  if (tf && tg) {
    const int n = std::min(tf->degree(), tg->degree());
    Eigen::ArrayXcd c(2 * n + 1);
    for (int k = -n; k <= n; ++k) c[k + n] = two_pi * tf->coefficient(k) * tg->coefficient(k);
    return PeriodicFunction::trig(TrigPolynomial<double>::from_complex(c));
  }
  const auto* sf = f.sample_source();
  const auto* sg = g.sample_source();
  if ((sf || tf) && (sg || tg)) {
    const int n = static_cast<int>(sf ? sf->size() : sg->size());
    const Eigen::ArrayXd a = sf && sf->size() == n ? *sf : f.sample(n);
    const Eigen::ArrayXd b = sg && sg->size() == n ? *sg : g.sample(n);
    Eigen::ArrayXcd c = two_pi * fourier::spectrum(a) * fourier::spectrum(b);
    c[n / 2] = 0.0;
    return PeriodicFunction::samples(fourier::synthesize(c));
  }
  return PeriodicFunction::callable(
      [f, g, q](double x) {
        std::vector<double> breaks = f.singular_points();
        for (double s : g.singular_points()) breaks.push_back(reduce(x - s));
        std::erase_if(breaks, [](double t) { return !(t > -pi && t < pi); });
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        QuadratureConfig inner = q;
        if (!breaks.empty()) inner.rule = QuadratureConfig::Rule::gauss_legendre;
        return integrate([&](double y) { return f(y) * g(x - y); }, torus, breaks, inner).value;
      },
      Smoothness::smooth);
}

// ------------------------------------------------------------ approximate identities

struct ApproxKernel::Impl {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> transform;
  std::vector<double> kinks;  // |x| where φ is not smooth
  double integral = 0.0;
  double majorant = 0.0;
};

namespace {

constexpr double bump_mass = 0.4439938161680794;  // ∫_{-1}^{1} exp(-1/(1-x^2)) dx

double line_integral(const std::function<double(double)>& g, const std::vector<double>& kinks) {
  // x = tan θ on [0, π/2), even integrand
  std::vector<double> breaks;
  for (double k : kinks) breaks.push_back(std::atan(k));
  QuadratureConfig q;
  q.rule = QuadratureConfig::Rule::gauss_legendre;
  q.tol = 1e-13;
  q.panels = 32;
  const double half = integrate(
                          [&g](double t) {
                            const double c = std::cos(t);
                            return c < 1e-300 ? 0.0 : g(std::tan(t)) / (c * c);
                          },
                          Interval{0.0, 0.5 * pi}, breaks, q)
                          .value;
  return 2.0 * half;
}

double majorant_norm(const std::function<double(double)>& phi) {
  // least radially decreasing majorant, by a running maximum from the far tail inwards
  constexpr int n = 1 << 20;
  const double dt = 0.5 * pi / n;
  double run = 0.0, sum = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const double t = (i + 0.5) * dt;
    const double c = std::cos(t);
    run = std::max(run, std::abs(phi(std::tan(t))));
    sum += run / (c * c) * dt;
  }
  return 2.0 * sum;
}

std::shared_ptr<ApproxKernel::Impl> make_kernel(const std::string& name, double bump_constant) {
  auto k = std::make_shared<ApproxKernel::Impl>();
  k->name = name;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(two_pi);
  if (name == "gauss") {
    k->phi = [inv_sqrt_2pi](double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); };
    k->transform = [](double xi) { return std::exp(-0.5 * xi * xi); };
  } else if (name == "poisson") {
    k->phi = [](double x) { return 1.0 / (pi * (1.0 + x * x)); };
    k->transform = [](double xi) { return std::exp(-std::abs(xi)); };
  } else if (name == "box") {
    k->phi = [](double x) { return std::abs(x) < 1.0 ? 0.5 : 0.0; };
    k->transform = [](double xi) { return xi == 0.0 ? 1.0 : std::sin(xi) / xi; };
    k->kinks = {1.0};
  } else if (name == "x2gauss") {
    k->phi = [inv_sqrt_2pi](double x) { return inv_sqrt_2pi * x * x * std::exp(-0.5 * x * x); };
    k->transform = [](double xi) { return (1.0 - xi * xi) * std::exp(-0.5 * xi * xi); };
  } else if (name == "bump") {
    const double C = bump_constant;
    auto phi = [C](double x) { return std::abs(x) < 1.0 ? C * std::exp(-1.0 / (1.0 - x * x)) : 0.0; };
    k->phi = phi;
    k->transform = [phi](double xi) {
      const NodeSet& gl = gauss_legendre(10);
      const int panels = 8 + static_cast<int>(std::ceil(std::abs(xi)));
      const double w = 1.0 / panels;
      double s = 0.0;
      for (int p = 0; p < panels; ++p)
        for (Eigen::Index i = 0; i < gl.x.size(); ++i) {
          const double x = (p + 0.5 + 0.5 * gl.x[i]) * w;
          s += gl.w[i] * 0.5 * w * phi(x) * std::cos(x * xi);
        }
      return 2.0 * s;
    };
    k->kinks = {1.0};
  } else {
    throw ConfigError("unknown kernel '" + name + "'");
  }
  k->integral = line_integral(k->phi, k->kinks);
  k->majorant = majorant_norm(k->phi);
  return k;
}

}  // namespace

ApproxKernel::ApproxKernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

std::vector<std::string> ApproxKernel::names() { return {"gauss", "poisson", "box", "x2gauss", "bump"}; }

ApproxKernel ApproxKernel::parse(std::string_view spec) {
  static const std::regex with_constant(R"(\s*(\w+)\s*\(\s*c\s*=\s*([-+0-9.eE]+)\s*\)\s*)");
  std::string text(spec);
  std::smatch m;
  std::string name = text;
  double c = 1.0 / bump_mass;
  if (std::regex_match(text, m, with_constant)) {
    name = m[1].str();
    if (name != "bump") throw ConfigError("kernel '" + name + "' takes no constant");
    const std::string v = m[2].str();
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), c);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("malformed kernel constant in '" + text + "'");
  }
  auto impl = make_kernel(name, c);
  if (name == "bump" && text != "bump") impl->name = text;
  if (std::abs(impl->integral - 1.0) > 1e-8) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", impl->integral);
    throw ConfigError("kernel '" + text + "' integrates to " + buf + ", not 1");
  }
  return ApproxKernel(std::move(impl));
}

const std::string& ApproxKernel::name() const { return impl_->name; }
double ApproxKernel::operator()(double x) const { return impl_->phi(x); }
double ApproxKernel::transform(double xi) const { return impl_->transform(xi); }
double ApproxKernel::integral() const { return impl_->integral; }
double ApproxKernel::majorant_l1() const { return impl_->majorant; }

PeriodicFunction approx_identity(const PeriodicFunction& f, const ApproxKernel& kernel, double t, int grid) {
  if (!(t > 0.0)) throw std::invalid_argument("approx_identity needs t > 0");
  return apply_multiplier(f, [kernel, t](int k) { return Complex(kernel.transform(k * t)); }, grid);
}

PeriodicFunction transfer_function(const PeriodicFunction& f, const PeriodicFunction& F, int grid) {
  if (!is_power_of_two(grid) || grid < 16) throw std::invalid_argument("transfer grid must be a power of two >= 16");
  const Eigen::ArrayXd fs = f.sample(grid);
  const Eigen::ArrayXd Fs = F.sample(grid).abs();
  Eigen::ArrayXcd c = two_pi * fourier::spectrum(fs) * fourier::spectrum(Fs).conjugate();
  c[grid / 2] = 0.0;
  return PeriodicFunction::samples(fourier::synthesize(c));
}

}  // namespace vexlab
