#include "vexlab/periodic_function.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/fourier.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vexlab {

struct PeriodicFunction::Impl {
  Source source = Source::trig;
  Smoothness smoothness = Smoothness::smooth;
  std::vector<double> singular;
  std::optional<expr::Expr> expression;
  std::vector<expr::Expr> derivatives;
  Eigen::ArrayXd values;
  std::optional<TrigPolynomial<double>> polynomial;  // trig source, or interpolant of samples
  std::function<double(double)> fn;
};

PeriodicFunction::PeriodicFunction() : PeriodicFunction(trig(TrigPolynomial<double>(0))) {}

PeriodicFunction::PeriodicFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

PeriodicFunction PeriodicFunction::expression(expr::Expr e, Smoothness s, std::vector<double> singular_points,
                                              std::vector<expr::Expr> derivatives) {
  auto impl = std::make_shared<Impl>();
  impl->source = Source::expression;
  impl->smoothness = s;
  impl->singular = std::move(singular_points);
  impl->expression = std::move(e);
  impl->derivatives = std::move(derivatives);
  return PeriodicFunction(std::move(impl));
}

PeriodicFunction PeriodicFunction::parse(std::string_view text, Smoothness s, std::vector<double> singular_points) {
  return expression(expr::parse(text), s, std::move(singular_points));
}

PeriodicFunction PeriodicFunction::samples(Eigen::ArrayXd values, Smoothness s) {
  if (values.size() < 16 || !is_power_of_two(values.size()))
    throw std::invalid_argument("sample vectors need a power-of-two length of at least 16");
  auto impl = std::make_shared<Impl>();
  impl->source = Source::samples;
  impl->smoothness = s;
  impl->polynomial = fourier::interpolant(values);
  impl->values = std::move(values);
  return PeriodicFunction(std::move(impl));
}

PeriodicFunction PeriodicFunction::trig(TrigPolynomial<double> t) {
  auto impl = std::make_shared<Impl>();
  impl->source = Source::trig;
  impl->polynomial = std::move(t);
  return PeriodicFunction(std::move(impl));
}

PeriodicFunction PeriodicFunction::callable(std::function<double(double)> f, Smoothness s,
                                            std::vector<double> singular_points) {
  auto impl = std::make_shared<Impl>();
  impl->source = Source::callable;
  impl->smoothness = s;
  impl->singular = std::move(singular_points);
  impl->fn = std::move(f);
  return PeriodicFunction(std::move(impl));
}

PeriodicFunction PeriodicFunction::constant(double c) {
  TrigPolynomial<double> t(0);
  t.a(0) = 2.0 * c;
  return trig(std::move(t));
}

PeriodicFunction::Source PeriodicFunction::source() const { return impl_->source; }
Smoothness PeriodicFunction::smoothness() const { return impl_->smoothness; }
const std::vector<double>& PeriodicFunction::singular_points() const { return impl_->singular; }
const std::optional<expr::Expr>& PeriodicFunction::expression_source() const { return impl_->expression; }
const std::vector<expr::Expr>& PeriodicFunction::exact_derivatives() const { return impl_->derivatives; }

const Eigen::ArrayXd* PeriodicFunction::sample_source() const {
  return impl_->source == Source::samples ? &impl_->values : nullptr;
}

const TrigPolynomial<double>* PeriodicFunction::trig_source() const {
  return impl_->source == Source::trig ? &*impl_->polynomial : nullptr;
}

std::optional<TrigPolynomial<double>> PeriodicFunction::as_trig() const { return impl_->polynomial; }

double reduce(double x) {
  if (x >= -pi && x < pi) return x;
  double r = std::fmod(x + pi, two_pi);
  if (r < 0) r += two_pi;
  return r - pi;
}

double PeriodicFunction::operator()(double x) const {
  const double t = reduce(x);
  switch (impl_->source) {
    case Source::expression: return expr::eval(*impl_->expression, t);
    case Source::samples:
    case Source::trig: return (*impl_->polynomial)(t);
    case Source::callable: return impl_->fn(t);
  }
  return 0.0;
}

Eigen::ArrayXd PeriodicFunction::sample(int n) const {
  switch (impl_->source) {
    case Source::expression: return expr::eval(*impl_->expression, midpoint_grid(n));
    case Source::samples: return fourier::resample(impl_->values, n);
    case Source::trig: return fourier::sample(*impl_->polynomial, n);
    case Source::callable: {
      const Eigen::ArrayXd x = midpoint_grid(n);
      Eigen::ArrayXd v(n);
      for (int j = 0; j < n; ++j) v[j] = impl_->fn(x[j]);
      return v;
    }
  }
  return {};
}

std::string PeriodicFunction::describe() const {
  std::ostringstream out;
  switch (impl_->source) {
    case Source::expression: out << expr::to_string(*impl_->expression); break;
    case Source::samples: out << "samples[" << impl_->values.size() << "]"; break;
    case Source::trig: out << "trig[degree " << impl_->polynomial->degree() << "]"; break;
    case Source::callable: out << "callable"; break;
  }
  return out.str();
}

std::vector<double> singular_points_in(const PeriodicFunction& f, double a, double b) {
  std::vector<double> out;
  for (double s : f.singular_points()) {
    const double first = s + two_pi * std::ceil((a - s) / two_pi - 1e-15);
    for (double t = first; t <= b + 1e-15; t += two_pi) out.push_back(t);
  }
  return out;
}

QuadResult integrate(const PeriodicFunction& f, Interval B, const QuadratureConfig& q) {
  if (B.lo < -pi - 1e-12 || B.hi > pi + 1e-12 || B.lo > B.hi)
    throw std::invalid_argument("integration interval must lie in [-pi, pi]");
  const std::vector<double> sing = singular_points_in(f, B.lo, B.hi);
  return integrate([&f](double x) { return f(x); }, B, sing, q);
}

PeriodicFunction differentiate(const PeriodicFunction& f, int r, int spectral_grid) {
  if (r < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (r == 0) return f;
  if (const auto* t = f.trig_source()) return PeriodicFunction::trig(t->derivative(r));
  if (f.smoothness() == Smoothness::singular)
    throw CapabilityError("cannot differentiate a function tagged singular");
  const auto& exact = f.exact_derivatives();
  if (f.source() == PeriodicFunction::Source::expression && static_cast<int>(exact.size()) >= r) {
    std::vector<expr::Expr> rest(exact.begin() + r, exact.end());
    return PeriodicFunction::expression(exact[static_cast<std::size_t>(r - 1)], f.smoothness(), f.singular_points(),
                                        std::move(rest));
  }
  if (f.smoothness() != Smoothness::smooth)
    throw CapabilityError("derivative needs an exact source or a smooth function");
  if (const auto* v = f.sample_source()) return PeriodicFunction::samples(fourier::derivative(*v, r));
  if (!is_power_of_two(spectral_grid) || spectral_grid < 16)
    throw std::invalid_argument("spectral grid must be a power of two of at least 16");
  return PeriodicFunction::samples(fourier::derivative(f.sample(spectral_grid), r));
}

}  // namespace vexlab
