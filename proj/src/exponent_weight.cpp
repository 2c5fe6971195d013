#include "vexlab/exponent_weight.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/modular_norm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <regex>

namespace vexlab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  return std::nullopt;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // prefer the short form when it round-trips
  char shortbuf[32];
  std::snprintf(shortbuf, sizeof shortbuf, "%g", v);
  return std::strtod(shortbuf, nullptr) == v ? shortbuf : buf;
}

struct Extremes {
  double lower = 0.0;
  double upper = 0.0;
};

Extremes grid_extremes(const std::function<double(double)>& f) {
  constexpr int n = 4096;
  const Eigen::ArrayXd x = midpoint_grid(n);
  Eigen::ArrayXd v(n);
  for (int i = 0; i < n; ++i) v[i] = f(x[i]);
  Eigen::Index imin = 0, imax = 0;
  double lo = v.minCoeff(&imin);
  double hi = v.maxCoeff(&imax);
  const double h = two_pi / n;
  auto refine = [&](Eigen::Index i, double sign) {
    const double a = std::max(-pi, x[i] - h), b = std::min(pi, x[i] + h);
    const MinimizeResult r = brent_minimize([&](double t) { return sign * f(t); }, a, b, 1e-10, 80);
    return sign * r.fx;
  };
  lo = std::min({lo, refine(imin, 1.0), f(-pi), f(pi)});
  hi = std::max({hi, refine(imax, -1.0), f(-pi), f(pi)});
  return {lo, hi};
}

}  // namespace

// ---------------------------------------------------------------- exponents

struct ExponentFunction::Impl {
  std::function<double(double)> base;
  std::optional<double> constant;
  bool conjugate = false;
  std::string label;
  double base_lower = 2.0;
  double base_upper = 2.0;

  double value(double x) const {
    const double p = constant ? *constant : base(x);
    if (!conjugate) return p;
    if (p <= 1.0) return inf;
    return p / (p - 1.0);
  }
};

ExponentFunction::ExponentFunction() : ExponentFunction(constant(2.0)) {}

ExponentFunction::ExponentFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ExponentFunction ExponentFunction::constant(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("exponent must satisfy 1 <= p < infinity");
  auto impl = std::make_shared<Impl>();
  impl->constant = p;
  impl->label = "p=" + format_g(p);
  impl->base_lower = impl->base_upper = p;
  return ExponentFunction(std::move(impl));
}

ExponentFunction ExponentFunction::callable(std::function<double(double)> f, std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->base = std::move(f);
  impl->label = std::move(label);
  const Extremes e = grid_extremes(impl->base);
  if (!(e.lower >= 1.0 - 1e-12) || !std::isfinite(e.upper))
    throw ConfigError("exponent must satisfy 1 <= p(x) < infinity (found range [" + format_g(e.lower) + ", " +
                      format_g(e.upper) + "])");
  impl->base_lower = std::max(1.0, e.lower);
  impl->base_upper = e.upper;
  return ExponentFunction(std::move(impl));
}

ExponentFunction ExponentFunction::expression(expr::Expr e, std::string label) {
  if (e.is_constant()) return constant(expr::eval(e, 0.0));
  if (label.empty()) label = "p=" + expr::to_string(e);
  return callable([e](double x) { return expr::eval(e, reduce(x)); }, std::move(label));
}

ExponentFunction ExponentFunction::parse(std::string_view text) {
  std::string body = trim(text);
  if (body.rfind("p=", 0) == 0) body = trim(std::string_view(body).substr(2));
  if (auto v = parse_number(body)) return constant(*v);
  return expression(expr::parse(body), "p=" + body);
}

double ExponentFunction::operator()(double x) const { return impl_->value(x); }

Eigen::ArrayXd ExponentFunction::sample(const Eigen::ArrayXd& x) const {
  if (impl_->constant && !impl_->conjugate) return Eigen::ArrayXd::Constant(x.size(), *impl_->constant);
  Eigen::ArrayXd v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = impl_->value(x[i]);
  return v;
}

bool ExponentFunction::infinite_at(double x) const { return std::isinf(impl_->value(x)); }
bool ExponentFunction::is_constant() const { return impl_->constant.has_value(); }
bool ExponentFunction::is_conjugate() const { return impl_->conjugate; }
const std::string& ExponentFunction::label() const { return impl_->label; }

double ExponentFunction::lower() const {
  if (!impl_->conjugate) return impl_->base_lower;
  return impl_->base_upper / (impl_->base_upper - 1.0);
}

double ExponentFunction::upper() const {
  if (!impl_->conjugate) return impl_->base_upper;
  return impl_->base_lower <= 1.0 ? inf : impl_->base_lower / (impl_->base_lower - 1.0);
}

ExponentFunction ExponentFunction::conjugate() const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->conjugate = !impl_->conjugate;
  if (impl->conjugate) impl->label = "conjugate(" + impl_->label + ")";
  else if (impl_->label.rfind("conjugate(", 0) == 0)
    impl->label = impl_->label.substr(10, impl_->label.size() - 11);
  return ExponentFunction(std::move(impl));
}

ExponentFunction conjugate_exponent(const ExponentFunction& p) { return p.conjugate(); }

// ------------------------------------------------------------------ weights

struct Weight::Impl {
  std::function<double(double)> fn;
  std::vector<double> singular;
  double order = 0.0;
  std::optional<double> gamma;
  bool unit = false;
  std::string label;
  mutable std::once_flag mass_once;
  mutable double mass = 0.0;
  mutable std::exception_ptr mass_error;
};

Weight::Weight() : Weight(unit()) {}

Weight::Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Weight Weight::unit() {
  auto impl = std::make_shared<Impl>();
  impl->fn = [](double) { return 1.0; };
  impl->unit = true;
  impl->label = "1";
  return Weight(std::move(impl));
}

Weight Weight::power(double gamma) {
  if (gamma == 0.0) return unit();
  auto impl = std::make_shared<Impl>();
  impl->fn = [gamma](double x) { return std::pow(std::abs(std::sin(0.5 * x)), gamma); };
  impl->singular = {0.0};
  impl->order = gamma;
  impl->gamma = gamma;
  impl->label = "power_weight(gamma=" + format_g(gamma) + ")";
  return Weight(std::move(impl));
}

Weight Weight::callable(std::function<double(double)> f, std::vector<double> singular_points, double singular_order,
                        std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->fn = std::move(f);
  impl->singular = std::move(singular_points);
  impl->order = singular_order;
  impl->label = std::move(label);
  return Weight(std::move(impl));
}

Weight Weight::expression(expr::Expr e, std::vector<double> singular_points, double singular_order,
                          std::string label) {
  if (label.empty()) label = expr::to_string(e);
  return callable([e](double x) { return expr::eval(e, reduce(x)); }, std::move(singular_points), singular_order,
                  std::move(label));
}

Weight Weight::parse(std::string_view text) {
  const std::string body = trim(text);
  if (auto v = parse_number(body); v && *v == 1.0) return unit();
  static const std::regex power_re(R"(power_weight\(\s*gamma\s*=\s*([-+0-9.eE]+)\s*\))");
  std::smatch m;
  if (std::regex_match(body, m, power_re)) {
    const auto g = parse_number(m[1].str());
    if (!g) throw ConfigError("malformed gamma in '" + body + "'");
    return power(*g);
  }
  return expression(expr::parse(body), {}, 0.0, body);
}

double Weight::operator()(double x) const { return impl_->fn(x); }

Eigen::ArrayXd Weight::sample(const Eigen::ArrayXd& x) const {
  if (impl_->unit) return Eigen::ArrayXd::Ones(x.size());
  Eigen::ArrayXd v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = impl_->fn(x[i]);
  return v;
}

const std::vector<double>& Weight::singular_points() const { return impl_->singular; }
double Weight::singular_order() const { return impl_->order; }
std::optional<double> Weight::power_exponent() const { return impl_->gamma; }
bool Weight::is_unit() const { return impl_->unit; }
const std::string& Weight::label() const { return impl_->label; }

double Weight::total_mass() const {
  std::call_once(impl_->mass_once, [this] {
    try {
      if (impl_->unit) {
        impl_->mass = two_pi;
        return;
      }
      QuadratureConfig q;
      q.rule = impl_->singular.empty() ? QuadratureConfig::Rule::trapezoid : QuadratureConfig::Rule::gauss_legendre;
      std::vector<double> sing;
      for (double s : impl_->singular) sing.push_back(reduce(s));
      impl_->mass = integrate(impl_->fn, torus, sing, q).value;
    } catch (...) {
      impl_->mass_error = std::current_exception();
    }
  });
  if (impl_->mass_error) std::rethrow_exception(impl_->mass_error);
  return impl_->mass;
}

namespace {

bool touches(double a, double b, const std::vector<double>& singular) {
  for (double s : singular)
    for (int k = -1; k <= 1; ++k) {
      const double t = s + k * two_pi;
      if (t >= a - 1e-12 && t <= b + 1e-12) return true;
    }
  return false;
}

bool at_point(double x, const std::vector<double>& singular) {
  for (double s : singular)
    for (int k = -1; k <= 1; ++k)
      if (std::abs(x - (s + k * two_pi)) < 1e-12) return true;
  return false;
}

constexpr int kGradingLayers = 40;

}  // namespace

Eigen::ArrayXd cell_masses(const Weight& w, int n) {
  const double h = two_pi / n;
  if (w.is_unit()) return Eigen::ArrayXd::Constant(n, h);
  const Eigen::ArrayXd x = midpoint_grid(n);
  const auto& sing = w.singular_points();
  if (sing.empty()) return h * w.sample(x);
  Eigen::ArrayXd m(n);
  for (int j = 0; j < n; ++j) {
    const double a = -pi + j * h, b = a + h;
    NodeSet nodes;
    if (touches(a, b, sing)) {
      bool sa = at_point(a, sing), sb = at_point(b, sing);
      if (!sa && !sb) {
        // a singular point strictly inside the cell: split there
        double s = 0.5 * (a + b);
        for (double t : sing)
          for (int k = -1; k <= 1; ++k)
            if (t + k * two_pi > a && t + k * two_pi < b) s = t + k * two_pi;
        const NodeSet left = graded_panels(a, s, false, true, 1, kGradingLayers, 8);
        const NodeSet right = graded_panels(s, b, true, false, 1, kGradingLayers, 8);
        nodes.x.resize(left.x.size() + right.x.size());
        nodes.w.resize(nodes.x.size());
        nodes.x << left.x, right.x;
        nodes.w << left.w, right.w;
      } else {
        nodes = graded_panels(a, b, sa, sb, 1, kGradingLayers, 8);
      }
    } else {
      nodes = graded_panels(a, b, false, false, 1, 0, 8);
    }
    m[j] = (nodes.w * w.sample(nodes.x)).sum();
  }
  return m;
}

Weight dual_weight(const Weight& w, const ExponentFunction& p) {
  double order = 0.0;
  if (!w.singular_points().empty()) {
    const double ps = p(w.singular_points().front());
    order = (ps > 1.0 && std::isfinite(ps)) ? -w.singular_order() / (ps - 1.0) : 0.0;
  }
  if (w.is_unit()) return Weight::unit();
  return Weight::callable(
      [w, p](double x) {
        const double px = p(x);
        if (std::isinf(px)) return 1.0;
        if (px <= 1.0) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", x);
          throw CapabilityError(std::string("dual weight undefined where p(x) = 1, at x = ") + buf);
        }
        return std::pow(w(x), -1.0 / (px - 1.0));
      },
      w.singular_points(), order, "dual(" + w.label() + ", " + p.label() + ")");
}

double harmonic_mean_exponent(const ExponentFunction& p, Interval B, const QuadratureConfig& q) {
  if (!(B.length() > 0.0)) throw std::invalid_argument("harmonic mean needs |B| > 0");
  if (p.is_constant() && !p.is_conjugate()) return p(B.lo);
  const double integral = integrate([&p](double x) { return 1.0 / p(x); }, B, {}, q).value;
  return B.length() / integral;
}

// --------------------------------------------------------- interval families

IntervalFamily IntervalFamily::dyadic(int level, bool offsets) {
  IntervalFamily fam;
  fam.rule = Rule::dyadic;
  fam.level = level;
  for (int l = 0; l <= level; ++l) {
    const long count = 1L << l;
    const double len = two_pi / static_cast<double>(count);
    for (long i = 0; i < count; ++i) fam.intervals.push_back({-pi + i * len, (i + 1 == count) ? pi : -pi + (i + 1) * len});
    if (offsets && l >= 1)
      for (long i = 0; i + 1 < count; ++i) fam.intervals.push_back({-pi + (i + 0.5) * len, -pi + (i + 1.5) * len});
  }
  return fam;
}

IntervalFamily IntervalFamily::sliding(double width, int count) {
  IntervalFamily fam;
  fam.rule = Rule::sliding;
  if (!(width > 0.0 && width <= two_pi) || count < 1) throw std::invalid_argument("bad sliding window family");
  const double span = two_pi - width;
  for (int i = 0; i < count; ++i) {
    const double lo = -pi + (count == 1 ? 0.0 : span * i / (count - 1));
    fam.intervals.push_back({lo, std::min(pi, lo + width)});
  }
  return fam;
}

// ------------------------------------------------------- Muckenhoupt constants

namespace {

struct PanelGrid {
  std::vector<double> breaks;
  std::vector<Eigen::Index> start;  // node offset of each panel; start.back() == node count
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;

  std::size_t panel_index(double t) const {
    auto it = std::lower_bound(breaks.begin(), breaks.end(), t - 1e-12);
    return static_cast<std::size_t>(it - breaks.begin());
  }
};

PanelGrid build_panels(const IntervalFamily& family, const std::vector<double>& singular, const QuadratureConfig& q) {
  std::vector<double> pts;
  double finest = two_pi;
  for (const Interval& B : family.intervals) {
    pts.push_back(B.lo);
    pts.push_back(B.hi);
    finest = std::min(finest, B.length());
  }
  for (double s : singular) {
    const double r = reduce(s);
    pts.push_back(r);
    if (r == -pi) pts.push_back(pi);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> uniq;
  for (double t : pts)
    if (uniq.empty() || t - uniq.back() > 1e-12) uniq.push_back(t);

  PanelGrid g;
  const double target = 0.5 * finest;
  for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
    const double a = uniq[i], b = uniq[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / target - 1e-9)));
    for (int k = 0; k < pieces; ++k) g.breaks.push_back(a + (b - a) * k / pieces);
  }
  g.breaks.push_back(uniq.back());

  const int layers = std::max(8, static_cast<int>(std::ceil(-std::log2(q.tol))));
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i + 1 < g.breaks.size(); ++i) {
    g.start.push_back(static_cast<Eigen::Index>(xs.size()));
    const double a = g.breaks[i], b = g.breaks[i + 1];
    const NodeSet nodes = graded_panels(a, b, at_point(a, singular), at_point(b, singular), 1, layers, q.order);
    for (Eigen::Index k = 0; k < nodes.x.size(); ++k) {
      xs.push_back(nodes.x[k]);
      ws.push_back(nodes.w[k]);
    }
  }
  g.start.push_back(static_cast<Eigen::Index>(xs.size()));
  g.x = Eigen::Map<const Eigen::ArrayXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  g.w = Eigen::Map<const Eigen::ArrayXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return g;
}

Eigen::ArrayXd prefix(const Eigen::ArrayXd& v) {
  Eigen::ArrayXd p(v.size() + 1);
  p[0] = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
  return p;
}

std::vector<double> ap_values(const Weight& w, const ExponentFunction& p, const IntervalFamily& family,
                              const QuadratureConfig& q) {
  if (family.intervals.empty()) throw std::invalid_argument("interval family is empty");
  const PanelGrid g = build_panels(family, w.singular_points(), q);
  const Eigen::ArrayXd om = w.sample(g.x);
  const Eigen::ArrayXd pv = p.sample(g.x);
  const Eigen::ArrayXd P_om = prefix(g.w * om);
  const Eigen::ArrayXd P_invp = prefix(g.w / pv);
  const Eigen::ArrayXd inv_om = om.inverse();

  const bool constant = p.is_constant() && !p.is_conjugate();
  const double p0 = constant ? pv[0] : 0.0;
  Eigen::ArrayXd P_inner;
  if (constant && p0 > 1.0) P_inner = prefix(g.w * inv_om.pow(1.0 / (p0 - 1.0)));
  Eigen::ArrayXd inner_q;
  if (!constant) {
    inner_q.resize(pv.size());
    for (Eigen::Index i = 0; i < pv.size(); ++i) inner_q[i] = pv[i] <= 1.0 ? inf : 1.0 / (pv[i] - 1.0);
  }

  std::vector<double> out;
  out.reserve(family.intervals.size());
  for (const Interval& B : family.intervals) {
    const Eigen::Index a = g.start[g.panel_index(B.lo)];
    const Eigen::Index b = g.start[g.panel_index(B.hi)];
    const double len = B.length();
    const double omega_B = P_om[b] - P_om[a];
    const double p_B = len / (P_invp[b] - P_invp[a]);
    double inner = 0.0;
    if (constant && p0 == 1.0) {
      inner = inv_om.segment(a, b - a).maxCoeff();
    } else if (constant) {
      inner = std::pow(P_inner[b] - P_inner[a], p0 - 1.0);
    } else {
      const auto n = static_cast<std::size_t>(b - a);
      inner = solve_luxemburg({inv_om.data() + a, n}, {inner_q.data() + a, n}, {g.w.data() + a, n}, 1e-10).value;
    }
    out.push_back(omega_B / std::pow(len, p_B) * inner);
  }
  return out;
}

ApResult max_of(const std::vector<double>& values, const IntervalFamily& family) {
  ApResult r;
  r.intervals = static_cast<int>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw ConvergenceError("Muckenhoupt ratio is not finite on [" + format_g(family.intervals[i].lo) + ", " +
                                 format_g(family.intervals[i].hi) + "]",
                             r.value, values[i]);
    if (values[i] > r.value) {
      r.value = values[i];
      r.attained = family.intervals[i];
    }
  }
  return r;
}

}  // namespace

ApResult muckenhoupt_constant(const Weight& w, const ExponentFunction& p, const IntervalFamily& family,
                              const QuadratureConfig& q) {
  return max_of(ap_values(w, p, family, q), family);
}

std::vector<double> classical_ap_values(const Weight& w, double p, const IntervalFamily& family,
                                        const QuadratureConfig& q) {
  return ap_values(w, ExponentFunction::constant(p), family, q);
}

ApResult classical_ap_constant(const Weight& w, double p, const IntervalFamily& family, const QuadratureConfig& q) {
  return max_of(classical_ap_values(w, p, family, q), family);
}

WeightClassification classify_weight(const Weight& w, const ExponentFunction& p, int first_level, int last_level,
                                     const QuadratureConfig& q) {
  WeightClassification c;
  for (int l = first_level; l <= last_level; ++l) {
    c.levels.push_back(l);
    c.estimates.push_back(muckenhoupt_constant(w, p, IntervalFamily::dyadic(l), q).value);
  }
  const std::size_t n = c.estimates.size();
  const std::size_t ref = n >= 3 ? n - 3 : 0;
  c.change = n >= 2 ? std::abs(c.estimates[n - 1] / c.estimates[ref] - 1.0) : 0.0;
  c.in_class = n >= 2 && c.change < 0.25;
  return c;
}

// --------------------------------------------------------------- log-Hölder

double HolderPlan::min_separation() const { return std::pow(10.0, 2.0 - 4.0 * level); }

HolderEstimate log_holder_constant(const ExponentFunction& p, const HolderPlan& plan) {
  HolderEstimate est;
  const double dmin = plan.min_separation();
  const int steps = static_cast<int>(std::ceil(plan.per_decade * std::log10(two_pi / dmin)));
  double center = 0.0;
  bool have_center = false;
  auto consider = [&](double x, double y, double d, double& best_gap, double& best_mid) {
    const double px = p(x), py = p(y);
    const double factor = std::log(std::numbers::e + 1.0 / d);
    const double gap = std::abs(px - py);
    const double stat = gap * factor;
    const double rstat = std::abs(1.0 / px - 1.0 / py) * factor;
    ++est.pairs;
    if (stat > est.value) {
      est.value = stat;
      est.x = x;
      est.y = y;
    }
    est.reciprocal_value = std::max(est.reciprocal_value, rstat);
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = 0.5 * (x + y);
    }
  };
  for (int j = 0; j <= steps; ++j) {
    const double d = std::max(dmin, two_pi * std::pow(10.0, -static_cast<double>(j) / plan.per_decade));
    double best_gap = -1.0, best_mid = 0.0;
    const double span = two_pi - d;
    for (int i = 0; i < plan.base_points; ++i) {
      const double x = -pi + (i + 0.5) * span / plan.base_points;
      consider(x, x + d, d, best_gap, best_mid);
    }
    if (have_center) {
      for (int t = -2; t <= 2; ++t) {
        const double c = std::clamp(center + 0.25 * t * d, -pi + 0.5 * d, pi - 0.5 * d);
        consider(c - 0.5 * d, c + 0.5 * d, d, best_gap, best_mid);
      }
    }
    center = best_mid;
    have_center = true;
    if (d == dmin) break;
  }
  return est;
}

HolderStability log_holder_stability(const ExponentFunction& p) {
  HolderStability s;
  HolderPlan coarse;
  coarse.level = 1;
  HolderPlan fine;
  fine.level = 2;
  s.coarse = log_holder_constant(p, coarse);
  s.fine = log_holder_constant(p, fine);
  s.growth = s.coarse.value > 0.0 ? s.fine.value / s.coarse.value : 1.0;
  s.log_holder = s.growth < 2.0;
  return s;
}

}  // namespace vexlab
