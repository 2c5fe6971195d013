#include "vexlab/catalog.hpp"

#include "vexlab/errors.hpp"
#include "vexlab/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <regex>

namespace vexlab {

Eigen::ArrayXd CatalogFunction::derivative_samples(int n, int r) const {
  if (const auto* t = f.trig_source()) return fourier::sample(t->derivative(r), n);
  if (r > 0 && exact_derivative(r))
    return PeriodicFunction::expression(f.exact_derivatives()[r - 1]).sample(n);
  const Eigen::ArrayXd s = f.sample(n);
  return r == 0 ? s : fourier::derivative(s, r);
}

bool CatalogFunction::exact_derivative(int r) const {
  return r == 0 || f.trig_source() != nullptr || static_cast<int>(f.exact_derivatives().size()) >= r;
}

std::vector<CatalogFunction> smooth_functions() {
  std::vector<CatalogFunction> out;
  out.push_back({"exp_cos", PeriodicFunction::expression(
                                expr::parse("exp(cos(x))"), Smoothness::smooth, {},
                                {expr::parse("-sin(x)*exp(cos(x))"), expr::parse("(sin(x)^2-cos(x))*exp(cos(x))"),
                                 expr::parse("(3*sin(x)*cos(x)+sin(x)-sin(x)^3)*exp(cos(x))")})});
  TrigPolynomial<double> t(7);
  t.a(3) = 1.0;
  t.b(7) = 0.5;
  out.push_back({"trig_3_7", PeriodicFunction::trig(t)});
  out.push_back({"smoothed", PeriodicFunction::expression(expr::parse("(sin(x/2)^2+0.25)^0.75"))});
  return out;
}

CatalogFunction lacunary(double sigma, int J) {
  if (J < 0 || J > 24) throw ConfigError("lacunary needs 0 <= J <= 24");
  TrigPolynomial<double> t(1 << J);
  for (int j = 0; j <= J; ++j) t.a(1 << j) = std::pow(2.0, -sigma * j);
  char buf[96];
  std::snprintf(buf, sizeof buf, "lacunary(sigma=%g,J=%d)", sigma, J);
  return {buf, PeriodicFunction::trig(t)};
}

int lacunary_terms(double sigma, double tol) {
  if (!(sigma > 0.0)) throw ConfigError("lacunary needs sigma > 0");
  const double q = std::pow(4.0, -sigma);
  for (int J = 0; J <= 16; ++J) {
    // Σ_{j>J} q^j = q^{J+1}/(1-q)
    if (std::sqrt(pi * std::pow(q, J + 1) / (1.0 - q)) < tol) return J;
  }
  return 16;  // degree 65536 is plenty for the grids used here
}

CatalogFunction find_function(const std::string& id) {
  for (auto& f : smooth_functions())
    if (f.id == id) return f;
  static const std::regex lac(R"(lacunary\(sigma=([0-9.eE+-]+)(?:,\s*J=([0-9]+))?\))");
  std::smatch m;
  if (std::regex_match(id, m, lac)) {
    const double sigma = std::stod(m[1]);
    const int J = m[2].matched ? std::stoi(m[2]) : lacunary_terms(sigma);
    return lacunary(sigma, J);
  }
  throw ConfigError("unknown catalog function '" + id + "'");
}

std::vector<std::string> catalog_exponents() { return {"2", "2+cos(x)", "1.2+0.5*abs(sin(x))"}; }

std::vector<std::string> catalog_weights() {
  return {"1", "power_weight(gamma=0.5)", "power_weight(gamma=-0.3)"};
}

bool admissible(const ExponentFunction& p, const Weight& w) {
  const auto g = w.power_exponent();
  if (!g) return true;
  return *g > -1.0 && *g < p(0.0) - 1.0;
}

CatalogSpace make_space(const std::string& exponent_id, const std::string& weight_id) {
  return {exponent_id, weight_id, ExponentFunction::parse(exponent_id), Weight::parse(weight_id)};
}

std::vector<CatalogSpace> admissible_spaces(const std::vector<std::string>& exponents,
                                            const std::vector<std::string>& weights) {
  std::vector<CatalogSpace> out;
  for (const auto& e : exponents)
    for (const auto& w : weights) {
      CatalogSpace s = make_space(e, w);
      if (admissible(s.p, s.w)) out.push_back(std::move(s));
    }
  return out;
}

std::vector<CatalogSpace> catalog_spaces() { return admissible_spaces(catalog_exponents(), catalog_weights()); }

std::vector<CatalogSpace> solver_spaces() {
  return {make_space("2", "1"), make_space("2+cos(x)", "power_weight(gamma=0.5)"),
          make_space("1.2+0.5*abs(sin(x))", "power_weight(gamma=-0.3)")};
}

}  // namespace vexlab
