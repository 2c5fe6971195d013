#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace vexlab {

/// a_0/2 + sum_{k=1}^n (a_k cos kx + b_k sin kx). b_0 is stored but always zero.
template <typename Scalar = double>
class TrigPolynomial {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Complex = std::complex<Scalar>;

  TrigPolynomial() : TrigPolynomial(0) {}
  explicit TrigPolynomial(int degree) : a_(Vector::Zero(degree + 1)), b_(Vector::Zero(degree + 1)) {
    if (degree < 0) throw std::invalid_argument("negative degree");
  }
  TrigPolynomial(Vector a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() == 0 || a_.size() != b_.size()) throw std::invalid_argument("coefficient sizes differ");
    b_[0] = Scalar(0);
  }

  /// Coefficients in the order a_0, a_1, b_1, ..., a_n, b_n.
  static TrigPolynomial from_packed(const Vector& c) {
    if (c.size() % 2 == 0) throw std::invalid_argument("packed coefficient vector must have odd length");
    const int n = static_cast<int>(c.size() / 2);
    TrigPolynomial t(n);
    t.a_[0] = c[0];
    for (int k = 1; k <= n; ++k) {
      t.a_[k] = c[2 * k - 1];
      t.b_[k] = c[2 * k];
    }
    return t;
  }

  Vector packed() const {
    const int n = degree();
    Vector c(2 * n + 1);
    c[0] = a_[0];
    for (int k = 1; k <= n; ++k) {
      c[2 * k - 1] = a_[k];
      c[2 * k] = b_[k];
    }
    return c;
  }

  /// From exponential coefficients c_k, k = -n..n, stored at index k + n.
  static TrigPolynomial from_complex(const Eigen::Array<Complex, Eigen::Dynamic, 1>& c) {
    const int n = static_cast<int>(c.size() / 2);
    TrigPolynomial t(n);
    t.a_[0] = Scalar(2) * c[n].real();
    for (int k = 1; k <= n; ++k) {
      t.a_[k] = (c[n + k] + c[n - k]).real();
      t.b_[k] = -(c[n + k] - c[n - k]).imag();
    }
    return t;
  }

  /// c_k = (a_k - i b_k)/2 for k > 0, conjugate for k < 0.
  Complex coefficient(int k) const {
    const int ak = k < 0 ? -k : k;
    if (ak > degree()) return Complex(0);
    if (k == 0) return Complex(a_[0] / Scalar(2));
    const Complex c(a_[ak] / Scalar(2), -b_[ak] / Scalar(2));
    return k > 0 ? c : std::conj(c);
  }

  int degree() const { return static_cast<int>(a_.size()) - 1; }

  /// Index of the last coefficient pair with magnitude above eps.
  int effective_degree(Scalar eps = Scalar(0)) const {
    for (int k = degree(); k > 0; --k)
      if (std::abs(a_[k]) > eps || std::abs(b_[k]) > eps) return k;
    return 0;
  }

  Scalar a(int k) const { return k <= degree() ? a_[k] : Scalar(0); }
  Scalar b(int k) const { return (k <= degree() && k > 0) ? b_[k] : Scalar(0); }
  Scalar& a(int k) { return a_[k]; }
  Scalar& b(int k) { return b_[k]; }
  const Vector& cosines() const { return a_; }
  const Vector& sines() const { return b_; }

  Scalar operator()(Scalar x) const {
    Scalar s = a_[0] / Scalar(2);
    for (int k = 1; k <= degree(); ++k) s += a_[k] * std::cos(Scalar(k) * x) + b_[k] * std::sin(Scalar(k) * x);
    return s;
  }

  Array eval(const Array& x) const {
    Array s = Array::Constant(x.size(), a_[0] / Scalar(2));
    for (int k = 1; k <= degree(); ++k) {
      if (a_[k] == Scalar(0) && b_[k] == Scalar(0)) continue;
      const Array kx = Scalar(k) * x;
      s += a_[k] * kx.cos() + b_[k] * kx.sin();
    }
    return s;
  }

  /// r-th derivative, exact in coefficients.
  TrigPolynomial derivative(int r = 1) const {
    TrigPolynomial d = *this;
    for (int step = 0; step < r; ++step) {
      d.a_[0] = Scalar(0);
      for (int k = 1; k <= d.degree(); ++k) {
        const Scalar a = d.a_[k], b = d.b_[k];
        d.a_[k] = Scalar(k) * b;
        d.b_[k] = -Scalar(k) * a;
      }
    }
    return d;
  }

  /// Drops (or zero-pads) coefficients beyond degree n.
  TrigPolynomial truncated(int n) const {
    TrigPolynomial t(n);
    const int m = std::min(n, degree());
    t.a_.head(m + 1) = a_.head(m + 1);
    t.b_.head(m + 1) = b_.head(m + 1);
    return t;
  }

  TrigPolynomial& operator+=(const TrigPolynomial& o) {
    if (o.degree() > degree()) *this = truncated(o.degree());
    a_.head(o.degree() + 1) += o.a_;
    b_.head(o.degree() + 1) += o.b_;
    return *this;
  }
  TrigPolynomial& operator*=(Scalar s) {
    a_ *= s;
    b_ *= s;
    return *this;
  }
  friend TrigPolynomial operator+(TrigPolynomial l, const TrigPolynomial& r) { return l += r; }
  friend TrigPolynomial operator-(TrigPolynomial l, const TrigPolynomial& r) { return l += r * Scalar(-1); }
  friend TrigPolynomial operator*(TrigPolynomial t, Scalar s) { return t *= s; }
  friend TrigPolynomial operator*(Scalar s, TrigPolynomial t) { return t *= s; }

  friend bool operator==(const TrigPolynomial& l, const TrigPolynomial& r) {
    return l.a_.size() == r.a_.size() && l.a_ == r.a_ && l.b_ == r.b_;
  }

  template <typename Other>
  TrigPolynomial<Other> cast() const {
    return TrigPolynomial<Other>(a_.template cast<Other>(), b_.template cast<Other>());
  }

 private:
  Vector a_;
  Vector b_;
};

}  // namespace vexlab
