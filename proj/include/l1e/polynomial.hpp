#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace l1e {

/// Real polynomial with coefficients stored in ascending degree order:
/// coeffs[i] multiplies s^i. Trailing zeros are trimmed on construction, so
/// the leading coefficient of a nonzero polynomial is always nonzero. The
/// default-constructed value is the zero polynomial (degree -1).
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    for (double x : c_)
      if (!std::isfinite(x)) throw std::invalid_argument("Polynomial: non-finite coefficient");
    trim();
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  double coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }

  double leading() const {
    if (c_.empty()) throw std::invalid_argument("Polynomial::leading: zero polynomial");
    return c_.back();
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
  }

  Polynomial monic() const {
    if (c_.empty()) throw std::invalid_argument("Polynomial::monic: zero polynomial");
    std::vector<double> out(c_);
    const double lead = out.back();
    for (double& x : out) x /= lead;
    out.back() = 1.0;
    return Polynomial(std::move(out));
  }

  double operator()(double s) const {
    double r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * s + c_[i];
    return r;
  }

  std::complex<double> operator()(std::complex<double> s) const {
    std::complex<double> r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * s + c_[i];
    return r;
  }

  /// Multiplication by the monomial s (shifts every coefficient up).
  Polynomial times_s() const {
    if (c_.empty()) return {};
    std::vector<double> out(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i + 1] = c_[i];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(double c, const Polynomial& p) {
    std::vector<double> out(p.c_);
    for (double& x : out) x *= c;
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

}  // namespace l1e
