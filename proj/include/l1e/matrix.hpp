#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "l1e/vec.hpp"

namespace l1e {

/// Dense square matrix, row-major. Sized for control problems (n <= ~10, or
/// n^2 for the vectorized Lyapunov system); everything is plain O(n^3).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), e_(n * n, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Controllable-canonical companion matrix: ones on the superdiagonal,
  /// last row (-a1, ..., -an).
  static Matrix companion(std::span<const double> a) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("Matrix::companion: empty coefficient vector");
    Matrix m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = -a[j];
    return m;
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : e_) m = std::max(m, std::abs(x));
    return m;
  }

  bool symmetric_within(double slack) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > slack) return false;
    return true;
  }

  bool finite() const { return all_finite(e_); }

  Vec operator*(std::span<const double> v) const {
    Vec r(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }

  friend Matrix operator*(double c, Matrix a) {
    for (double& x : a.e_) x *= c;
    return a;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> e_;
};

inline double trace_of_product(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * b(j, i);
  return s;
}

/// Gaussian elimination with partial pivoting. Throws on a numerically
/// singular pivot.
inline Vec solve_linear(Matrix a, Vec b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_linear: dimension mismatch");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double cand = std::abs(a(r, col));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best))
      throw std::runtime_error("solve_linear: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    const double d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / d;
      if (f == 0.0) continue;
      a(r, col) = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }

  Vec x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

/// Cholesky factor of a symmetric positive definite matrix; nullopt when the
/// matrix is not positive definite.
inline std::optional<Matrix> cholesky_lower(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

}  // namespace l1e
