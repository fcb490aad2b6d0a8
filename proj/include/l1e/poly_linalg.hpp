#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "l1e/constants.hpp"
#include "l1e/errors.hpp"
#include "l1e/matrix.hpp"
#include "l1e/polynomial.hpp"
#include "l1e/vec.hpp"

namespace l1e {

enum class StabilityTag { Hurwitz, Marginal, Unstable };

struct StabilityVerdict {
  StabilityTag tag = StabilityTag::Hurwitz;
  std::string witness;  // where the zero / sign change showed up, when it did

  bool hurwitz() const { return tag == StabilityTag::Hurwitz; }
};

inline const char* to_string(StabilityTag t) {
  switch (t) {
    case StabilityTag::Hurwitz: return "Hurwitz";
    case StabilityTag::Marginal: return "Marginal";
    default: return "Unstable";
  }
}

/// Characteristic polynomial of the companion matrix with last row
/// (-a1, ..., -an): s^n + an s^(n-1) + ... + a2 s + a1. In ascending storage
/// this is just the coefficient vector with a 1 appended.
inline Polynomial companion_char_poly(std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("companion_char_poly: empty coefficient vector");
  if (!all_finite(a)) throw std::invalid_argument("companion_char_poly: non-finite coefficient");
  std::vector<double> c(a.begin(), a.end());
  c.push_back(1.0);
  return Polynomial(std::move(c));
}

/// Characteristic polynomial det(sI - M) of a general square matrix via the
/// Faddeev-LeVerrier recursion. Exact up to rounding; no eigensolve involved.
inline Polynomial char_poly(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("char_poly: empty matrix");
  if (!m.finite()) throw std::invalid_argument("char_poly: non-finite entries");
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    c[n - k] = -trace_of_product(m, mk) / static_cast<double>(k);
  }
  return Polynomial(std::move(c));
}

/// Routh-Hurwitz test on a real polynomial. The polynomial is normalized to
/// monic form first; verdicts:
///   - Hurwitz:  every first-column entry strictly positive;
///   - Marginal: a first-column entry is exactly zero before any sign change
///     (the array is not continued past it);
///   - Unstable: a first-column sign change.
inline StabilityVerdict routh_hurwitz(const Polynomial& p_in) {
  if (p_in.is_zero()) throw std::invalid_argument("routh_hurwitz: zero polynomial");
  if (p_in.degree() < 1) throw std::invalid_argument("routh_hurwitz: degree must be >= 1");
  const Polynomial p = p_in.monic();
  const int m = p.degree();

  std::vector<double> prev, cur;
  for (int i = m; i >= 0; i -= 2) prev.push_back(p.coeff(static_cast<std::size_t>(i)));
  for (int i = m - 1; i >= 0; i -= 2) cur.push_back(p.coeff(static_cast<std::size_t>(i)));

  for (int row = 1; row <= m; ++row) {
    const double head = cur.empty() ? 0.0 : cur[0];
    if (head == 0.0) {
      return {StabilityTag::Marginal,
              "zero first-column entry in row " + std::to_string(row) + " (s^" +
                  std::to_string(m - row) + ")"};
    }
    if (head < 0.0) {
      return {StabilityTag::Unstable,
              "first-column sign change at row " + std::to_string(row) + " (s^" +
                  std::to_string(m - row) + ")"};
    }
    if (row == m) break;
    std::vector<double> next(prev.size() - 1, 0.0);
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double pj = j + 1 < prev.size() ? prev[j + 1] : 0.0;
      const double cj = j + 1 < cur.size() ? cur[j + 1] : 0.0;
      next[j] = (head * pj - prev[0] * cj) / head;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {StabilityTag::Hurwitz, ""};
}

/// Solves P*Am + Am'*P = -Q for symmetric positive definite P by vectorizing
/// into an n^2 x n^2 dense system (Kronecker sum) and eliminating with
/// partial pivoting, plus one step of iterative refinement. Preconditions:
/// Am Hurwitz, Q symmetric positive definite.
inline Matrix solve_lyapunov(const Matrix& a_m, const Matrix& q) {
  const std::size_t n = a_m.size();
  if (n == 0 || q.size() != n)
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  if (!a_m.finite() || !q.finite())
    throw std::invalid_argument("solve_lyapunov: non-finite entries");
  const double q_scale = std::max(1.0, q.max_abs());
  if (!q.symmetric_within(tol.symmetry * q_scale))
    throw std::invalid_argument("solve_lyapunov: Q is not symmetric");
  if (!cholesky_lower(q))
    throw std::invalid_argument("solve_lyapunov: Q is not positive definite");
  if (!routh_hurwitz(char_poly(a_m)).hurwitz())
    throw NoSolutionError("solve_lyapunov: A_m is not Hurwitz, no positive definite solution");

  const std::size_t nn = n * n;
  Matrix sys(nn);
  Vec rhs(nn, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = i * n + j;
      rhs[r] = -q(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        sys(r, i * n + k) += a_m(k, j);  // (P Am)_ij picks P_ik
        sys(r, k * n + j) += a_m(k, i);  // (Am' P)_ij picks P_kj
      }
    }
  }

  Vec pv = solve_linear(sys, rhs);
  {
    Vec resid(nn, 0.0);
    for (std::size_t r = 0; r < nn; ++r) {
      double s = rhs[r];
      for (std::size_t c2 = 0; c2 < nn; ++c2) s -= sys(r, c2) * pv[c2];
      resid[r] = s;
    }
    const Vec corr = solve_linear(sys, resid);
    for (std::size_t r = 0; r < nn; ++r) pv[r] += corr[r];
  }

  Matrix p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = pv[i * n + j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = s;
      p(j, i) = s;
    }

  Matrix resid = p * a_m + a_m.transposed() * p + q;
  if (resid.max_abs() > tol.lyapunov_residual * q.max_abs())
    throw std::runtime_error("solve_lyapunov: residual exceeds tolerance (ill-conditioned system)");
  if (!cholesky_lower(p))
    throw std::runtime_error("solve_lyapunov: computed P is not positive definite");
  return p;
}

}  // namespace l1e
