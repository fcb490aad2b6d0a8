#pragma once

// Shared generators and slow reference computations for the test suites.
// Everything here is deliberately independent of the library's fast paths:
// determinants go through cofactor expansion, polynomials are built by
// explicit factor multiplication.

#include <complex>
#include <random>
#include <vector>

#include "l1e/matrix.hpp"
#include "l1e/polynomial.hpp"

namespace testutil {

inline std::mt19937& rng(unsigned seed = 0) {
  static std::mt19937 gen(12345u);
  if (seed != 0) gen.seed(seed);
  return gen;
}

inline double uniform(std::mt19937& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

/// Monic polynomial with the given real roots and complex-conjugate pairs
/// (each pair passed once as re +/- i*im).
inline l1e::Polynomial poly_from_roots(const std::vector<double>& real_roots,
                                       const std::vector<std::pair<double, double>>& pairs = {}) {
  l1e::Polynomial p(std::vector<double>{1.0});
  for (double r : real_roots) p = p * l1e::Polynomial({-r, 1.0});
  for (auto [re, im] : pairs)
    p = p * l1e::Polynomial({re * re + im * im, -2.0 * re, 1.0});
  return p;
}

/// Coefficients (a_1..a_n) whose companion matrix is Hurwitz with a decent
/// stability margin, built from randomly placed left-half-plane roots.
inline std::vector<double> random_hurwitz_coeffs(std::size_t n, std::mt19937& gen) {
  std::vector<double> real_roots;
  std::vector<std::pair<double, double>> pairs;
  std::size_t left = n;
  while (left > 0) {
    if (left >= 2 && uniform(gen, 0.0, 1.0) < 0.5) {
      pairs.push_back({uniform(gen, -3.0, -0.2), uniform(gen, 0.2, 2.0)});
      left -= 2;
    } else {
      real_roots.push_back(uniform(gen, -3.0, -0.2));
      left -= 1;
    }
  }
  const l1e::Polynomial p = poly_from_roots(real_roots, pairs);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = p.coeff(i);
  return a;
}

/// Random symmetric positive definite matrix R'R + I.
inline l1e::Matrix random_spd(std::size_t n, std::mt19937& gen) {
  l1e::Matrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = uniform(gen, -1.0, 1.0);
  l1e::Matrix out = r.transposed() * r;
  for (std::size_t i = 0; i < n; ++i) out(i, i) += 1.0;
  return out;
}

/// Cofactor-expansion determinant; fine for the small n used in tests.
inline double det_cofactor(const l1e::Matrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m(0, 0);
  double acc = 0.0;
  double sign = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    l1e::Matrix minor(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == col) continue;
        minor(i - 1, jj++) = m(i, j);
      }
    }
    acc += sign * m(0, col) * det_cofactor(minor);
    sign = -sign;
  }
  return acc;
}

/// det(sI - M) evaluated at a point, through the cofactor determinant.
inline double char_poly_at(const l1e::Matrix& m, double s) {
  l1e::Matrix shifted(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) shifted(i, j) = (i == j ? s : 0.0) - m(i, j);
  return det_cofactor(shifted);
}

}  // namespace testutil
