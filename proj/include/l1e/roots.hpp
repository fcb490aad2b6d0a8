#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "l1e/constants.hpp"
#include "l1e/errors.hpp"
#include "l1e/polynomial.hpp"

namespace l1e {

/// Attainable |p(x)| when x is a rounding-limited root of p: the Horner
/// running-error bound ~4(n+1)*eps*sum_i |c_i| |x|^i. Residuals below this
/// carry no information in double precision.
inline double eval_error_bound(const Polynomial& p, std::complex<double> x) {
  const double ax = std::abs(x);
  double acc = 0.0;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * ax + std::abs(p.coeff(i));
  return 4.0 * static_cast<double>(p.degree() + 1) * std::numeric_limits<double>::epsilon() * acc;
}

/// All complex roots of a real polynomial by Durand-Kerner iteration.
/// Intended as a slow, independent oracle for the stability tests; the
/// stopping rule is a residual bound |p(r)| <= tol * max|coeff| on the monic
/// polynomial, relaxed per root to the Horner error floor when rounding
/// makes the strict bound unattainable (large root magnitudes). Roots come
/// back sorted by real part, then imaginary part. Throws OracleFailure if
/// the iteration does not converge.
inline std::vector<std::complex<double>> poly_roots_oracle(const Polynomial& p_in) {
  if (p_in.is_zero() || p_in.degree() < 1)
    throw std::invalid_argument("poly_roots_oracle: degree must be >= 1");

  const Polynomial p = p_in.monic();
  const std::size_t n = static_cast<std::size_t>(p.degree());
  const double res_tol = tol.root_residual * std::max(1.0, p.max_abs_coeff());

  // Cauchy bound: every root lies inside |s| <= 1 + max |c_i|. A matching
  // lower bound comes from the reversed polynomial; grading the start points
  // geometrically between the two copes with widely spread root magnitudes.
  double cmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) cmax = std::max(cmax, std::abs(p.coeff(i)));
  const double r_max = 1.0 + cmax;
  double r_min = 1e-3;
  if (p.coeff(0) != 0.0) {
    double tail = 0.0;
    for (std::size_t i = 1; i <= n; ++i) tail = std::max(tail, std::abs(p.coeff(i)));
    r_min = std::max(1e-6, std::abs(p.coeff(0)) / (std::abs(p.coeff(0)) + tail));
  }

  constexpr int max_sweeps = 1500;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<std::complex<double>> r(n);
    const double phase0 = 0.4 + 0.9 * attempt;
    for (std::size_t j = 0; j < n; ++j) {
      const double frac = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      const double rad = r_min * std::pow(r_max / r_min, frac);
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) +
                         phase0 + 0.11 * static_cast<double>(j);
      r[j] = std::polar(rad, ang);
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> denom = 1.0;
        for (std::size_t l = 0; l < n; ++l)
          if (l != j) denom *= r[j] - r[l];
        if (denom == std::complex<double>(0.0, 0.0)) {
          r[j] += std::complex<double>(1e-8, 1e-8);
          continue;
        }
        r[j] -= p(r[j]) / denom;
      }
      bool converged = true;
      for (std::size_t j = 0; j < n && converged; ++j)
        converged = std::abs(p(r[j])) <= std::max(res_tol, eval_error_bound(p, r[j]));
      if (converged) {
        // deterministic order; ties in the real part (conjugate pairs) are
        // broken by the imaginary part
        std::sort(r.begin(), r.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
          const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
          if (std::abs(a.real() - b.real()) > 1e-10 * scale) return a.real() < b.real();
          return a.imag() < b.imag();
        });
        return r;
      }
    }
  }
  throw OracleFailure("poly_roots_oracle: Durand-Kerner did not converge within the sweep cap");
}

/// Largest real part over all roots.
inline double max_root_real_part(const Polynomial& p) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : poly_roots_oracle(p)) m = std::max(m, r.real());
  return m;
}

}  // namespace l1e
