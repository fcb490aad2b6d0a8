#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace l1e {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

/// i-th Euclidean basis vector of length n.
inline Vec unit_vector(std::size_t n, std::size_t i) {
  Vec e(n, 0.0);
  e[i] = 1.0;
  return e;
}

}  // namespace l1e
