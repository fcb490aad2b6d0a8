#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "l1e/matrix.hpp"
#include "l1e/poly_linalg.hpp"
#include "l1e/vec.hpp"

namespace l1e {

/// Unknown plant coefficients a1..an of the companion-form system matrix.
/// The input vector is fixed to e_n. No stability requirement: unstable
/// plants are a first-class scenario.
struct PlantParams {
  explicit PlantParams(Vec coeffs) : a(std::move(coeffs)) {
    if (a.empty()) throw std::invalid_argument("PlantParams: empty coefficient vector");
    if (!all_finite(a)) throw std::invalid_argument("PlantParams: non-finite coefficient");
  }

  std::size_t n() const { return a.size(); }
  Matrix system_matrix() const { return Matrix::companion(a); }

  Vec a;
};

/// Designer-chosen reference dynamics: companion coefficients a_m (all
/// strictly positive and jointly Hurwitz), the Lyapunov weight Q and the
/// cached solution P of P*Am + Am'*P = -Q.
class ReferenceModel {
 public:
  explicit ReferenceModel(Vec a_m_coeffs, Matrix q_in = Matrix{})
      : a_m_(std::move(a_m_coeffs)) {
    if (a_m_.empty()) throw std::invalid_argument("ReferenceModel: empty a_m");
    if (!all_finite(a_m_)) throw std::invalid_argument("ReferenceModel: non-finite a_m entry");
    for (std::size_t i = 0; i < a_m_.size(); ++i)
      if (!(a_m_[i] > 0.0))
        throw std::invalid_argument("ReferenceModel: a_m[" + std::to_string(i + 1) + "] = " +
                                    std::to_string(a_m_[i]) +
                                    " violates the constraint a_m_i > 0");
    const auto verdict = routh_hurwitz(companion_char_poly(a_m_));
    if (!verdict.hurwitz())
      throw std::invalid_argument("ReferenceModel: companion(a_m) is not Hurwitz (" +
                                  std::string(to_string(verdict.tag)) + ": " + verdict.witness + ")");
    am_matrix_ = Matrix::companion(a_m_);
    q_ = q_in.size() == 0 ? Matrix::identity(a_m_.size()) : std::move(q_in);
    if (q_.size() != a_m_.size())
      throw std::invalid_argument("ReferenceModel: Q dimension does not match a_m");
    p_ = solve_lyapunov(am_matrix_, q_);
    pb_.resize(a_m_.size());
    for (std::size_t i = 0; i < a_m_.size(); ++i) pb_[i] = p_(i, a_m_.size() - 1);
  }

  std::size_t n() const { return a_m_.size(); }
  const Vec& a_m() const { return a_m_; }
  const Matrix& Am() const { return am_matrix_; }
  const Matrix& Q() const { return q_; }
  const Matrix& P() const { return p_; }
  /// P*b with b = e_n, i.e. the last column of P.
  const Vec& Pb() const { return pb_; }

 private:
  Vec a_m_;
  Matrix am_matrix_;
  Matrix q_;
  Matrix p_;
  Vec pb_;
};

/// True parameter vector theta_i = a_i - a_m_i, the exact gap between plant
/// and reference dynamics.
struct ThetaTrue {
  Vec theta;
};

inline ThetaTrue theta_from(const PlantParams& plant, const ReferenceModel& ref) {
  if (plant.n() != ref.n())
    throw std::invalid_argument("theta_from: plant and reference dimensions differ");
  Vec th(plant.n());
  for (std::size_t i = 0; i < th.size(); ++i) th[i] = plant.a[i] - ref.a_m()[i];
  return {std::move(th)};
}

/// Filter gain k, adaptation gain gamma, and the optional estimate
/// projection radius (ball clamp, applied after each integration step).
struct L1Config {
  double k = 1.0;
  double gamma = 1.0;
  std::optional<double> projection_radius;

  void validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("L1Config: k must be > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("L1Config: gamma must be > 0");
    if (projection_radius && !(*projection_radius > 0.0))
      throw std::invalid_argument("L1Config: projection_radius must be > 0");
  }
};

struct PIGains {
  Vec K_I;
  Vec K_P;
};

/// PI gains K_I = k * a_m, K_P = k * e_n. These depend only on designer
/// data; the signature takes no plant input on purpose.
inline PIGains pi_gains(double k, const ReferenceModel& ref) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("pi_gains: k must be > 0");
  PIGains g;
  g.K_I.resize(ref.n());
  for (std::size_t i = 0; i < ref.n(); ++i) g.K_I[i] = k * ref.a_m()[i];
  g.K_P.assign(ref.n(), 0.0);
  g.K_P.back() = k;
  return g;
}

/// Closed-loop state of the filtered adaptive architecture: plant state x,
/// filtered control u, predictor state x_hat, estimate theta_hat.
struct L1State {
  Vec x;
  double u = 0.0;
  Vec x_hat;
  Vec theta_hat;
};

/// State of the PI realization: plant state x, integrator v. The control is
/// the derived output u = v - K_P'x.
struct PIState {
  Vec x;
  double v = 0.0;
};

namespace detail {

/// d/dt of companion-form plant state into dx: shift plus -a'x + u on the
/// last row.
inline void plant_deriv(std::span<const double> a, std::span<const double> x, double u,
                        std::span<double> dx) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
  dx[n - 1] = -dot(a, x) + u;
}

}  // namespace detail

/// Flat layout [x(n) | u | x_hat(n) | theta_hat(n)].
inline void l1ac_deriv(std::span<const double> y, std::span<double> dy, const PlantParams& plant,
                       const ReferenceModel& ref, const L1Config& cfg) {
  const std::size_t n = plant.n();
  const auto x = y.subspan(0, n);
  const double u = y[n];
  const auto x_hat = y.subspan(n + 1, n);
  const auto theta_hat = y.subspan(2 * n + 1, n);

  const double est = dot(theta_hat, x);
  detail::plant_deriv(plant.a, x, u, dy.subspan(0, n));
  dy[n] = -cfg.k * (u - est);

  auto dxh = dy.subspan(n + 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) dxh[i] = x_hat[i + 1];
  dxh[n - 1] = -dot(ref.a_m(), x_hat) - (est - u);

  // prediction-error gradient law: gamma * x * (x_hat - x)' P b
  double sigma = 0.0;
  for (std::size_t i = 0; i < n; ++i) sigma += (x_hat[i] - x[i]) * ref.Pb()[i];
  auto dth = dy.subspan(2 * n + 1, n);
  for (std::size_t i = 0; i < n; ++i) dth[i] = cfg.gamma * sigma * x[i];
}

/// Flat layout [x(n) | v].
inline void pi_deriv(std::span<const double> y, std::span<double> dy, const PlantParams& plant,
                     const PIGains& gains) {
  const std::size_t n = plant.n();
  const auto x = y.subspan(0, n);
  const double u = y[n] - dot(gains.K_P, x);
  detail::plant_deriv(plant.a, x, u, dy.subspan(0, n));
  dy[n] = -dot(gains.K_I, x);
}

/// Same as pi_deriv with the integrator additionally driven by
/// k * (theta_err' x), supplied by a co-simulated estimator.
inline void perturbed_pi_deriv(std::span<const double> y, std::span<double> dy,
                               const PlantParams& plant, const PIGains& gains, double k,
                               double theta_err_dot_x) {
  pi_deriv(y, dy, plant, gains);
  dy[plant.n()] += k * theta_err_dot_x;
}

inline L1State l1ac_rhs(const L1State& s, const PlantParams& plant, const ReferenceModel& ref,
                        const L1Config& cfg) {
  const std::size_t n = plant.n();
  if (s.x.size() != n || s.x_hat.size() != n || s.theta_hat.size() != n || ref.n() != n)
    throw std::invalid_argument("l1ac_rhs: dimension mismatch");
  cfg.validate();
  Vec y(3 * n + 1);
  std::copy(s.x.begin(), s.x.end(), y.begin());
  y[n] = s.u;
  std::copy(s.x_hat.begin(), s.x_hat.end(), y.begin() + static_cast<std::ptrdiff_t>(n + 1));
  std::copy(s.theta_hat.begin(), s.theta_hat.end(),
            y.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
  Vec dy(y.size());
  l1ac_deriv(y, dy, plant, ref, cfg);
  L1State d;
  d.x.assign(dy.begin(), dy.begin() + static_cast<std::ptrdiff_t>(n));
  d.u = dy[n];
  d.x_hat.assign(dy.begin() + static_cast<std::ptrdiff_t>(n + 1),
                 dy.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
  d.theta_hat.assign(dy.begin() + static_cast<std::ptrdiff_t>(2 * n + 1), dy.end());
  return d;
}

inline PIState pi_rhs(const PIState& s, const PlantParams& plant, const PIGains& gains) {
  const std::size_t n = plant.n();
  if (s.x.size() != n || gains.K_I.size() != n || gains.K_P.size() != n)
    throw std::invalid_argument("pi_rhs: dimension mismatch");
  Vec y(n + 1);
  std::copy(s.x.begin(), s.x.end(), y.begin());
  y[n] = s.v;
  Vec dy(y.size());
  pi_deriv(y, dy, plant, gains);
  PIState d;
  d.x.assign(dy.begin(), dy.begin() + static_cast<std::ptrdiff_t>(n));
  d.v = dy[n];
  return d;
}

inline PIState perturbed_pi_rhs(const PIState& s, const PlantParams& plant, const PIGains& gains,
                                double k, double theta_err_dot_x) {
  PIState d = pi_rhs(s, plant, gains);
  d.v += k * theta_err_dot_x;
  return d;
}

/// Radial clamp of the estimate onto the closed ball of the given radius.
inline Vec project_theta(Vec theta_hat, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_theta: radius must be > 0");
  const double nrm = norm2(theta_hat);
  if (nrm > radius) {
    const double scale = radius / nrm;
    for (double& x : theta_hat) x *= scale;
  }
  return theta_hat;
}

/// User-specified start point. v0, when absent, is resolved to
/// u0 + k * x0[n] so the PI realization starts on the exact change of
/// variables.
struct InitialConditions {
  Vec x0;
  double u0 = 0.0;
  Vec xhat0;
  Vec thetahat0;
  std::optional<double> v0;

  void validate(std::size_t n) const {
    if (x0.size() != n || xhat0.size() != n || thetahat0.size() != n)
      throw std::invalid_argument("InitialConditions: dimension mismatch");
    if (!all_finite(x0) || !std::isfinite(u0) || !all_finite(xhat0) || !all_finite(thetahat0) ||
        (v0 && !std::isfinite(*v0)))
      throw std::invalid_argument("InitialConditions: non-finite entry");
  }
};

/// Defaults: x(0) = e1, u(0) = 0, x_hat(0) = 0, theta_hat(0) = 0.
inline InitialConditions default_init(std::size_t n) {
  InitialConditions ic;
  ic.x0 = unit_vector(n, 0);
  ic.xhat0.assign(n, 0.0);
  ic.thetahat0.assign(n, 0.0);
  return ic;
}

inline double resolve_v0(const InitialConditions& ic, double k) {
  return ic.v0 ? *ic.v0 : ic.u0 + k * ic.x0.back();
}

}  // namespace l1e
