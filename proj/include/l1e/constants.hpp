#pragma once

namespace l1e {

/// Central numeric tolerance record. Every hard-coded gate in the library
/// reads from this one place so runs stay reproducible across modules.
struct Tolerances {
  double lyapunov_residual = 1e-9;  ///< |P*Am + Am'*P + Q|_max, relative to |Q|_max
  double symmetry = 1e-12;          ///< symmetry slack when validating Q
  double root_residual = 1e-10;     ///< root oracle stop, relative to max |coeff|
  double charpoly_match = 1e-9;     ///< coefficient agreement, relative
  double equivalence_gap = 1e-6;    ///< default sup-gap bound for equivalence runs
  double convergence_tail = 1e-3;   ///< tail bound on |theta_err' x|
  double bisection_width = 1e-6;    ///< default critical-gain bracket width
};

inline constexpr Tolerances tol{};

inline constexpr double default_blowup_threshold = 1e6;

/// RK4 amplifies a real mode once |dt * lambda| exceeds this; used as a
/// step-size guard for large filter gains.
inline constexpr double rk4_real_axis_limit = 2.785;

}  // namespace l1e
