#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "l1e/constants.hpp"
#include "l1e/errors.hpp"
#include "l1e/poly_linalg.hpp"
#include "l1e/roots.hpp"
#include "l1e/simulator.hpp"
#include "l1e/system_models.hpp"

namespace l1e {

// ---------------------------------------------------------------------------
// closed-loop block matrix and its characteristic-polynomial identity

/// (n+1) x (n+1) block matrix [[A, b], [k theta', -k]] governing the plant
/// and filter states of the filtered loop.
inline Matrix build_a0(const PlantParams& plant, const ThetaTrue& theta, double k) {
  const std::size_t n = plant.n();
  if (theta.theta.size() != n) throw std::invalid_argument("build_a0: dimension mismatch");
  Matrix a0(n + 1);
  const Matrix a = plant.system_matrix();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a0(i, j) = a(i, j);
  a0(n - 1, n) = 1.0;  // b = e_n
  for (std::size_t j = 0; j < n; ++j) a0(n, j) = k * theta.theta[j];
  a0(n, n) = -k;
  return a0;
}

/// The closed-loop polynomial s * det(sI - A) + k * det(sI - Am), whose
/// Hurwitz-ness decides PI stability.
inline Polynomial pi_closed_loop_poly(const PlantParams& plant, const ReferenceModel& ref,
                                      double k) {
  return companion_char_poly(plant.a).times_s() + k * companion_char_poly(ref.a_m());
}

/// Both routes to det(sI - A0): the Faddeev-LeVerrier characteristic
/// polynomial of the explicit block matrix (lhs) and the combination
/// s*p_A + k*p_Am (rhs). Returned separately so callers can compare.
inline std::pair<Polynomial, Polynomial> charpoly_a0(const PlantParams& plant,
                                                     const ReferenceModel& ref,
                                                     const ThetaTrue& theta, double k) {
  if (plant.n() != ref.n() || theta.theta.size() != plant.n())
    throw std::invalid_argument("charpoly_a0: dimension mismatch");
  return {char_poly(build_a0(plant, theta, k)), pi_closed_loop_poly(plant, ref, k)};
}

/// Coefficient-wise agreement relative to the larger coefficient scale.
inline bool poly_match(const Polynomial& a, const Polynomial& b, double rel_tol) {
  if (a.degree() != b.degree()) return false;
  const double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  for (int i = 0; i <= a.degree(); ++i)
    if (std::abs(a.coeff(static_cast<std::size_t>(i)) - b.coeff(static_cast<std::size_t>(i))) >
        rel_tol * scale)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// controller equivalence

enum class EstimatorVariant { True, Frozen, Scripted };

inline const char* to_string(EstimatorVariant v) {
  switch (v) {
    case EstimatorVariant::True: return "true";
    case EstimatorVariant::Frozen: return "frozen";
    default: return "scripted";
  }
}

/// Per-component sine schedule for the scripted estimate,
/// theta_hat_i(t) = thetahat0_i + amplitude_i * sin(omega_i t + phase_i).
struct ScriptedWaves {
  Vec amplitude;
  Vec omega;
  Vec phase;

  static ScriptedWaves defaults(std::size_t n) {
    ScriptedWaves w;
    w.amplitude.resize(n);
    w.omega.resize(n);
    w.phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double fi = static_cast<double>(i);
      w.amplitude[i] = 0.5 + 0.3 * fi;
      w.omega[i] = 1.0 + 0.7 * fi;
      w.phase[i] = 0.2 + 0.4 * fi;
    }
    return w;
  }
};

struct EquivalenceReport {
  EstimatorVariant variant = EstimatorVariant::True;
  double max_u_gap = 0.0;
  double max_x_gap = 0.0;
  double horizon = 0.0;  // time actually covered
  double dt = 0.0;
  double tolerance = tol.equivalence_gap;
  bool pass = false;
  bool truncated = false;  // diverged before t_end; gaps cover the finite prefix
};

/// Co-simulates the filtered control loop and its PI realization in one
/// stacked system. The estimator (true gradient law, frozen estimate, or a
/// scripted sine schedule) lives on the filtered side; the PI integrator is
/// driven by the same k * theta_err' x signal and closes its own plant copy.
/// Sup gaps between the two control signals and the two plant states are
/// reported over the sampled grid.
inline EquivalenceReport equivalence_check(const PlantParams& plant, const ReferenceModel& ref,
                                           const L1Config& cfg, const InitialConditions& init,
                                           const IntegratorConfig& int_cfg,
                                           EstimatorVariant variant,
                                           double tolerance = tol.equivalence_gap,
                                           const ScriptedWaves& waves_in = {}) {
  const std::size_t n = plant.n();
  if (ref.n() != n) throw std::invalid_argument("equivalence_check: dimension mismatch");
  cfg.validate();
  init.validate(n);
  int_cfg.validate();

  const PIGains gains = pi_gains(cfg.k, ref);
  const Vec theta = theta_from(plant, ref).theta;
  const bool with_estimator_state = variant == EstimatorVariant::True;
  ScriptedWaves waves = waves_in;
  if (variant == EstimatorVariant::Scripted && waves.amplitude.size() != n)
    waves = ScriptedWaves::defaults(n);

  // layout: [x_a(n) | u | (xhat(n) | thhat(n))? | x_b(n) | v]
  const std::size_t xb_off = with_estimator_state ? 3 * n + 1 : n + 1;
  const std::size_t dim = xb_off + n + 1;

  Vec y0(dim, 0.0);
  std::copy(init.x0.begin(), init.x0.end(), y0.begin());
  y0[n] = init.u0;
  if (with_estimator_state) {
    std::copy(init.xhat0.begin(), init.xhat0.end(), y0.begin() + static_cast<std::ptrdiff_t>(n + 1));
    std::copy(init.thetahat0.begin(), init.thetahat0.end(),
              y0.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
  }
  std::copy(init.x0.begin(), init.x0.end(), y0.begin() + static_cast<std::ptrdiff_t>(xb_off));
  y0[xb_off + n] = resolve_v0(init, cfg.k);

  Vec theta_hat_scratch(n);
  auto estimate_at = [&](double t, std::span<const double> y) -> std::span<const double> {
    switch (variant) {
      case EstimatorVariant::True:
        return y.subspan(2 * n + 1, n);
      case EstimatorVariant::Frozen:
        return init.thetahat0;
      default:
        for (std::size_t i = 0; i < n; ++i)
          theta_hat_scratch[i] =
              init.thetahat0[i] + waves.amplitude[i] * std::sin(waves.omega[i] * t + waves.phase[i]);
        return theta_hat_scratch;
    }
  };

  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const auto x_a = y.subspan(0, n);
    const double u = y[n];
    const auto theta_hat = estimate_at(t, y);

    detail::plant_deriv(plant.a, x_a, u, dy.subspan(0, n));
    const double est = dot(theta_hat, x_a);
    dy[n] = -cfg.k * (u - est);

    if (with_estimator_state) {
      const auto x_hat = y.subspan(n + 1, n);
      auto dxh = dy.subspan(n + 1, n);
      for (std::size_t i = 0; i + 1 < n; ++i) dxh[i] = x_hat[i + 1];
      dxh[n - 1] = -dot(ref.a_m(), x_hat) - (est - u);
      double sigma = 0.0;
      for (std::size_t i = 0; i < n; ++i) sigma += (x_hat[i] - x_a[i]) * ref.Pb()[i];
      auto dth = dy.subspan(2 * n + 1, n);
      for (std::size_t i = 0; i < n; ++i) dth[i] = cfg.gamma * sigma * x_a[i];
    }

    double perturbation = 0.0;
    for (std::size_t i = 0; i < n; ++i) perturbation += (theta_hat[i] - theta[i]) * x_a[i];
    perturbed_pi_deriv(y.subspan(xb_off, n + 1), dy.subspan(xb_off, n + 1), plant, gains, cfg.k,
                       perturbation);
  };

  EquivalenceReport rep;
  rep.variant = variant;
  rep.dt = int_cfg.dt;
  rep.tolerance = tolerance;

  auto observe = [&](double t, std::span<const double> y) {
    const auto x_a = y.subspan(0, n);
    const auto x_b = y.subspan(xb_off, n);
    const double u_pi = y[xb_off + n] - dot(gains.K_P, x_b);
    rep.max_u_gap = std::max(rep.max_u_gap, std::abs(y[n] - u_pi));
    for (std::size_t i = 0; i < n; ++i)
      rep.max_x_gap = std::max(rep.max_x_gap, std::abs(x_a[i] - x_b[i]));
    rep.horizon = t;
  };

  IntegrationHalt halt;
  if (cfg.projection_radius && with_estimator_state) {
    const double radius = *cfg.projection_radius;
    auto clamp = [&, radius](double, std::span<double> y) {
      auto th = y.subspan(2 * n + 1, n);
      const double nrm = norm2(th);
      if (nrm > radius) {
        const double s = radius / nrm;
        for (double& v : th) v *= s;
      }
    };
    halt = integrate_core(rhs, y0, int_cfg, observe, clamp);
  } else {
    halt = integrate_core(rhs, y0, int_cfg, observe);
  }

  rep.truncated = halt.verdict == Verdict::Diverged;
  rep.pass = rep.max_u_gap <= tolerance && rep.max_x_gap <= tolerance;
  return rep;
}

/// Convenience: one report per estimator variant.
inline std::vector<EquivalenceReport> equivalence_check_all(
    const PlantParams& plant, const ReferenceModel& ref, const L1Config& cfg,
    const InitialConditions& init, const IntegratorConfig& int_cfg,
    double tolerance = tol.equivalence_gap) {
  std::vector<EquivalenceReport> out;
  for (auto v : {EstimatorVariant::True, EstimatorVariant::Frozen, EstimatorVariant::Scripted})
    out.push_back(equivalence_check(plant, ref, cfg, init, int_cfg, v, tolerance));
  return out;
}

// ---------------------------------------------------------------------------
// perturbation decay

struct ConvergenceReport {
  double tail_sup = 0.0;  ///< sup of |theta_err' x| over the last 10% of the horizon
  bool bounded = false;
  bool v_nonincreasing = false;
  double max_v_increase = 0.0;
  double v_slack = 0.0;
};

/// Checks the decay of the perturbation term on a bounded run: tail sup of
/// |theta_err' x| plus monotonicity of V up to the slack 5*dt*max|Vdot|.
/// Diverged runs are rejected, their boundedness hypothesis fails.
inline ConvergenceReport convergence_check(const RunOutcome& run, const ReferenceModel& ref) {
  if (!run.completed())
    throw NotApplicableError("convergence_check: run diverged, boundedness hypothesis fails");
  const Trace& tr = run.trace;
  if (tr.samples() < 2) throw std::invalid_argument("convergence_check: trace too short");

  ConvergenceReport rep;
  rep.bounded = true;

  const double t_tail = 0.9 * tr.t.back();
  for (std::size_t s = 0; s < tr.samples(); ++s)
    if (tr.t[s] >= t_tail) rep.tail_sup = std::max(rep.tail_sup, std::abs(tr.ttx[s]));

  double max_vdot = 0.0;
  for (std::size_t s = 0; s < tr.samples(); ++s) {
    double quad = 0.0;
    for (std::size_t i = 0; i < tr.n; ++i) {
      const double xei = tr.xhat[i][s] - tr.x[i][s];
      for (std::size_t j = 0; j < tr.n; ++j)
        quad += xei * ref.Q()(i, j) * (tr.xhat[j][s] - tr.x[j][s]);
    }
    max_vdot = std::max(max_vdot, 0.5 * quad);
  }
  rep.v_slack = 5.0 * tr.dt * max_vdot;
  for (std::size_t s = 1; s < tr.samples(); ++s)
    rep.max_v_increase = std::max(rep.max_v_increase, tr.v_lyap[s] - tr.v_lyap[s - 1]);
  rep.v_nonincreasing = rep.max_v_increase <= rep.v_slack;
  return rep;
}

// ---------------------------------------------------------------------------
// critical gain

/// Smallest k above which s*p_A + k*p_Am is Hurwitz, located by bisection on
/// the Routh verdict. Requires a valid bracket: not Hurwitz at k_lo, Hurwitz
/// at k_hi.
inline double critical_gain(const PlantParams& plant, const ReferenceModel& ref, double k_lo,
                            double k_hi, double tol_width = tol.bisection_width) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) throw std::invalid_argument("critical_gain: need 0 < k_lo < k_hi");
  if (!(tol_width > 0.0)) throw std::invalid_argument("critical_gain: tol must be > 0");

  const auto verdict_at = [&](double k) { return routh_hurwitz(pi_closed_loop_poly(plant, ref, k)); };
  const auto lo_v = verdict_at(k_lo);
  const auto hi_v = verdict_at(k_hi);
  if (lo_v.hurwitz() || !hi_v.hurwitz())
    throw BracketError(std::string("critical_gain: endpoints do not bracket a transition (k_lo is ") +
                       to_string(lo_v.tag) + ", k_hi is " + to_string(hi_v.tag) + ")");

  double lo = k_lo, hi = k_hi;
  while (hi - lo > tol_width) {
    const double mid = 0.5 * (lo + hi);
    if (verdict_at(mid).hurwitz())
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// induced-norm condition

/// L-infinity induced norm of the operator (sI - Am)^-1 b theta' s/(s+k):
/// max over output rows of the summed L1 norms of the impulse responses,
/// computed by simulating the (n+1)-state realization on a fine grid with
/// trapezoid quadrature plus an exponential tail estimate from the slowest
/// mode. The condition holds when the returned value is < 1.
inline double linf_condition_norm(const ReferenceModel& ref, const ThetaTrue& theta, double k,
                                  double quad_dt, double horizon) {
  const std::size_t n = ref.n();
  if (theta.theta.size() != n) throw std::invalid_argument("linf_condition_norm: dimension mismatch");
  if (!(k > 0.0)) throw std::invalid_argument("linf_condition_norm: k must be > 0");
  if (!routh_hurwitz(companion_char_poly(ref.a_m())).hurwitz())
    throw std::invalid_argument("linf_condition_norm: A_m must be Hurwitz, the integral diverges");

  // impulse-aligned base state: phi = [I 0] exp(At) (b; 1) with
  // A = [[Am, -k b], [0, -k]]
  Vec y0(n + 1, 0.0);
  y0[n - 1] = 1.0;
  y0[n] = 1.0;
  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto q = y.subspan(0, n);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = q[i + 1];
    dy[n - 1] = -dot(ref.a_m(), q) - k * y[n];
    dy[n] = -k * y[n];
  };

  IntegratorConfig cfg;
  cfg.dt = quad_dt;
  cfg.t_end = horizon;
  cfg.sample_every = 1;
  cfg.blowup_threshold = std::numeric_limits<double>::max();
  cfg.validate();

  Vec abs_sum(n, 0.0);
  Vec first(n, 0.0), last(n, 0.0);
  bool have_first = false;
  auto observe = [&](double, std::span<const double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(y[i]);
      abs_sum[i] += a;
      last[i] = a;
      if (!have_first) first[i] = a;
    }
    have_first = true;
  };
  integrate_core(rhs, y0, cfg, observe);

  Vec phi_l1(n);
  for (std::size_t i = 0; i < n; ++i)
    phi_l1[i] = quad_dt * (abs_sum[i] - 0.5 * (first[i] + last[i]));

  const double slowest = -max_root_real_part(companion_char_poly(ref.a_m()));
  const double alpha = std::min(slowest, k);

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      row += std::abs(theta.theta[j]) * (phi_l1[i] + last[i] / alpha);
    norm = std::max(norm, row);
  }
  return norm;
}

// ---------------------------------------------------------------------------
// stability sweep

struct SweepResult {
  Vec k_grid;
  Vec gamma_grid;
  std::vector<StabilityTag> pi_verdicts;  ///< per k (gamma-independent)
  std::vector<Verdict> l1_verdicts;       ///< k-major: [ik * gamma_grid.size() + ig]

  Verdict l1_at(std::size_t ik, std::size_t ig) const {
    return l1_verdicts[ik * gamma_grid.size() + ig];
  }
};

inline unsigned sweep_thread_cap() {
  if (const char* env = std::getenv("L1EQUIV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs the filtered loop on every (k, gamma) grid point and records the
/// Completed/Diverged verdict, next to the analytic PI verdict per k. Grid
/// points are independent; they are distributed over worker threads capped
/// by L1EQUIV_THREADS.
inline SweepResult stability_sweep(const PlantParams& plant, const ReferenceModel& ref,
                                   Vec k_grid, Vec gamma_grid, const InitialConditions& init,
                                   const IntegratorConfig& int_cfg) {
  if (k_grid.empty() || gamma_grid.empty())
    throw std::invalid_argument("stability_sweep: empty grid");
  for (double k : k_grid)
    if (!(k > 0.0)) throw std::invalid_argument("stability_sweep: k grid entries must be > 0");
  for (double g : gamma_grid)
    if (!(g > 0.0)) throw std::invalid_argument("stability_sweep: gamma grid entries must be > 0");

  SweepResult res;
  res.k_grid = std::move(k_grid);
  res.gamma_grid = std::move(gamma_grid);
  for (double k : res.k_grid)
    res.pi_verdicts.push_back(routh_hurwitz(pi_closed_loop_poly(plant, ref, k)).tag);

  const std::size_t total = res.k_grid.size() * res.gamma_grid.size();
  res.l1_verdicts.assign(total, Verdict::Completed);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(sweep_thread_cap(), static_cast<unsigned>(total)));
  auto work = [&](unsigned worker_id) {
    for (std::size_t idx = worker_id; idx < total; idx += workers) {
      const std::size_t ik = idx / res.gamma_grid.size();
      const std::size_t ig = idx % res.gamma_grid.size();
      const L1Config cfg{res.k_grid[ik], res.gamma_grid[ig], {}};
      res.l1_verdicts[idx] =
          run_closed_loop(Architecture::L1AC, plant, ref, cfg, init, int_cfg).verdict;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return res;
}

// ---------------------------------------------------------------------------
// high-gain limit

struct HighGainEntry {
  double k = 0.0;
  double tail_sup = 0.0;  ///< sup of |u - theta_hat' x| over the last 10%
  bool diverged = false;
};

/// Tail gap between the filtered control and its certainty-equivalence
/// target for increasing filter gains. Diverged runs are flagged and carry
/// no tail value.
inline std::vector<HighGainEntry> high_gain_limit_check(const PlantParams& plant,
                                                        const ReferenceModel& ref, double gamma,
                                                        const Vec& k_list,
                                                        const InitialConditions& init,
                                                        const IntegratorConfig& int_cfg) {
  std::vector<HighGainEntry> out;
  for (double k : k_list) {
    HighGainEntry entry;
    entry.k = k;
    const RunOutcome run =
        run_closed_loop(Architecture::L1AC, plant, ref, {k, gamma, {}}, init, int_cfg);
    if (!run.completed()) {
      entry.diverged = true;
      out.push_back(entry);
      continue;
    }
    const Trace& tr = run.trace;
    const double t_tail = 0.9 * tr.t.back();
    for (std::size_t s = 0; s < tr.samples(); ++s) {
      if (tr.t[s] < t_tail) continue;
      double est = 0.0;
      for (std::size_t i = 0; i < tr.n; ++i) est += tr.thhat[i][s] * tr.x[i][s];
      entry.tail_sup = std::max(entry.tail_sup, std::abs(tr.u[s] - est));
    }
    out.push_back(entry);
  }
  return out;
}

// ---------------------------------------------------------------------------
// fragility of trajectory-dependent claims

struct FragilityReport {
  double epsilon = 0.0;
  double predicted_blowup_time = 0.0;  ///< ln(threshold / epsilon), +inf at epsilon = 0
  RunOutcome lti_on_manifold;
  RunOutcome lti_off_manifold;
  RunOutcome l1_matched_predictor;
  RunOutcome l1_offset_predictor;
};

namespace detail {

/// Wraps a bare-state run into the closed-loop trace schema with the
/// controller columns zeroed.
inline RunOutcome flat_to_outcome(const FlatRun& run, std::size_t n, const IntegratorConfig& cfg) {
  RunOutcome out;
  Trace& tr = out.trace;
  tr.n = n;
  tr.dt = cfg.dt;
  tr.sample_every = cfg.sample_every;
  tr.x.resize(n);
  tr.xhat.resize(n);
  tr.thhat.resize(n);
  for (std::size_t s = 0; s < run.t.size(); ++s) {
    tr.t.push_back(run.t[s]);
    for (std::size_t i = 0; i < n; ++i) {
      tr.x[i].push_back(run.y[s][i]);
      tr.xhat[i].push_back(0.0);
      tr.thhat[i].push_back(0.0);
    }
    tr.u.push_back(0.0);
    tr.ttx.push_back(0.0);
    tr.v_lyap.push_back(0.0);
    tr.norminf.push_back(inf_norm(run.y[s]));
  }
  out.verdict = run.verdict;
  out.t_diverged = run.t_diverged;
  if (run.verdict == Verdict::Diverged) {
    tr.terminated_early = true;
    tr.cause = run.cause;
  }
  return out;
}

}  // namespace detail

/// Demonstrates how a claim tied to one trajectory collapses off it. The
/// two-state plant xdot1 = -x1, xdot2 = x2 - 2 x1 keeps the diagonal
/// x1 = x2 invariant and decaying while the gap x2 - x1 grows exactly like
/// epsilon * e^t; the runs start on the diagonal and epsilon off it. The
/// companion pair runs the adaptive loop with a matched predictor start
/// x_hat(0) = x(0) versus an epsilon-offset one.
inline FragilityReport fragility_demo(double epsilon, const IntegratorConfig& int_cfg) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("fragility_demo: epsilon must be >= 0");
  int_cfg.validate();

  FragilityReport rep;
  rep.epsilon = epsilon;
  rep.predicted_blowup_time = epsilon > 0.0
                                  ? std::log(int_cfg.blowup_threshold / epsilon)
                                  : std::numeric_limits<double>::infinity();

  auto lti = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
    dy[1] = y[1] - 2.0 * y[0];
  };
  rep.lti_on_manifold = detail::flat_to_outcome(integrate(lti, {1.0, 1.0}, int_cfg), 2, int_cfg);
  rep.lti_off_manifold =
      detail::flat_to_outcome(integrate(lti, {1.0, 1.0 + epsilon}, int_cfg), 2, int_cfg);

  const PlantParams plant({-1.0, -1.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{5.0, 10.0, {}};
  InitialConditions init = default_init(2);
  init.xhat0 = init.x0;
  rep.l1_matched_predictor = run_closed_loop(Architecture::L1AC, plant, ref, cfg, init, int_cfg);
  for (std::size_t i = 0; i < init.xhat0.size(); ++i) init.xhat0[i] = init.x0[i] + epsilon;
  rep.l1_offset_predictor = run_closed_loop(Architecture::L1AC, plant, ref, cfg, init, int_cfg);
  return rep;
}

}  // namespace l1e
