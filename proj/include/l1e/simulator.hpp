#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "l1e/constants.hpp"
#include "l1e/system_models.hpp"
#include "l1e/vec.hpp"

namespace l1e {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 10.0;
  std::size_t sample_every = 1;
  double blowup_threshold = default_blowup_threshold;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    if (!(t_end >= dt) || !std::isfinite(t_end))
      throw std::invalid_argument("IntegratorConfig: t_end must be >= dt");
    if (sample_every < 1) throw std::invalid_argument("IntegratorConfig: sample_every must be >= 1");
    if (!(blowup_threshold > 0.0))
      throw std::invalid_argument("IntegratorConfig: blowup_threshold must be > 0");
  }

  std::size_t steps() const {
    return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  }
};

enum class Verdict { Completed, Diverged };

inline const char* to_string(Verdict v) {
  return v == Verdict::Completed ? "Completed" : "Diverged";
}

struct IntegrationHalt {
  Verdict verdict = Verdict::Completed;
  double t_stop = 0.0;
  std::string cause;
};

namespace detail {

struct NoPost {
  void operator()(double, std::span<double>) const {}
};

}  // namespace detail

/// Classical fixed-step RK4. `rhs(t, y, dydt)` fills the derivative,
/// `observe(t, y)` fires at t = 0 and then every sample_every-th step, and
/// `post(t, y)` may adjust the state after each step (used for the discrete
/// estimate projection). Integration halts with Diverged at the first step
/// whose state has a non-finite entry or inf-norm above blowup_threshold.
template <class Rhs, class Observer, class Post = detail::NoPost>
IntegrationHalt integrate_core(Rhs&& rhs, Vec& y, const IntegratorConfig& cfg, Observer&& observe,
                               Post&& post = {}) {
  cfg.validate();
  if (!all_finite(y)) throw std::invalid_argument("integrate: non-finite initial state");

  const std::size_t dim = y.size();
  const std::size_t n_steps = cfg.steps();
  const double dt = cfg.dt;

  Vec k1(dim), k2(dim), k3(dim), k4(dim), work(dim);
  observe(0.0, std::span<const double>(y));

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    rhs(t, std::span<const double>(y), std::span<double>(k1));
    for (std::size_t i = 0; i < dim; ++i) work[i] = y[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, std::span<const double>(work), std::span<double>(k2));
    for (std::size_t i = 0; i < dim; ++i) work[i] = y[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, std::span<const double>(work), std::span<double>(k3));
    for (std::size_t i = 0; i < dim; ++i) work[i] = y[i] + dt * k3[i];
    rhs(t + dt, std::span<const double>(work), std::span<double>(k4));
    for (std::size_t i = 0; i < dim; ++i)
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const double t_next = static_cast<double>(step + 1) * dt;
    post(t_next, std::span<double>(y));

    if (!all_finite(y)) return {Verdict::Diverged, t_next, "non-finite state"};
    if (inf_norm(y) > cfg.blowup_threshold)
      return {Verdict::Diverged, t_next, "state norm exceeded blowup threshold"};

    if ((step + 1) % cfg.sample_every == 0) observe(t_next, std::span<const double>(y));
  }
  return {Verdict::Completed, static_cast<double>(n_steps) * dt, ""};
}

/// Generic integration result: uniformly sampled flat states.
struct FlatRun {
  std::vector<double> t;
  std::vector<Vec> y;
  Verdict verdict = Verdict::Completed;
  double t_diverged = 0.0;
  std::string cause;

  const Vec& final_state() const { return y.back(); }
};

template <class Rhs>
FlatRun integrate(Rhs&& rhs, Vec y0, const IntegratorConfig& cfg) {
  FlatRun run;
  auto halt = integrate_core(
      rhs, y0, cfg,
      [&](double t, std::span<const double> y) {
        run.t.push_back(t);
        run.y.emplace_back(y.begin(), y.end());
      });
  run.verdict = halt.verdict;
  run.cause = halt.cause;
  if (halt.verdict == Verdict::Diverged) run.t_diverged = halt.t_stop;
  return run;
}

/// Uniformly sampled closed-loop record. Columns follow the CSV schema:
/// t, x1..xn, u, xhat1..xhatn, thhat1..thhatn, ttx, V, norminf, where
/// ttx = (theta_hat - theta)' x and V = x_err' P x_err / 2 + |theta_err|^2 / (2 gamma).
struct Trace {
  std::size_t n = 0;
  double dt = 0.0;
  std::size_t sample_every = 1;
  std::vector<double> t;
  std::vector<Vec> x;      // n columns
  std::vector<double> u;
  std::vector<Vec> xhat;   // n columns
  std::vector<Vec> thhat;  // n columns
  std::vector<double> ttx;
  std::vector<double> v_lyap;
  std::vector<double> norminf;
  bool terminated_early = false;
  std::string cause;

  std::size_t samples() const { return t.size(); }
};

struct RunOutcome {
  Trace trace;
  Verdict verdict = Verdict::Completed;
  double t_diverged = 0.0;

  bool completed() const { return verdict == Verdict::Completed; }
};

enum class Architecture { L1AC, PI, PerturbedPI };

inline const char* to_string(Architecture a) {
  switch (a) {
    case Architecture::L1AC: return "l1ac";
    case Architecture::PI: return "pi";
    default: return "perturbed-pi";
  }
}

namespace detail {

struct TraceBuilder {
  Trace* trace;
  const PlantParams* plant;
  const ReferenceModel* ref;
  const L1Config* cfg;
  const PIGains* gains;  // null for the filtered architecture
  Architecture arch;
  Vec theta;

  void operator()(double t, std::span<const double> y) const {
    const std::size_t n = plant->n();
    trace->t.push_back(t);
    const auto x = y.subspan(0, n);
    for (std::size_t i = 0; i < n; ++i) trace->x[i].push_back(x[i]);

    double u = 0.0;
    std::span<const double> xh, th;
    static const Vec empty;
    switch (arch) {
      case Architecture::L1AC:
        u = y[n];
        xh = y.subspan(n + 1, n);
        th = y.subspan(2 * n + 1, n);
        break;
      case Architecture::PI:
        u = y[n] - dot(gains->K_P, x);
        break;
      case Architecture::PerturbedPI:
        u = y[n] - dot(gains->K_P, x);
        xh = y.subspan(n + 1, n);
        th = y.subspan(2 * n + 1, n);
        break;
    }
    trace->u.push_back(u);
    for (std::size_t i = 0; i < n; ++i) {
      trace->xhat[i].push_back(xh.empty() ? 0.0 : xh[i]);
      trace->thhat[i].push_back(th.empty() ? 0.0 : th[i]);
    }

    double ttx = 0.0;
    Vec x_err(n), theta_err(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double thi = th.empty() ? 0.0 : th[i];
      const double xhi = xh.empty() ? 0.0 : xh[i];
      theta_err[i] = thi - theta[i];
      x_err[i] = xhi - x[i];
      ttx += theta_err[i] * x[i];
    }
    trace->ttx.push_back(ttx);

    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) quad += x_err[i] * ref->P()(i, j) * x_err[j];
    double th_sq = 0.0;
    for (double e : theta_err) th_sq += e * e;
    trace->v_lyap.push_back(0.5 * quad + th_sq / (2.0 * cfg->gamma));
    trace->norminf.push_back(inf_norm(y));
  }
};

}  // namespace detail

/// Integrates one closed-loop architecture from the given initial point and
/// records the full signal trace. The PerturbedPI architecture stacks the
/// prediction-based estimator next to the PI realization so the integrator
/// is driven by the live k * theta_err' x perturbation.
inline RunOutcome run_closed_loop(Architecture arch, const PlantParams& plant,
                                  const ReferenceModel& ref, const L1Config& cfg,
                                  const InitialConditions& init, const IntegratorConfig& int_cfg) {
  const std::size_t n = plant.n();
  if (ref.n() != n) throw std::invalid_argument("run_closed_loop: plant/reference dimension mismatch");
  cfg.validate();
  init.validate(n);
  int_cfg.validate();

  const PIGains gains = pi_gains(cfg.k, ref);
  const ThetaTrue theta = theta_from(plant, ref);

  Vec y0;
  switch (arch) {
    case Architecture::L1AC:
      y0.resize(3 * n + 1);
      std::copy(init.x0.begin(), init.x0.end(), y0.begin());
      y0[n] = init.u0;
      std::copy(init.xhat0.begin(), init.xhat0.end(), y0.begin() + static_cast<std::ptrdiff_t>(n + 1));
      std::copy(init.thetahat0.begin(), init.thetahat0.end(),
                y0.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
      break;
    case Architecture::PI:
      y0.resize(n + 1);
      std::copy(init.x0.begin(), init.x0.end(), y0.begin());
      y0[n] = resolve_v0(init, cfg.k);
      break;
    case Architecture::PerturbedPI:
      y0.resize(3 * n + 1);
      std::copy(init.x0.begin(), init.x0.end(), y0.begin());
      y0[n] = resolve_v0(init, cfg.k);
      std::copy(init.xhat0.begin(), init.xhat0.end(), y0.begin() + static_cast<std::ptrdiff_t>(n + 1));
      std::copy(init.thetahat0.begin(), init.thetahat0.end(),
                y0.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
      break;
  }

  RunOutcome out;
  Trace& trace = out.trace;
  trace.n = n;
  trace.dt = int_cfg.dt;
  trace.sample_every = int_cfg.sample_every;
  trace.x.resize(n);
  trace.xhat.resize(n);
  trace.thhat.resize(n);

  detail::TraceBuilder observer{&trace, &plant, &ref, &cfg, &gains, arch, theta.theta};

  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    switch (arch) {
      case Architecture::L1AC:
        l1ac_deriv(y, dy, plant, ref, cfg);
        break;
      case Architecture::PI:
        pi_deriv(y, dy, plant, gains);
        break;
      case Architecture::PerturbedPI: {
        // PI integrator perturbed by the live estimator signal
        const auto x = y.subspan(0, n);
        const auto x_hat = y.subspan(n + 1, n);
        const auto theta_hat = y.subspan(2 * n + 1, n);
        double ttx = 0.0;
        for (std::size_t i = 0; i < n; ++i) ttx += (theta_hat[i] - theta.theta[i]) * x[i];
        perturbed_pi_deriv(y.subspan(0, n + 1), dy.subspan(0, n + 1), plant, gains, cfg.k, ttx);

        const double u = y[n] - dot(gains.K_P, x);
        const double est = dot(theta_hat, x);
        auto dxh = dy.subspan(n + 1, n);
        for (std::size_t i = 0; i + 1 < n; ++i) dxh[i] = x_hat[i + 1];
        dxh[n - 1] = -dot(ref.a_m(), x_hat) - (est - u);
        double sigma = 0.0;
        for (std::size_t i = 0; i < n; ++i) sigma += (x_hat[i] - x[i]) * ref.Pb()[i];
        auto dth = dy.subspan(2 * n + 1, n);
        for (std::size_t i = 0; i < n; ++i) dth[i] = cfg.gamma * sigma * x[i];
        break;
      }
    }
  };

  IntegrationHalt halt;
  if (cfg.projection_radius && arch != Architecture::PI) {
    const double radius = *cfg.projection_radius;
    auto clamp = [&, radius](double, std::span<double> y) {
      auto th = y.subspan(2 * n + 1, n);
      const double nrm = norm2(th);
      if (nrm > radius) {
        const double s = radius / nrm;
        for (double& v : th) v *= s;
      }
    };
    halt = integrate_core(rhs, y0, int_cfg, observer, clamp);
  } else {
    halt = integrate_core(rhs, y0, int_cfg, observer);
  }

  out.verdict = halt.verdict;
  if (halt.verdict == Verdict::Diverged) {
    out.t_diverged = halt.t_stop;
    trace.terminated_early = true;
    trace.cause = halt.cause;
  }
  return out;
}

}  // namespace l1e
