// Command-line front end: scenario files in, CSV traces and verdict
// reports out.
//
// Exit codes: 0 success / condition holds, 1 condition fails, 2 parse or
// validation error, 3 simulation diverged, 4 bisection bracket error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "l1e/analysis.hpp"
#include "l1e/io.hpp"
#include "l1e/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitBracket = 4;

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;
};

l1e::Vec expand(const GridSpec& g) {
  l1e::Vec out;
  if (g.steps == 1) {
    out.push_back(g.lo);
    return out;
  }
  for (std::size_t i = 0; i < g.steps; ++i)
    out.push_back(g.lo + (g.hi - g.lo) * static_cast<double>(i) / static_cast<double>(g.steps - 1));
  return out;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char extra = 0;
  unsigned long steps = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lu%c", &g.lo, &g.hi, &steps, &extra) != 3 || steps == 0)
    throw std::invalid_argument("expected lo:hi:steps, got '" + text + "'");
  g.steps = steps;
  return g;
}

void warn_step_guard(const l1e::Scenario& sc) {
  if (sc.l1.k * sc.integrator.dt > l1e::rk4_real_axis_limit)
    std::cerr << "warning: dt * k = " << l1e::fmt17(sc.l1.k * sc.integrator.dt)
              << " exceeds the RK4 stability limit " << l1e::rk4_real_axis_limit
              << "; expect numerical divergence\n";
}

int run_simulate(const l1e::Scenario& sc, const std::string& arch_name, const std::string& out) {
  l1e::Architecture arch;
  if (arch_name == "l1ac")
    arch = l1e::Architecture::L1AC;
  else if (arch_name == "pi")
    arch = l1e::Architecture::PI;
  else if (arch_name == "perturbed-pi")
    arch = l1e::Architecture::PerturbedPI;
  else
    throw std::invalid_argument("unknown architecture '" + arch_name + "'");

  const l1e::RunOutcome run =
      l1e::run_closed_loop(arch, sc.plant, sc.ref, sc.l1, sc.init, sc.integrator);
  l1e::atomic_write_text(out, l1e::trace_csv(run));
  std::cout << "arch=" << arch_name << " verdict=" << l1e::to_string(run.verdict);
  if (run.verdict == l1e::Verdict::Diverged) std::cout << " t=" << l1e::fmt17(run.t_diverged);
  std::cout << " samples=" << run.trace.samples() << " -> " << out << "\n";
  return run.completed() ? kExitPass : kExitDiverged;
}

int run_equiv(const l1e::Scenario& sc, double tolerance, const std::string& out) {
  const auto reports =
      l1e::equivalence_check_all(sc.plant, sc.ref, sc.l1, sc.init, sc.integrator, tolerance);
  l1e::KvReport kv;
  kv.add("op", "equiv");
  kv.add("tolerance", tolerance);
  kv.add("dt", sc.integrator.dt);
  bool pass = true;
  for (const auto& rep : reports) {
    const std::string p = std::string(l1e::to_string(rep.variant)) + ".";
    kv.add(p + "max_u_gap", rep.max_u_gap);
    kv.add(p + "max_x_gap", rep.max_x_gap);
    kv.add(p + "horizon", rep.horizon);
    kv.add(p + "truncated", rep.truncated);
    kv.add(p + "pass", rep.pass);
    pass = pass && rep.pass;
    std::cout << "estimator=" << l1e::to_string(rep.variant)
              << " max_u_gap=" << l1e::fmt17(rep.max_u_gap)
              << " max_x_gap=" << l1e::fmt17(rep.max_x_gap)
              << (rep.truncated ? " (truncated)" : "") << " pass=" << (rep.pass ? "yes" : "no")
              << "\n";
  }
  kv.add("pass", pass);
  l1e::atomic_write_text(out, kv.to_string());
  return pass ? kExitPass : kExitFail;
}

int run_charpoly(const l1e::Scenario& sc, const std::string& out) {
  const l1e::ThetaTrue theta = l1e::theta_from(sc.plant, sc.ref);
  const auto [lhs, rhs] = l1e::charpoly_a0(sc.plant, sc.ref, theta, sc.l1.k);
  const bool match = l1e::poly_match(lhs, rhs, l1e::tol.charpoly_match);

  l1e::KvReport kv;
  kv.add("op", "charpoly");
  kv.add("k", sc.l1.k);
  kv.add("lhs_coeffs_ascending", lhs);
  kv.add("rhs_coeffs_ascending", rhs);
  kv.add("match", match);
  kv.add("verdict", l1e::to_string(l1e::routh_hurwitz(rhs).tag));
  l1e::atomic_write_text(out, kv.to_string());

  std::cout << "lhs:";
  for (double c : lhs.coeffs()) std::cout << ' ' << l1e::fmt17(c);
  std::cout << "\nrhs:";
  for (double c : rhs.coeffs()) std::cout << ' ' << l1e::fmt17(c);
  std::cout << "\nmatch=" << (match ? "true" : "false") << "\n";
  return match ? kExitPass : kExitFail;
}

int run_kc(const l1e::Scenario& sc, double k_lo, double k_hi, double tol_width,
           const std::string& out) {
  const double kc = l1e::critical_gain(sc.plant, sc.ref, k_lo, k_hi, tol_width);
  l1e::KvReport kv;
  kv.add("op", "kc");
  kv.add("k_lo", k_lo);
  kv.add("k_hi", k_hi);
  kv.add("tol", tol_width);
  kv.add("k_c", kc);
  l1e::atomic_write_text(out, kv.to_string());
  std::cout << "k_c = " << l1e::fmt17(kc) << "\n";
  return kExitPass;
}

int run_l1norm(const l1e::Scenario& sc, double quad_dt, double horizon, const std::string& out) {
  const l1e::ThetaTrue theta = l1e::theta_from(sc.plant, sc.ref);
  const double norm = l1e::linf_condition_norm(sc.ref, theta, sc.l1.k, quad_dt, horizon);
  const bool satisfied = norm < 1.0;
  l1e::KvReport kv;
  kv.add("op", "l1norm");
  kv.add("k", sc.l1.k);
  kv.add("quad_dt", quad_dt);
  kv.add("horizon", horizon);
  kv.add("norm", norm);
  kv.add("satisfied", satisfied);
  l1e::atomic_write_text(out, kv.to_string());
  std::cout << "norm = " << l1e::fmt17(norm) << " (condition " << (satisfied ? "holds" : "fails")
            << ")\n";
  return satisfied ? kExitPass : kExitFail;
}

int run_sweep(const l1e::Scenario& sc, const GridSpec& kg, const GridSpec& gg,
              const std::string& out) {
  const l1e::SweepResult res =
      l1e::stability_sweep(sc.plant, sc.ref, expand(kg), expand(gg), sc.init, sc.integrator);
  l1e::atomic_write_text(out, l1e::sweep_csv(res));
  std::size_t diverged = 0;
  for (auto v : res.l1_verdicts)
    if (v == l1e::Verdict::Diverged) ++diverged;
  std::cout << "grid " << res.k_grid.size() << " x " << res.gamma_grid.size() << ": " << diverged
            << " diverged -> " << out << "\n";
  return kExitPass;
}

int run_fragility(double epsilon, const l1e::IntegratorConfig& icfg, const std::string& out) {
  const l1e::FragilityReport rep = l1e::fragility_demo(epsilon, icfg);
  l1e::KvReport kv;
  kv.add("op", "fragility");
  kv.add("epsilon", epsilon);
  kv.add("predicted_blowup_time", rep.predicted_blowup_time);
  kv.add("lti_on_manifold.verdict", l1e::to_string(rep.lti_on_manifold.verdict));
  kv.add("lti_on_manifold.final_norm", rep.lti_on_manifold.trace.norminf.back());
  kv.add("lti_off_manifold.verdict", l1e::to_string(rep.lti_off_manifold.verdict));
  if (!rep.lti_off_manifold.completed())
    kv.add("lti_off_manifold.t_diverged", rep.lti_off_manifold.t_diverged);
  kv.add("l1_matched_predictor.verdict", l1e::to_string(rep.l1_matched_predictor.verdict));
  kv.add("l1_matched_predictor.sup_norm",
         *std::max_element(rep.l1_matched_predictor.trace.norminf.begin(),
                           rep.l1_matched_predictor.trace.norminf.end()));
  kv.add("l1_offset_predictor.verdict", l1e::to_string(rep.l1_offset_predictor.verdict));
  kv.add("l1_offset_predictor.sup_norm",
         *std::max_element(rep.l1_offset_predictor.trace.norminf.begin(),
                           rep.l1_offset_predictor.trace.norminf.end()));
  l1e::atomic_write_text(out, kv.to_string());

  std::cout << "on-manifold: " << l1e::to_string(rep.lti_on_manifold.verdict)
            << ", off-manifold: " << l1e::to_string(rep.lti_off_manifold.verdict);
  if (!rep.lti_off_manifold.completed())
    std::cout << " at t=" << l1e::fmt17(rep.lti_off_manifold.t_diverged) << " (predicted "
              << l1e::fmt17(rep.predicted_blowup_time) << ")";
  std::cout << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification tool for filtered adaptive control loops "
               "and their PI realizations"};
  app.require_subcommand(1);

  std::string config, out, arch = "l1ac";
  double tolerance = l1e::tol.equivalence_gap;
  double k_lo = 0.01, k_hi = 100.0, kc_tol = l1e::tol.bisection_width;
  double quad_dt = 1e-4, horizon = 40.0;
  double epsilon = 0.0;
  std::string k_grid_text, gamma_grid_text;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "scenario file")->required();
    cmd->add_option("--out", out, "output file")->required();
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate one architecture, write a CSV trace");
  add_common(simulate);
  simulate->add_option("--arch", arch, "l1ac | pi | perturbed-pi")->required();

  CLI::App* equiv = app.add_subcommand(
      "equiv", "co-simulate the filtered loop against its PI realization (3 estimator variants)");
  add_common(equiv);
  equiv->add_option("--tol", tolerance, "sup-gap tolerance");

  CLI::App* charpoly =
      app.add_subcommand("charpoly", "both routes to the closed-loop characteristic polynomial");
  add_common(charpoly);

  CLI::App* kc = app.add_subcommand("kc", "bisect the critical PI gain");
  add_common(kc);
  kc->add_option("--k-lo", k_lo, "lower bracket (not Hurwitz there)");
  kc->add_option("--k-hi", k_hi, "upper bracket (Hurwitz there)");
  kc->add_option("--tol", kc_tol, "bracket width");

  CLI::App* l1norm =
      app.add_subcommand("l1norm", "induced-norm condition on the filtered operator");
  add_common(l1norm);
  l1norm->add_option("--quad-dt", quad_dt, "quadrature step");
  l1norm->add_option("--horizon", horizon, "integration horizon");

  CLI::App* sweep = app.add_subcommand("sweep", "verdict grid over (k, gamma)");
  add_common(sweep);
  sweep->add_option("--k", k_grid_text, "k grid as lo:hi:steps")->required();
  sweep->add_option("--gamma", gamma_grid_text, "gamma grid as lo:hi:steps")->required();

  CLI::App* fragility =
      app.add_subcommand("fragility", "trajectory-dependence demonstration runs");
  add_common(fragility);
  fragility->add_option("--epsilon", epsilon, "initial-condition offset")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const l1e::Scenario sc = l1e::load_scenario(config);
    if (simulate->parsed() || equiv->parsed()) warn_step_guard(sc);
    if (simulate->parsed()) return run_simulate(sc, arch, out);
    if (equiv->parsed()) return run_equiv(sc, tolerance, out);
    if (charpoly->parsed()) return run_charpoly(sc, out);
    if (kc->parsed()) return run_kc(sc, k_lo, k_hi, kc_tol, out);
    if (l1norm->parsed()) return run_l1norm(sc, quad_dt, horizon, out);
    if (sweep->parsed())
      return run_sweep(sc, parse_grid(k_grid_text), parse_grid(gamma_grid_text), out);
    if (fragility->parsed()) return run_fragility(epsilon, sc.integrator, out);
  } catch (const l1e::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const l1e::BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBracket;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
