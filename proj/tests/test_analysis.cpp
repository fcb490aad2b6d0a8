#include <catch2/catch.hpp>

#include <cmath>

#include "l1e/analysis.hpp"

#include "helpers.hpp"

using namespace l1e;

TEST_CASE("charpoly identity on the scalar boundary case") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  const ThetaTrue theta = theta_from(plant, ref);

  const auto [lhs, rhs] = charpoly_a0(plant, ref, theta, 1.0);
  CHECK(lhs.coeffs() == std::vector<double>{1.0, 0.0, 1.0});  // s^2 + 1
  CHECK(rhs.coeffs() == std::vector<double>{1.0, 0.0, 1.0});
  CHECK(routh_hurwitz(rhs).tag == StabilityTag::Marginal);
}

TEST_CASE("charpoly identity on the 2-state example") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const ThetaTrue theta = theta_from(plant, ref);

  const auto [lhs, rhs] = charpoly_a0(plant, ref, theta, 1.0);
  const std::vector<double> expect{1.0, 4.0, 4.0, 1.0};
  REQUIRE(lhs.degree() == 3);
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(lhs.coeff(i) == Approx(expect[i]).margin(1e-12));
    CHECK(rhs.coeff(i) == Approx(expect[i]).margin(1e-12));
  }

  // cross-check the explicit block matrix against a cofactor determinant
  const Matrix a0 = build_a0(plant, theta, 1.0);
  for (double s : {0.3, -1.7, 2.9}) CHECK(lhs(s) == Approx(testutil::char_poly_at(a0, s)).margin(1e-10));
}

TEST_CASE("charpoly identity degenerates to s * p_A at zero gain") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const ThetaTrue theta = theta_from(plant, ref);
  const auto [lhs, rhs] = charpoly_a0(plant, ref, theta, 0.0);
  const Polynomial expect = companion_char_poly(plant.a).times_s();
  CHECK(poly_match(lhs, expect, 1e-12));
  CHECK(poly_match(rhs, expect, 1e-12));
}

TEST_CASE("charpoly identity holds on random instances") {
  auto& gen = testutil::rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    Vec a(n);
    for (double& x : a) x = testutil::uniform(gen, -5.0, 5.0);
    Vec a_m;
    while (true) {
      a_m.resize(n);
      for (double& x : a_m) x = testutil::uniform(gen, 0.05, 5.0);
      if (routh_hurwitz(companion_char_poly(a_m)).hurwitz()) break;
    }
    const double k = testutil::uniform(gen, 1e-3, 10.0);

    const PlantParams plant(a);
    const ReferenceModel ref(a_m);
    const auto [lhs, rhs] = charpoly_a0(plant, ref, theta_from(plant, ref), k);
    CHECK(poly_match(lhs, rhs, 1e-9));
  }
}

TEST_CASE("critical gain on the scalar benchmark") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  const double kc = critical_gain(plant, ref, 0.1, 10.0, 1e-6);
  CHECK(std::abs(kc - 1.0) <= 1e-6);

  // bracketing invariant around the returned gain
  CHECK_FALSE(routh_hurwitz(pi_closed_loop_poly(plant, ref, kc - 1e-6)).hurwitz());
  CHECK(routh_hurwitz(pi_closed_loop_poly(plant, ref, kc + 1e-6)).hurwitz());
}

TEST_CASE("critical gain reports a bracket error on an already-stable plant") {
  const PlantParams plant({1.0});
  const ReferenceModel ref({1.0});
  CHECK_THROWS_AS(critical_gain(plant, ref, 0.1, 10.0), BracketError);
}

TEST_CASE("critical gain agrees with a dense root-oracle scan, n = 2") {
  const PlantParams plant({-1.0, -1.0});
  const ReferenceModel ref({1.0, 2.0});
  const double tol_width = 1e-6;
  const double kc = critical_gain(plant, ref, 0.5, 5.0, tol_width);

  // closed form from the Routh condition 2k^2 - 4k + 1 > 0, k > 1
  CHECK(std::abs(kc - (1.0 + std::sqrt(0.5))) <= 1e-5);

  // independent scan: first grid k whose spectrum is strictly stable
  double scan_kc = 0.0;
  for (double k = 0.5; k <= 5.0; k += 1e-3) {
    if (max_root_real_part(pi_closed_loop_poly(plant, ref, k)) < 0.0) {
      scan_kc = k;
      break;
    }
  }
  CHECK(std::abs(kc - scan_kc) <= 2e-3);
}

TEST_CASE("equivalence holds for the frozen estimator on a stable scenario") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{2.0, 10.0, {}};
  const InitialConditions init = default_init(2);
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 10.0;

  const auto rep = equivalence_check(plant, ref, cfg, init, icfg, EstimatorVariant::Frozen);
  CHECK(rep.max_u_gap <= 1e-6);
  CHECK(rep.pass);
  CHECK_FALSE(rep.truncated);
}

TEST_CASE("equivalence holds for the true estimator at high adaptation gain") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{2.0, 100.0, {}};
  const InitialConditions init = default_init(2);
  IntegratorConfig icfg;
  icfg.dt = 1e-4;
  icfg.t_end = 10.0;

  const auto rep = equivalence_check(plant, ref, cfg, init, icfg, EstimatorVariant::True);
  CHECK(rep.max_u_gap <= 1e-5);
  CHECK(rep.pass);
}

TEST_CASE("equivalence holds for a scripted estimate schedule") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{3.0, 10.0, {}};
  const InitialConditions init = default_init(2);
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 10.0;

  const auto rep = equivalence_check(plant, ref, cfg, init, icfg, EstimatorVariant::Scripted);
  CHECK(rep.max_u_gap <= 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("a mismatched integrator start breaks equivalence (negative control)") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{2.0, 10.0, {}};
  InitialConditions init = default_init(2);
  init.v0 = init.u0 + cfg.k * init.x0.back() + 1.0;  // off by one
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 5.0;

  const auto rep = equivalence_check(plant, ref, cfg, init, icfg, EstimatorVariant::True);
  CHECK(rep.max_u_gap >= 0.5);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("convergence_check finds a decaying perturbation on a stable run") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  const L1Config cfg{2.0, 10.0, {}};
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 60.0;
  icfg.sample_every = 10;

  const RunOutcome run =
      run_closed_loop(Architecture::L1AC, plant, ref, cfg, default_init(1), icfg);
  REQUIRE(run.completed());
  const auto rep = convergence_check(run, ref);
  CHECK(rep.bounded);
  CHECK(rep.v_nonincreasing);

  double head_sup = 0.0;
  for (std::size_t s = 0; s < run.trace.samples(); ++s)
    if (run.trace.t[s] <= 6.0) head_sup = std::max(head_sup, std::abs(run.trace.ttx[s]));
  CHECK(rep.tail_sup <= 1e-2);
  CHECK(rep.tail_sup < 0.1 * head_sup);
}

TEST_CASE("convergence_check on a matched plant sees a null perturbation") {
  const PlantParams plant({1.0, 2.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{2.0, 10.0, {}};
  InitialConditions init = default_init(2);
  init.xhat0 = init.x0;
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 20.0;
  icfg.sample_every = 10;

  const RunOutcome run = run_closed_loop(Architecture::L1AC, plant, ref, cfg, init, icfg);
  REQUIRE(run.completed());
  for (double v : run.trace.ttx) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("convergence_check rejects diverged runs") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 120.0;
  const RunOutcome run =
      run_closed_loop(Architecture::L1AC, plant, ref, {0.5, 1.0, {}}, default_init(1), icfg);
  REQUIRE(run.verdict == Verdict::Diverged);
  CHECK_THROWS_AS(convergence_check(run, ref), NotApplicableError);
}

TEST_CASE("induced norm vanishes with theta") {
  const ReferenceModel ref({1.0, 2.0});
  CHECK(linf_condition_norm(ref, {Vec{0.0, 0.0}}, 4.0, 1e-3, 30.0) == 0.0);
}

TEST_CASE("induced norm matches the partial-fraction value on the scalar case") {
  // theta = -2, a_m = 1, k = 4: impulse response -2(-exp(-t)/3 + 4 exp(-4t)/3),
  // whose absolute integral works out to 4^(-1/3)
  const ReferenceModel ref({1.0});
  const double numeric = linf_condition_norm(ref, {Vec{-2.0}}, 4.0, 1e-4, 40.0);
  const double closed_form = std::pow(4.0, -1.0 / 3.0);
  CHECK(std::abs(numeric - closed_form) <= 1e-4);
}

TEST_CASE("induced norm is absolutely homogeneous in theta") {
  const ReferenceModel ref({1.0, 2.0});
  const Vec theta{-2.0, 1.3};
  const double base = linf_condition_norm(ref, {theta}, 4.0, 1e-3, 40.0);
  for (double c : {0.5, -3.0, 7.0}) {
    Vec scaled(theta);
    for (double& x : scaled) x *= c;
    const double nrm = linf_condition_norm(ref, {scaled}, 4.0, 1e-3, 40.0);
    CHECK(std::abs(nrm - std::abs(c) * base) <= 1e-10 * std::abs(c) * base);
  }
}

TEST_CASE("induced norm decays as the filter bandwidth grows") {
  const ReferenceModel ref({1.0});
  const ThetaTrue theta{Vec{-2.0}};
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {1.0, 4.0, 16.0, 64.0}) {
    const double nrm = linf_condition_norm(ref, theta, k, 1e-4, 60.0);
    CHECK(nrm < prev);
    prev = nrm;
  }
}

TEST_CASE("stability sweep charts the scalar benchmark") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 120.0;
  icfg.sample_every = 100;

  const SweepResult res = stability_sweep(plant, ref, {0.25, 0.5, 2.0, 4.0}, {1.0, 10.0},
                                          default_init(1), icfg);
  CHECK(res.pi_verdicts[0] == StabilityTag::Unstable);
  CHECK(res.pi_verdicts[1] == StabilityTag::Unstable);
  CHECK(res.pi_verdicts[2] == StabilityTag::Hurwitz);
  CHECK(res.pi_verdicts[3] == StabilityTag::Hurwitz);

  for (std::size_t ik = 0; ik < 2; ++ik)
    for (std::size_t ig = 0; ig < 2; ++ig) CHECK(res.l1_at(ik, ig) == Verdict::Diverged);
  for (std::size_t ik = 2; ik < 4; ++ik)
    for (std::size_t ig = 0; ig < 2; ++ig) CHECK(res.l1_at(ik, ig) == Verdict::Completed);
}

TEST_CASE("equivalence survives the estimate projection clamp") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const L1Config cfg{2.0, 80.0, 0.5};  // tight ball, active clamping
  const InitialConditions init = default_init(2);
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 10.0;

  const auto rep = equivalence_check(plant, ref, cfg, init, icfg, EstimatorVariant::True);
  CHECK(rep.max_u_gap <= 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("sweep results do not depend on the thread cap") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 30.0;
  icfg.sample_every = 100;

  setenv("L1EQUIV_THREADS", "1", 1);
  const SweepResult serial =
      stability_sweep(plant, ref, {0.5, 2.0, 4.0}, {1.0, 10.0}, default_init(1), icfg);
  setenv("L1EQUIV_THREADS", "4", 1);
  const SweepResult parallel =
      stability_sweep(plant, ref, {0.5, 2.0, 4.0}, {1.0, 10.0}, default_init(1), icfg);
  unsetenv("L1EQUIV_THREADS");

  REQUIRE(serial.l1_verdicts.size() == parallel.l1_verdicts.size());
  for (std::size_t i = 0; i < serial.l1_verdicts.size(); ++i)
    CHECK(serial.l1_verdicts[i] == parallel.l1_verdicts[i]);
}

TEST_CASE("stability sweep on a matched plant completes everywhere") {
  const PlantParams plant({1.0, 2.0});
  const ReferenceModel ref({1.0, 2.0});
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 30.0;
  icfg.sample_every = 100;
  const SweepResult res =
      stability_sweep(plant, ref, {0.5, 2.0}, {1.0, 50.0}, default_init(2), icfg);
  for (auto v : res.l1_verdicts) CHECK(v == Verdict::Completed);
}

TEST_CASE("high-gain entries stay at zero from the loop fixed point") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  InitialConditions init = default_init(1);
  init.x0 = {0.0};  // start at the equilibrium: u = theta_hat' x identically
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 5.0;
  const auto entries = high_gain_limit_check(plant, ref, 10.0, {5.0, 500.0}, init, icfg);
  for (const auto& e : entries) {
    CHECK_FALSE(e.diverged);
    CHECK(e.tail_sup == 0.0);
  }
}

TEST_CASE("high-gain check flags step-size violations instead of reporting a tail") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  IntegratorConfig icfg;
  icfg.dt = 0.01;  // dt * k = 5 for the last entry: beyond the RK4 guard
  icfg.t_end = 5.0;
  const auto entries = high_gain_limit_check(plant, ref, 10.0, {5.0, 500.0}, default_init(1), icfg);
  CHECK_FALSE(entries[0].diverged);
  CHECK(entries[1].diverged);
}

TEST_CASE("fragility demo: on-manifold decay, off-manifold blowup") {
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 40.0;

  SECTION("epsilon = 0 stays on the decaying manifold") {
    const FragilityReport rep = fragility_demo(0.0, icfg);
    REQUIRE(rep.lti_on_manifold.completed());
    REQUIRE(rep.lti_off_manifold.completed());
    CHECK(rep.lti_on_manifold.trace.norminf.back() <= 1e-6);
    CHECK(rep.lti_off_manifold.trace.norminf.back() <= 1e-6);
  }

  SECTION("epsilon = 1e-6 blows up when the gap reaches the threshold") {
    const FragilityReport rep = fragility_demo(1e-6, icfg);
    REQUIRE(rep.lti_on_manifold.completed());
    REQUIRE(rep.lti_off_manifold.verdict == Verdict::Diverged);
    CHECK(std::abs(rep.lti_off_manifold.t_diverged - std::log(1e6 / 1e-6)) <= 0.5);
  }

  SECTION("epsilon = 1 blows up within fourteen seconds") {
    const FragilityReport rep = fragility_demo(1.0, icfg);
    REQUIRE(rep.lti_off_manifold.verdict == Verdict::Diverged);
    CHECK(std::abs(rep.lti_off_manifold.t_diverged - std::log(1e6)) <= 0.5);
  }
}

TEST_CASE("fragility blowup time tracks the closed form across epsilons") {
  IntegratorConfig icfg;
  icfg.dt = 1e-3;
  icfg.t_end = 60.0;
  for (double eps : {1e-8, 1e-4, 1e-2, 1.0}) {
    const FragilityReport rep = fragility_demo(eps, icfg);
    REQUIRE(rep.lti_off_manifold.verdict == Verdict::Diverged);
    CHECK(std::abs(rep.lti_off_manifold.t_diverged - rep.predicted_blowup_time) <= 0.5);
  }
}
