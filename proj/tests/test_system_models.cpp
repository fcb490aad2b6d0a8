#include <catch2/catch.hpp>

#include "l1e/simulator.hpp"
#include "l1e/system_models.hpp"

#include "helpers.hpp"

using namespace l1e;

TEST_CASE("theta_from is the elementwise plant/reference gap") {
  const ReferenceModel ref2({1.0, 2.0});
  CHECK(theta_from(PlantParams({2.0, 3.0}), ref2).theta == Vec{1.0, 1.0});
  CHECK(theta_from(PlantParams({1.0, 2.0}), ref2).theta == Vec{0.0, 0.0});

  const ReferenceModel ref1({1.0});
  CHECK(theta_from(PlantParams({-1.0}), ref1).theta == Vec{-2.0});

  CHECK_THROWS_AS(theta_from(PlantParams({1.0}), ref2), std::invalid_argument);
}

TEST_CASE("adding theta back to the reference recovers the plant exactly") {
  // exactness holds on dyadic coefficients, where the subtraction is lossless
  auto& gen = testutil::rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    Vec a(n), a_m(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.25 * std::floor(testutil::uniform(gen, -16.0, 16.0));
      a_m[i] = 0.25 * std::floor(testutil::uniform(gen, 1.0, 16.0));
    }
    if (!routh_hurwitz(companion_char_poly(a_m)).hurwitz()) continue;
    const ReferenceModel ref(a_m);
    const ThetaTrue th = theta_from(PlantParams(a), ref);
    for (std::size_t i = 0; i < n; ++i) CHECK(a_m[i] + th.theta[i] == a[i]);
  }
}

TEST_CASE("pi_gains scales the reference coefficients and the last basis vector") {
  const ReferenceModel ref({1.0, 2.0});
  const PIGains g = pi_gains(3.0, ref);
  CHECK(g.K_I == Vec{3.0, 6.0});
  CHECK(g.K_P == Vec{0.0, 3.0});

  const PIGains scalar = pi_gains(4.0, ReferenceModel({1.0}));
  CHECK(scalar.K_I == Vec{4.0});
  CHECK(scalar.K_P == Vec{4.0});

  const PIGains g3 = pi_gains(1.0, ReferenceModel({2.0, 3.0, 5.0}));
  CHECK(g3.K_I == Vec{2.0, 3.0, 5.0});
  CHECK(g3.K_P == Vec{0.0, 0.0, 1.0});

  CHECK_THROWS_AS(pi_gains(0.0, ref), std::invalid_argument);
}

TEST_CASE("pi_gains never sees the plant") {
  // two very different plants, same designer data -> identical gains
  const ReferenceModel ref({1.0, 2.0});
  [[maybe_unused]] const PlantParams wild({-3.0, 2.5});
  [[maybe_unused]] const PlantParams tame({1.0, 2.0});
  const PIGains g1 = pi_gains(2.5, ref);
  const PIGains g2 = pi_gains(2.5, ref);
  CHECK(g1.K_I == g2.K_I);
  CHECK(g1.K_P == g2.K_P);
}

TEST_CASE("l1ac_rhs hand evaluations, scalar plant") {
  const PlantParams plant({-1.0});
  const L1Config cfg{4.0, 10.0, std::nullopt};

  SECTION("zero prediction error kills adaptation") {
    const ReferenceModel ref({1.0});
    const L1State s{{1.0}, 0.0, {1.0}, {0.0}};
    const L1State d = l1ac_rhs(s, plant, ref, cfg);
    CHECK(d.x[0] == Approx(1.0));
    CHECK(d.u == Approx(0.0));
    CHECK(d.x_hat[0] == Approx(-1.0));
    CHECK(d.theta_hat[0] == Approx(0.0));
  }

  SECTION("gradient law with Q = 2 so that P = 1") {
    Matrix q(1);
    q(0, 0) = 2.0;
    const ReferenceModel ref({1.0}, q);
    REQUIRE(ref.P()(0, 0) == Approx(1.0));
    const L1State s{{1.0}, 0.0, {0.0}, {0.0}};
    const L1State d = l1ac_rhs(s, plant, ref, cfg);
    CHECK(d.theta_hat[0] == Approx(-10.0));
  }

  SECTION("ideal-control fixed point of the filter") {
    const ReferenceModel ref({1.0});
    const L1State s{{1.0}, -2.0, {0.0}, {-2.0}};  // theta = -2, u = theta' x
    const L1State d = l1ac_rhs(s, plant, ref, cfg);
    CHECK(d.u == Approx(0.0));
  }
}

TEST_CASE("pi_rhs hand evaluations") {
  const PlantParams plant({-1.0});
  const ReferenceModel ref({1.0});
  const PIGains g = pi_gains(4.0, ref);

  const PIState s{{1.0}, 4.0};
  const PIState d = pi_rhs(s, plant, g);
  CHECK(d.x[0] == Approx(1.0));  // u = 4 - 4 = 0, so xdot = x
  CHECK(d.v == Approx(-4.0));

  const PIState origin{{0.0}, 3.0};
  const PIState d0 = pi_rhs(origin, plant, g);
  CHECK(d0.v == Approx(0.0));
  CHECK(d0.x[0] == Approx(3.0));  // only the integrator pushes
}

TEST_CASE("pi_rhs matches the assembled closed-loop matrix, n = 2") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const double k = 2.5;
  const PIGains g = pi_gains(k, ref);

  // [x; v] dynamics: [[A - b K_P', b], [-K_I', 0]]
  Matrix m(3);
  const Matrix a = plant.system_matrix();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = a(i, j);
  m(1, 0) -= g.K_P[0];
  m(1, 1) -= g.K_P[1];
  m(0, 2) = 0.0;
  m(1, 2) = 1.0;
  m(2, 0) = -g.K_I[0];
  m(2, 1) = -g.K_I[1];

  auto& gen = testutil::rng(707);
  for (int trial = 0; trial < 10; ++trial) {
    const PIState s{{testutil::uniform(gen, -2, 2), testutil::uniform(gen, -2, 2)},
                    testutil::uniform(gen, -2, 2)};
    const PIState d = pi_rhs(s, plant, g);
    const Vec flat{s.x[0], s.x[1], s.v};
    const Vec expect = m * flat;
    CHECK(d.x[0] == Approx(expect[0]).margin(1e-13));
    CHECK(d.x[1] == Approx(expect[1]).margin(1e-13));
    CHECK(d.v == Approx(expect[2]).margin(1e-13));
  }
}

TEST_CASE("perturbed_pi_rhs reduces to pi_rhs at zero perturbation") {
  const PlantParams plant({-1.0, 0.5});
  const ReferenceModel ref({1.0, 2.0});
  const PIGains g = pi_gains(3.0, ref);
  const PIState s{{0.7, -0.3}, 1.1};

  const PIState plain = pi_rhs(s, plant, g);
  const PIState zero = perturbed_pi_rhs(s, plant, g, 3.0, 0.0);
  CHECK(zero.x == plain.x);
  CHECK(zero.v == plain.v);

  const PlantParams p1({-1.0});
  const PIGains g1 = pi_gains(4.0, ReferenceModel({1.0}));
  const PIState s1{{1.0}, 0.0};
  CHECK(perturbed_pi_rhs(s1, p1, g1, 4.0, 0.5).v == Approx(-4.0 + 2.0));
}

TEST_CASE("project_theta clamps radially") {
  CHECK(project_theta({3.0, 4.0}, 10.0) == Vec{3.0, 4.0});
  CHECK(project_theta({3.0, 4.0}, 5.0) == Vec{3.0, 4.0});  // exactly on the boundary
  const Vec shrunk = project_theta({6.0, 8.0}, 5.0);
  CHECK(shrunk[0] == Approx(3.0));
  CHECK(shrunk[1] == Approx(4.0));
  CHECK_THROWS_AS(project_theta({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("project_theta is idempotent and norm-bounded") {
  auto& gen = testutil::rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    Vec v(n);
    for (double& x : v) x = testutil::uniform(gen, -20.0, 20.0);
    const double radius = testutil::uniform(gen, 0.1, 10.0);
    const Vec once = project_theta(v, radius);
    CHECK(norm2(once) <= radius * (1.0 + 1e-12));
    const Vec twice = project_theta(once, radius);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(twice[i] == Approx(once[i]).epsilon(1e-14).margin(1e-300));
  }
}

TEST_CASE("ideal control realizes the reference dynamics (A + b theta' = Am)") {
  const PlantParams plant({2.0, 3.0});
  const ReferenceModel ref({1.0, 2.0});
  const Vec theta = theta_from(plant, ref).theta;

  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 10.0;
  cfg.sample_every = 10;

  auto ideal = [&](double, std::span<const double> y, std::span<double> dy) {
    detail::plant_deriv(plant.a, y, dot(theta, y), dy);
  };
  auto reference = [&](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -dot(ref.a_m(), y);
  };

  const FlatRun a = integrate(ideal, {1.0, -0.5}, cfg);
  const FlatRun b = integrate(reference, {1.0, -0.5}, cfg);
  REQUIRE(a.verdict == Verdict::Completed);
  REQUIRE(a.t.size() == b.t.size());
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    CHECK(std::abs(a.y[i][0] - b.y[i][0]) <= 1e-6);
    CHECK(std::abs(a.y[i][1] - b.y[i][1]) <= 1e-6);
  }
}

TEST_CASE("reference model validation") {
  CHECK_THROWS_WITH(ReferenceModel({-1.0, 2.0}), Catch::Contains("a_m_i > 0"));
  CHECK_THROWS_AS(ReferenceModel({10.0, 1.0, 1.0}), std::invalid_argument);  // positive but not Hurwitz
  CHECK_THROWS_AS(ReferenceModel({1.0}, Matrix::identity(2)), std::invalid_argument);
  CHECK_NOTHROW(ReferenceModel({1.0, 3.0, 3.0}));
}
