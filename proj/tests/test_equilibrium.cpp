#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "orbitron/dynamics.hpp"
#include "orbitron/equilibrium.hpp"
#include "test_helpers.hpp"

using namespace orbitron;
using testutil::rel_err;

namespace {

RelativeEquilibrium reference_eq() {
  // axial momentum at 1.5x the stabilization threshold of the reference rig
  return make_equilibrium(testutil::reference_params(), testutil::ref_r0, 1.829848e-05);
}

}  // namespace

TEST_CASE("equilibrium invariants at the reference radius") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();

  CHECK(rel_err(eq.R, std::hypot(0.075, 0.05)) < 1e-15);
  CHECK(rel_err(eq.K, 4.415755e-05) < 1e-6);
  CHECK(rel_err(eq.omega, 1.544497) < 1e-6);
  CHECK(rel_err(eq.p0, 7.917301e-04) < 1e-6);
  CHECK(rel_err(eq.lambda1, 3.228308e-03) < 1e-6);
  CHECK(rel_err(eq.lambda2, 1.740117e+02) < 1e-6);
  CHECK(rel_err(eq.period(), 2.0 * std::numbers::pi / eq.omega) < 1e-15);

  // the balance that defines the orbit: M omega^2 = 3K/R^2
  CHECK(rel_err(par.mass * eq.omega * eq.omega, 3.0 * eq.K / (eq.R * eq.R)) < 1e-14);
  // multiplier identities
  CHECK(rel_err(eq.lambda2, par.alpha() * eq.n0 - eq.omega) < 1e-14);
  CHECK(rel_err(eq.lambda1, eq.K + eq.n0 * eq.lambda2) < 1e-14);
}

TEST_CASE("coupling scale tracks the explicit closed form") {
  // a rig with a round moment value: mu = 0.18 exactly
  OrbitronParams par = testutil::reference_params();
  par.mu = 0.18;
  CHECK(rel_err(coupling_k(par, 0.075), 4.325637e-05) < 1e-6);
}

TEST_CASE("potential slope at the ring matches the equilibrium bookkeeping") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const PotentialGradient g = potential_gradient(par, scalars_of(eq.state()));

  CHECK(rel_err(g.u, -eq.K) < 1e-12);
  CHECK(rel_err(g.dr, 3.0 * eq.K * eq.r0 / (eq.R * eq.R)) < 1e-12);
  CHECK(std::abs(g.dc1) < 1e-15 * eq.K);
  CHECK(std::abs(g.dc2) < 1e-15 * eq.K);
  CHECK(rel_err(g.dc3, eq.K) < 1e-12);
}

TEST_CASE("equilibrium point is critical for the effective energy") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  CHECK(critical_point_residual(par, eq) < 1e-12);
}

TEST_CASE("tampered multipliers surface in the expected components") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const State z = eq.state();
  const auto scales = residual_scales(par, eq);

  const auto scaled = [&](const EffectiveWeights& w) {
    const auto g = effective_gradient(par, w, z).flat();
    std::array<double, 12> out{};
    for (int i = 0; i < 12; ++i)
      out[static_cast<size_t>(i)] = std::abs(g[static_cast<size_t>(i)]) / scales[static_cast<size_t>(i)];
    return out;
  };

  SECTION("wrong rotation rate shows up in the orbital balance") {
    EffectiveWeights w;
    w.omega = eq.omega * 1.01;
    w.lambda2 = par.alpha() * eq.n0 - w.omega;
    w.lambda1 = eq.K + eq.n0 * w.lambda2;
    const auto r = scaled(w);
    CHECK(r[0] > 1e-4);  // radial force balance
    CHECK(r[4] > 1e-4);  // tangential velocity match
    for (int i : {1, 2, 3, 5, 6, 7, 8, 9, 10, 11}) {
      CHECK(r[static_cast<size_t>(i)] < 1e-12);
    }
  }

  SECTION("wrong axis multiplier shows up in the axis direction only") {
    EffectiveWeights w = weights_of(eq);
    w.lambda1 *= 1.01;
    const auto r = scaled(w);
    CHECK(r[8] > 1e-4);  // third axis component
    for (int i : {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11}) {
      CHECK(r[static_cast<size_t>(i)] < 1e-12);
    }
  }
}

TEST_CASE("effective gradient matches central differences at generic states") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const EffectiveWeights w = weights_of(eq);
  testutil::StateSampler smp(31);

  for (int trial = 0; trial < 20; ++trial) {
    const State s = smp.draw(par);
    const auto a = effective_gradient(par, w, s).flat();
    const auto f0 = s.flat();
    std::array<double, 12> steps{};
    for (int i = 0; i < 3; ++i) steps[static_cast<size_t>(i)] = 1e-7 * std::max(eq.r0, par.h);
    for (int i = 3; i < 6; ++i) steps[static_cast<size_t>(i)] = 1e-7 * eq.p0;
    for (int i = 6; i < 9; ++i) steps[static_cast<size_t>(i)] = 1e-7;
    for (int i = 9; i < 12; ++i)
      steps[static_cast<size_t>(i)] = 1e-7 * par.mass * eq.omega * eq.r0 * eq.r0;

    double char_scale = 0.0;
    for (int i = 0; i < 12; ++i)
      char_scale = std::max(char_scale, std::abs(a[static_cast<size_t>(i)]) * steps[static_cast<size_t>(i)]);
    for (int i = 0; i < 12; ++i) {
      auto zp = f0;
      auto zm = f0;
      zp[static_cast<size_t>(i)] += steps[static_cast<size_t>(i)];
      zm[static_cast<size_t>(i)] -= steps[static_cast<size_t>(i)];
      const double fd = (effective_hamiltonian(par, w, State::from_flat(zp)) -
                         effective_hamiltonian(par, w, State::from_flat(zm))) /
                        (2.0 * steps[static_cast<size_t>(i)]);
      const double denom = std::max({std::abs(a[static_cast<size_t>(i)]), std::abs(fd),
                                     0.01 * char_scale / steps[static_cast<size_t>(i)]});
      CHECK(std::abs(a[static_cast<size_t>(i)] - fd) < 1e-5 * denom);
    }
  }
}

TEST_CASE("flow at the equilibrium is a rigid rotation about the pole axis") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const State d = rhs_hamiltonian(par, eq.state());

  CHECK(std::abs(d.x.x) < 1e-14 * eq.omega * eq.r0);
  CHECK(rel_err(d.x.y, eq.omega * eq.r0) < 1e-12);
  CHECK(std::abs(d.x.z) < 1e-14 * eq.omega * eq.r0);
  CHECK(rel_err(d.p.x, -eq.omega * eq.p0) < 1e-12);
  CHECK(std::abs(d.p.y) < 1e-14 * eq.omega * eq.p0);
  CHECK(std::abs(d.p.z) < 1e-14 * eq.omega * eq.p0);
  CHECK(norm(d.nu) < 1e-14);
  CHECK(norm(d.n) < 1e-14 * eq.K);
}

TEST_CASE("orbit closes after one period") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const long steps = 2000;
  const Trajectory tr = integrate(par, eq.state(), eq.period() / steps, steps, {}, steps);
  REQUIRE_FALSE(tr.fault);
  const State& f = tr.s.back();
  CHECK(norm(f.x - eq.state().x) < 1e-9 * eq.r0);
  CHECK(norm(f.p - eq.state().p) < 1e-9 * eq.p0);
  CHECK(norm(f.nu - eq.state().nu) < 1e-12);
}

TEST_CASE("effective energy value decomposes as expected") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = reference_eq();
  const State z = eq.state();
  const double direct = effective_hamiltonian(par, weights_of(eq), z);
  const double pieces = total_energy(par, z) - eq.omega * angular_momentum_z(z) +
                        eq.lambda1 * casimir_nu(z) + eq.lambda2 * casimir_nu_n(z);
  CHECK(direct == Catch::Approx(pieces).epsilon(1e-14));
}

TEST_CASE("equilibrium construction rejects bad inputs") {
  const OrbitronParams par = testutil::reference_params();
  CHECK_THROWS_AS(make_equilibrium(par, 0.0, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(make_equilibrium(par, -0.1, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(make_equilibrium(par, 0.075, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}
