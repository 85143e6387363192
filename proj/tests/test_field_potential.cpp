#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "orbitron/equilibrium.hpp"
#include "orbitron/field.hpp"
#include "orbitron/potential.hpp"
#include "test_helpers.hpp"

using namespace orbitron;
using testutil::rel_err;

TEST_CASE("field at the center points down the pole axis") {
  const OrbitronParams par = testutil::reference_params();
  const Vec3 b = field_at(par, {0.0, 0.0, 0.0});
  // mu0 kappa / (2 pi h^2) with the chosen reference values is exactly 1.408 mT
  CHECK(std::abs(b.x) < 1e-20);
  CHECK(std::abs(b.y) < 1e-20);
  CHECK(rel_err(b.z, -1.408e-3) < 1e-12);
}

TEST_CASE("field respects the pole-swap mirror symmetry") {
  const OrbitronParams par = testutil::reference_params();
  testutil::StateSampler smp(11);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x = smp.draw(par).x;
    const Vec3 b = field_at(par, x);
    const Vec3 bm = field_at(par, {x.x, x.y, -x.z});
    const double scale = norm(b);
    CHECK(std::abs(bm.x + b.x) < 1e-13 * scale);
    CHECK(std::abs(bm.y + b.y) < 1e-13 * scale);
    CHECK(std::abs(bm.z - b.z) < 1e-13 * scale);
  }
}

TEST_CASE("field is divergence-free away from the poles") {
  const OrbitronParams par = testutil::reference_params();
  testutil::StateSampler smp(12);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = smp.draw(par).x;
    const double step = 1e-6 * par.h;
    double div = 0.0;
    const Vec3 axes[3] = {e_x, e_y, e_z};
    const auto comp = [](Vec3 v, int k) { return k == 0 ? v.x : (k == 1 ? v.y : v.z); };
    double grad_scale = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double d =
          (comp(field_at(par, x + step * axes[k]), k) -
           comp(field_at(par, x - step * axes[k]), k)) / (2.0 * step);
      div += d;
      grad_scale = std::max(grad_scale, std::abs(d));
    }
    CHECK(std::abs(div) < 1e-6 * std::max(grad_scale, norm(field_at(par, x)) / par.h));
  }
}

TEST_CASE("far field approaches a point dipole of moment 2 kappa h") {
  const OrbitronParams par = testutil::reference_params();
  const double m_eq = 2.0 * par.kappa * par.h;
  testutil::StateSampler smp(13);
  for (int i = 0; i < 20; ++i) {
    const Vec3 dir = smp.unit_vec();
    const Vec3 x = (100.0 * par.h) * dir;
    const Vec3 b = field_at(par, x);
    const double r = norm(x);
    const Vec3 er = x / r;
    const Vec3 m = m_eq * e_z;
    const Vec3 b_dip = (mu0 / (4.0 * std::numbers::pi)) *
                       (3.0 * dot(m, er) * er - m) / (r * r * r);
    CHECK(norm(b - b_dip) < 1e-3 * norm(b_dip));
  }
}

TEST_CASE("interaction energy equals minus the moment against the field") {
  const OrbitronParams par = testutil::reference_params();
  testutil::StateSampler smp(14);
  for (int i = 0; i < 200; ++i) {
    const State s = smp.draw(par);
    const double u = potential_energy(par, s);
    const double u_field = -par.mu * dot(s.nu, field_at(par, s.x));
    const double scale = std::max(std::abs(u), par.mu * norm(field_at(par, s.x)));
    CHECK(std::abs(u - u_field) <= 1e-12 * scale);
  }
}

namespace {

// central-difference partials of the potential in its four scalar arguments
PotentialGradient fd_gradient(const OrbitronParams& par, const PotentialScalars& s) {
  PotentialGradient g{potential_energy(par, s), 0.0, 0.0, 0.0, 0.0};
  const double hr = 1e-6 * std::max(s.r, par.h);
  const double hc = 1e-6;
  auto at = [&](double r, double c1, double c2, double c3) {
    return potential_energy(par, PotentialScalars{r, c1, c2, c3});
  };
  g.dr = (at(s.r + hr, s.c1, s.c2, s.c3) - at(s.r - hr, s.c1, s.c2, s.c3)) / (2.0 * hr);
  g.dc1 = (at(s.r, s.c1 + hc, s.c2, s.c3) - at(s.r, s.c1 - hc, s.c2, s.c3)) / (2.0 * hc);
  g.dc2 = (at(s.r, s.c1, s.c2 + hc, s.c3) - at(s.r, s.c1, s.c2 - hc, s.c3)) / (2.0 * hc);
  g.dc3 = (at(s.r, s.c1, s.c2, s.c3 + hc) - at(s.r, s.c1, s.c2, s.c3 - hc)) / (2.0 * hc);
  return g;
}

// characteristic magnitude of each partial: the same sum with every pole
// contribution taken in absolute value (immune to cancellation)
PotentialGradient gradient_magnitudes(const OrbitronParams& par, const PotentialScalars& s) {
  const double pref = par.lambda0() / (4.0 * std::numbers::pi);
  PotentialGradient m{0.0, 0.0, 0.0, 0.0, 0.0};
  for (double eps : {1.0, -1.0}) {
    const detail::PoleTerm t = detail::pole_term(par.h, eps, s);
    m.u += pref * std::abs(t.f);
    m.dr += pref * std::abs(t.dr);
    m.dc1 += pref * std::abs(t.dc1);
    m.dc2 += pref * std::abs(t.dc2);
    m.dc3 += pref * std::abs(t.dc3);
  }
  return m;
}

}  // namespace

TEST_CASE("analytic scalar gradient matches central differences") {
  const OrbitronParams par = testutil::reference_params();
  testutil::StateSampler smp(15);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PotentialScalars sc = scalars_of(smp.draw(par));
    const PotentialGradient a = potential_gradient(par, sc);
    const PotentialGradient f = fd_gradient(par, sc);
    const PotentialGradient m = gradient_magnitudes(par, sc);
    const double pairs[4][3] = {{a.dr, f.dr, m.dr},
                                {a.dc1, f.dc1, m.dc1},
                                {a.dc2, f.dc2, m.dc2},
                                {a.dc3, f.dc3, m.dc3}};
    for (const auto& pr : pairs) {
      const double denom = std::max({std::abs(pr[0]), std::abs(pr[1]), 0.01 * pr[2]});
      worst = std::max(worst, std::abs(pr[0] - pr[1]) / denom);
    }
  }
  INFO("worst scaled gradient deviation: " << worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("single-pole slope in the polar cosine at the equatorial ring") {
  const OrbitronParams par = testutil::reference_params();
  const double r = testutil::ref_r0;
  const double h = par.h;
  // on the ring: c1 = 0, c2 = 0, c3 = -1
  const PotentialScalars sc{r, 0.0, 0.0, -1.0};
  const double R5 = std::pow(r * r + h * h, 2.5);
  for (double eps : {1.0, -1.0}) {
    const detail::PoleTerm t = detail::pole_term(h, eps, sc);
    CHECK(rel_err(t.dc1, 3.0 * h * h * r / R5) < 1e-12);
  }
}

TEST_CASE("potential is odd under the mirror and under axis reversal") {
  const OrbitronParams par = testutil::reference_params();
  testutil::StateSampler smp(16);
  for (int i = 0; i < 100; ++i) {
    const PotentialScalars sc = scalars_of(smp.draw(par));
    const double u = potential_energy(par, sc);
    // z-mirror flips c1 and c3
    const double u_mirror =
        potential_energy(par, PotentialScalars{sc.r, -sc.c1, sc.c2, -sc.c3});
    // axis reversal flips c2 and c3; U is linear in the axis direction
    const double u_flip =
        potential_energy(par, PotentialScalars{sc.r, sc.c1, -sc.c2, -sc.c3});
    const double scale = gradient_magnitudes(par, sc).u;
    CHECK(std::abs(u_mirror + u) < 1e-13 * scale);
    CHECK(std::abs(u_flip + u) < 1e-13 * scale);
  }
}

TEST_CASE("potential on the equatorial ring equals minus the coupling scale") {
  const OrbitronParams par = testutil::reference_params();
  const RelativeEquilibrium eq = make_equilibrium(par, testutil::ref_r0, 1e-5);
  CHECK(rel_err(potential_energy(par, eq.state()), -eq.K) < 1e-12);
}

TEST_CASE("distance to the nearer pole") {
  const OrbitronParams par = testutil::reference_params();
  CHECK(min_pole_distance(par, {0.0, 0.0, 0.0}) == Catch::Approx(par.h));
  CHECK(min_pole_distance(par, {0.0, 0.0, 0.04}) == Catch::Approx(0.01));
  CHECK(min_pole_distance(par, {0.0, 0.0, -0.04}) == Catch::Approx(0.01));
  CHECK(min_pole_distance(par, {0.03, 0.0, 0.05}) == Catch::Approx(0.03));
}
