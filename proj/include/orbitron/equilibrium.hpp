#ifndef ORBITRON_EQUILIBRIUM_HPP
#define ORBITRON_EQUILIBRIUM_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "orbitron/potential.hpp"
#include "orbitron/state.hpp"

namespace orbitron {

// Force/energy scale of the pole pair on the circle of radius r0 in the
// equatorial plane: K = lambda0 h / (2 pi R^3), R^2 = r0^2 + h^2.
inline double coupling_k(const OrbitronParams& par, double r0) {
  const double R = std::hypot(r0, par.h);
  return par.lambda0() * par.h / (2.0 * std::numbers::pi * R * R * R);
}

// Angular velocity of the circular orbit at radius r0: M omega^2 = 3K/R^2.
inline double orbital_omega(const OrbitronParams& par, double r0) {
  const double R2 = r0 * r0 + par.h * par.h;
  return std::sqrt(3.0 * coupling_k(par, r0) / (par.mass * R2));
}

// Steady circular motion in the equatorial plane: the magnet orbits at radius
// r0 with its axis pinned antiparallel to the pole axis and spins about it
// with axial angular momentum n0.  lambda1, lambda2 are the multipliers that
// make this a critical point of the constrained energy below.
struct RelativeEquilibrium {
  double r0 = 0.0;
  double n0 = 0.0;
  double R = 0.0;        // sqrt(r0^2 + h^2)
  double K = 0.0;        // coupling_k(par, r0)
  double omega = 0.0;    // orbital angular velocity
  double p0 = 0.0;       // momentum magnitude M omega r0
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  double period() const { return 2.0 * std::numbers::pi / omega; }

  // The phase-space point: x = r0 e1, p = p0 e2, nu = -e3, n = n0 e3.
  State state() const {
    return {{r0, 0.0, 0.0}, {0.0, p0, 0.0}, {0.0, 0.0, -1.0}, {0.0, 0.0, n0}};
  }
};

inline RelativeEquilibrium make_equilibrium(const OrbitronParams& par,
                                            double r0, double n0) {
  if (!(std::isfinite(r0) && r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (!std::isfinite(n0)) throw std::invalid_argument("n0 must be finite");
  RelativeEquilibrium eq;
  eq.r0 = r0;
  eq.n0 = n0;
  eq.R = std::hypot(r0, par.h);
  eq.K = coupling_k(par, r0);
  eq.omega = orbital_omega(par, r0);
  eq.p0 = par.mass * eq.omega * r0;
  eq.lambda2 = par.alpha() * n0 - eq.omega;
  eq.lambda1 = eq.K + n0 * eq.lambda2;
  return eq;
}

// Weights of the conserved quantities folded into the effective energy
// H_eff = T + U - omega j3 + lambda1 (nu^2/2) + lambda2 (nu, n).
struct EffectiveWeights {
  double omega = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

inline EffectiveWeights weights_of(const RelativeEquilibrium& eq) {
  return {eq.omega, eq.lambda1, eq.lambda2};
}

inline double effective_hamiltonian(const OrbitronParams& par,
                                    const EffectiveWeights& w, const State& s) {
  return kinetic_energy(par, s) + potential_energy(par, s) -
         w.omega * angular_momentum_z(s) + w.lambda1 * casimir_nu(s) +
         w.lambda2 * casimir_nu_n(s);
}

// Exact gradient of H_eff in the flat (x, p, nu, n) coordinates.
inline State effective_gradient(const OrbitronParams& par,
                                const EffectiveWeights& w, const State& s) {
  const PotentialScalars sc = scalars_of(s);
  const PotentialGradient g = potential_gradient(par, sc);
  const Vec3 er = s.x / sc.r;
  const auto perp = [&er](Vec3 v) { return v - dot(v, er) * er; };

  State d;
  d.x = g.dr * er + (1.0 / sc.r) * (g.dc1 * perp(e_z) + g.dc2 * perp(s.nu)) -
        w.omega * Vec3{s.p.y, -s.p.x, 0.0};
  d.p = s.p / par.mass - w.omega * Vec3{-s.x.y, s.x.x, 0.0};
  d.nu = g.dc2 * er + g.dc3 * e_z + w.lambda1 * s.nu + w.lambda2 * s.n;
  d.n = par.alpha() * s.n - w.omega * e_z + w.lambda2 * s.nu;
  return d;
}

// Per-component magnitudes used to nondimensionalize the gradient residual.
inline std::array<double, 12> residual_scales(const OrbitronParams& par,
                                              const RelativeEquilibrium& eq) {
  const double fx = par.mass * eq.omega * eq.omega * eq.r0;  // centripetal force
  const double vp = eq.omega * eq.r0;                        // orbital speed
  const double fnu = std::max({std::abs(eq.lambda1),
                               std::abs(eq.lambda2 * eq.n0), eq.K});
  const double fn = std::max({par.alpha() * std::abs(eq.n0), eq.omega,
                              std::abs(eq.lambda2)});
  return {fx, fx, fx, vp, vp, vp, fnu, fnu, fnu, fn, fn, fn};
}

// Scaled max-norm of grad H_eff at the equilibrium point; ~1e-15 when the
// multipliers are consistent, O(perturbation) otherwise.
inline double critical_point_residual(const OrbitronParams& par,
                                      const RelativeEquilibrium& eq) {
  const State g = effective_gradient(par, weights_of(eq), eq.state());
  const std::array<double, 12> gf = g.flat();
  const std::array<double, 12> sc = residual_scales(par, eq);
  double worst = 0.0;
  for (int i = 0; i < 12; ++i) worst = std::max(worst, std::abs(gf[i]) / sc[i]);
  return worst;
}

}  // namespace orbitron

#endif
