#ifndef ORBITRON_POTENTIAL_HPP
#define ORBITRON_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbitron/params.hpp"
#include "orbitron/state.hpp"
#include "orbitron/vec3.hpp"

namespace orbitron {

// The interaction energy U = -mu (nu, B(x)) depends on (x, nu) only through
// four scalars:
//   r  = |x|
//   c1 = x3 / r        (cosine of the polar angle)
//   c2 = (nu, x/r)     (axis projection on the radial direction)
//   c3 = nu3           (axis projection on the pole axis)
struct PotentialScalars {
  double r;
  double c1;
  double c2;
  double c3;
};

inline PotentialScalars scalars_of(const State& s) {
  const double r = norm(s.x);
  const Vec3 er = s.x / r;
  return {r, s.x.z / r, dot(s.nu, er), s.nu.z};
}

// Distance from x to the nearer pole; the guard radius for integration.
inline double min_pole_distance(const OrbitronParams& par, Vec3 x) {
  const double dp = norm(x - par.h * e_z);
  const double dm = norm(x + par.h * e_z);
  return std::min(dp, dm);
}

namespace detail {

// Distance to the pole at z = eps*h in the scalar variables:
// R_eps^2 = r^2 - 2 eps h r c1 + h^2.
inline double pole_distance(double h, double eps, double r, double c1) {
  return std::sqrt(r * r - 2.0 * eps * h * r * c1 + h * h);
}

// One pole's contribution before the -(lambda0/4pi)*eps prefactor:
// f_eps = (r c2 - eps h c3) / R_eps^3, and its partials in (r, c1, c2, c3).
struct PoleTerm {
  double f;
  double dr;
  double dc1;
  double dc2;
  double dc3;
};

inline PoleTerm pole_term(double h, double eps, const PotentialScalars& s) {
  const double R = pole_distance(h, eps, s.r, s.c1);
  const double R3 = R * R * R;
  const double R5 = R3 * R * R;
  const double num = s.r * s.c2 - eps * h * s.c3;
  PoleTerm t;
  t.f = num / R3;
  t.dr = s.c2 / R3 - 3.0 * num * (s.r - eps * h * s.c1) / R5;
  t.dc1 = 3.0 * num * eps * h * s.r / R5;
  t.dc2 = s.r / R3;
  t.dc3 = -eps * h / R3;
  return t;
}

}  // namespace detail

// U and its partial derivatives in the scalar variables.
struct PotentialGradient {
  double u;
  double dr;
  double dc1;
  double dc2;
  double dc3;
};

inline PotentialGradient potential_gradient(const OrbitronParams& par,
                                            const PotentialScalars& s) {
  const double pref = -par.lambda0() / (4.0 * std::numbers::pi);
  PotentialGradient g{0.0, 0.0, 0.0, 0.0, 0.0};
  for (double eps : {1.0, -1.0}) {
    const detail::PoleTerm t = detail::pole_term(par.h, eps, s);
    g.u += pref * eps * t.f;
    g.dr += pref * eps * t.dr;
    g.dc1 += pref * eps * t.dc1;
    g.dc2 += pref * eps * t.dc2;
    g.dc3 += pref * eps * t.dc3;
  }
  return g;
}

inline double potential_energy(const OrbitronParams& par, const PotentialScalars& s) {
  const double pref = -par.lambda0() / (4.0 * std::numbers::pi);
  double u = 0.0;
  for (double eps : {1.0, -1.0}) {
    u += pref * eps * detail::pole_term(par.h, eps, s).f;
  }
  return u;
}

inline double potential_energy(const OrbitronParams& par, const State& st) {
  return potential_energy(par, scalars_of(st));
}

// Total energy E = T + U; conserved by the flow.
inline double total_energy(const OrbitronParams& par, const State& st) {
  return kinetic_energy(par, st) + potential_energy(par, st);
}

}  // namespace orbitron

#endif
