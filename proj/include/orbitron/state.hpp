#ifndef ORBITRON_STATE_HPP
#define ORBITRON_STATE_HPP

#include <array>
#include <cmath>

#include "orbitron/params.hpp"
#include "orbitron/vec3.hpp"

namespace orbitron {

// Phase-space point (x, p, nu, n):
//   x  - position of the magnet's center, m
//   p  - linear momentum, kg*m/s
//   nu - unit vector along the magnet's symmetry axis
//   n  - angular momentum in the body-relevant split, kg*m^2/s
// Flat 12-vector layout [x, p, nu, n] is used by the integrator.
struct State {
  Vec3 x;
  Vec3 p;
  Vec3 nu;
  Vec3 n;

  std::array<double, 12> flat() const {
    return {x.x, x.y, x.z, p.x, p.y, p.z, nu.x, nu.y, nu.z, n.x, n.y, n.z};
  }

  static State from_flat(const std::array<double, 12>& f) {
    return {{f[0], f[1], f[2]}, {f[3], f[4], f[5]}, {f[6], f[7], f[8]}, {f[9], f[10], f[11]}};
  }
};

inline bool is_finite(const State& s) {
  return is_finite(s.x) && is_finite(s.p) && is_finite(s.nu) && is_finite(s.n);
}

// Kinetic energy p^2/(2M) + (alpha/2) n^2.
inline double kinetic_energy(const OrbitronParams& par, const State& s) {
  return norm2(s.p) / (2.0 * par.mass) + 0.5 * par.alpha() * norm2(s.n);
}

// Vertical component of total angular momentum: x1 p2 - x2 p1 + n3.
inline double angular_momentum_z(const State& s) {
  return s.x.x * s.p.y - s.x.y * s.p.x + s.n.z;
}

// Conserved by the flow regardless of the potential:
// casimir_nu = nu^2 / 2, casimir_nu_n = (nu, n).
inline double casimir_nu(const State& s) { return 0.5 * norm2(s.nu); }
inline double casimir_nu_n(const State& s) { return dot(s.nu, s.n); }

}  // namespace orbitron

#endif
