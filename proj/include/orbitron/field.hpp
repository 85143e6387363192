#ifndef ORBITRON_FIELD_HPP
#define ORBITRON_FIELD_HPP

#include <cmath>
#include <numbers>

#include "orbitron/params.hpp"
#include "orbitron/vec3.hpp"

namespace orbitron {

// Magnetostatic field of the two fixed poles: strength +kappa at (0,0,+h),
// -kappa at (0,0,-h).  B(x) = (mu0 kappa / 4pi) sum_eps eps * s_eps / |s_eps|^3
// with s_eps = x - eps h e_z.  Divergence-free away from the poles.
inline Vec3 field_at(const OrbitronParams& par, Vec3 x) {
  const double pref = mu0 * par.kappa / (4.0 * std::numbers::pi);
  Vec3 b{};
  for (double eps : {1.0, -1.0}) {
    const Vec3 s = x - eps * par.h * e_z;
    const double r3 = std::pow(norm2(s), 1.5);
    b += (eps * pref / r3) * s;
  }
  return b;
}

}  // namespace orbitron

#endif
