#ifndef ORBITRON_TEST_HELPERS_HPP
#define ORBITRON_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "orbitron/equilibrium.hpp"
#include "orbitron/params.hpp"
#include "orbitron/potential.hpp"
#include "orbitron/state.hpp"

namespace testutil {

// Reference rig: NdFeB-like cylinder, poles 10 cm apart, orbit at 7.5 cm.
inline orbitron::MagnetSpec reference_magnet() {
  orbitron::MagnetSpec m;
  m.density = 7.4e3;
  m.remanence = 0.25;
  m.diameter = 0.014;
  m.height = 0.006;
  m.kappa = 17.6;
  m.half_gap = 0.05;
  return m;
}

inline orbitron::OrbitronParams reference_params() { return reference_magnet().to_params(); }

inline constexpr double ref_r0 = 0.075;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// Deterministic state generator covering the working region: radius in
// (0.3 h, 5 h), at least 0.3 h clear of both poles, momenta and angular
// momenta at orbital magnitudes.
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : eng_(seed) {}

  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double upm1() { return 2.0 * u01() - 1.0; }

  orbitron::Vec3 unit_vec() {
    for (;;) {
      const orbitron::Vec3 v{upm1(), upm1(), upm1()};
      const double n2 = orbitron::norm2(v);
      if (n2 > 0.01 && n2 < 1.0) return v / std::sqrt(n2);
    }
  }

  orbitron::State draw(const orbitron::OrbitronParams& par) {
    const double rc = 1.5 * par.h;
    const double om = orbitron::orbital_omega(par, rc);
    const double p_scale = par.mass * om * rc;
    const double n_scale = par.mass * om * rc * rc;
    for (;;) {
      const double r = (0.3 + 4.7 * u01()) * par.h;
      const orbitron::Vec3 x = r * unit_vec();
      if (orbitron::min_pole_distance(par, x) < 0.3 * par.h) continue;
      orbitron::State s;
      s.x = x;
      s.p = {p_scale * upm1(), p_scale * upm1(), p_scale * upm1()};
      s.nu = unit_vec();
      s.n = {n_scale * upm1(), n_scale * upm1(), n_scale * upm1()};
      return s;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace testutil

#endif
