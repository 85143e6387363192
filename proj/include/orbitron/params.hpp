#ifndef ORBITRON_PARAMS_HPP
#define ORBITRON_PARAMS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orbitron {

inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;  // vacuum permeability, T*m/A

// Physical inputs of the model. SI units everywhere.
//
// The moving body is a small axisymmetric rigid magnet (treated as a point
// dipole of moment mu along its symmetry axis); the environment is a pair of
// fixed opposite magnetic poles of strength +/-kappa at (0,0,+/-h).
//
// An aggregate of raw values; validate() is called at ingestion boundaries
// (config load, CLI), not in computational code, so degenerate values such as
// kappa = 0 remain usable in checks against closed-form free-space limits.
struct OrbitronParams {
  double mass = 0.0;     // kg
  double mu = 0.0;       // dipole moment magnitude, A*m^2
  double i_perp = 0.0;   // moment of inertia transverse to the symmetry axis, kg*m^2
  double i_axial = 0.0;  // moment of inertia about the symmetry axis, kg*m^2
  double kappa = 0.0;    // pole strength, A*m
  double h = 0.0;        // pole half-gap: poles sit at z = +/-h, m

  // 1 / i_perp; the transverse angular velocity per unit angular momentum.
  double alpha() const { return 1.0 / i_perp; }

  // Field-potential coupling mu0 * kappa * mu.
  double lambda0() const { return mu0 * kappa * mu; }

  void validate() const {
    auto req = [](bool ok, const char* msg) {
      if (!ok) throw std::invalid_argument(std::string("params: ") + msg);
    };
    req(std::isfinite(mass) && mass > 0.0, "mass must be positive");
    req(std::isfinite(mu) && mu > 0.0, "mu must be positive");
    req(std::isfinite(i_perp) && i_perp > 0.0, "i_perp must be positive");
    req(std::isfinite(i_axial) && i_axial > 0.0, "i_axial must be positive");
    req(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
    req(std::isfinite(h) && h > 0.0, "h must be positive");
  }
};

// Fabrication-level description of a cylindrical magnet; derives the dynamical
// parameters from material density, remanent field and geometry.
struct MagnetSpec {
  double density = 0.0;    // kg/m^3
  double remanence = 0.0;  // T
  double diameter = 0.0;   // m
  double height = 0.0;     // m  (cylinder height = symmetry-axis extent)
  double kappa = 0.0;      // pole strength of the fixed poles, A*m
  double half_gap = 0.0;   // m

  void validate() const {
    auto req = [](bool ok, const char* msg) {
      if (!ok) throw std::invalid_argument(std::string("magnet: ") + msg);
    };
    req(std::isfinite(density) && density > 0.0, "density must be positive");
    req(std::isfinite(remanence) && remanence > 0.0, "remanence must be positive");
    req(std::isfinite(diameter) && diameter > 0.0, "diameter must be positive");
    req(std::isfinite(height) && height > 0.0, "height must be positive");
    req(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
    req(std::isfinite(half_gap) && half_gap > 0.0, "half_gap must be positive");
  }

  double volume() const {
    const double r = 0.5 * diameter;
    return std::numbers::pi * r * r * height;
  }

  OrbitronParams to_params() const {
    validate();
    const double v = volume();
    const double m = density * v;
    const double r = 0.5 * diameter;
    OrbitronParams p;
    p.mass = m;
    p.mu = remanence * v / mu0;  // uniformly magnetized cylinder
    // solid cylinder about transverse / axial principal axes
    p.i_perp = m * (3.0 * r * r + height * height) / 12.0;
    p.i_axial = 0.5 * m * r * r;
    p.kappa = kappa;
    p.h = half_gap;
    return p;
  }
};

}  // namespace orbitron

#endif
