#ifndef ORBITRON_STABILITY_HPP
#define ORBITRON_STABILITY_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "orbitron/equilibrium.hpp"

namespace orbitron {

using Mat8 = std::array<std::array<double, 8>, 8>;

// Quadratic form of the second variation of H_eff at the equilibrium,
// restricted to the 8 admissible variations (the constraint and symmetry
// directions removed).  Basis order:
//   dx1, dx2, dp3, dx3, dnu1, dn1, dnu2, dn2
// Block-diagonal with blocks {0}, {1}, {2}, {3,4,5}, {6,7}.
inline Mat8 build_q(const OrbitronParams& par, const RelativeEquilibrium& eq) {
  const double h = par.h;
  const double r0 = eq.r0;
  const double R2 = eq.R * eq.R;
  const double k3 = 3.0 * eq.K / R2;  // = M omega^2

  Mat8 q{};
  q[0][0] = k3 * (4.0 * h * h - r0 * r0) / R2;
  q[1][1] = 4.0 * k3;  // 12 K / R^2
  q[2][2] = 1.0 / par.mass;
  q[3][3] = k3 * (3.0 * r0 * r0 - 2.0 * h * h) / R2;
  q[3][4] = q[4][3] = -3.0 * eq.K * r0 / R2;
  q[4][4] = eq.lambda1;
  q[4][5] = q[5][4] = eq.lambda2;
  q[5][5] = par.alpha();
  q[6][6] = eq.lambda1;
  q[6][7] = q[7][6] = eq.lambda2;
  q[7][7] = par.alpha();
  return q;
}

// Columns are the admissible variation directions expressed in the flat
// 12-coordinate tangent space.  The in-plane momentum variations are slaved
// to the position ones (dp1 = c dx2, dp2 = -c dx1, c = p0/r0), which removes
// the rotational zero mode and the drift directions.
inline std::array<std::array<double, 8>, 12> embedding_matrix(const RelativeEquilibrium& eq) {
  const double c = eq.p0 / eq.r0;
  std::array<std::array<double, 8>, 12> b{};
  b[0][0] = 1.0;   // x1   <- dx1
  b[1][1] = 1.0;   // x2   <- dx2
  b[2][3] = 1.0;   // x3   <- dx3
  b[3][1] = c;     // p1   <- c dx2
  b[4][0] = -c;    // p2   <- -c dx1
  b[5][2] = 1.0;   // p3   <- dp3
  b[6][4] = 1.0;   // nu1  <- dnu1
  b[7][6] = 1.0;   // nu2  <- dnu2
  b[9][5] = 1.0;   // n1   <- dn1
  b[10][7] = 1.0;  // n2   <- dn2
  return b;
}

namespace detail {

// Second derivative of H_eff along flat coordinates i, j at the equilibrium
// point, by central differences with steps hi, hj (scaled by `scale`).
inline double second_difference(const OrbitronParams& par, const EffectiveWeights& w,
                                const State& z0, int i, int j,
                                double hi, double hj, double scale) {
  const auto f = [&](int a, double da, int b, double db) {
    std::array<double, 12> z = z0.flat();
    z[static_cast<size_t>(a)] += da;
    z[static_cast<size_t>(b)] += db;
    return effective_hamiltonian(par, w, State::from_flat(z));
  };
  const double si = hi * scale;
  const double sj = hj * scale;
  if (i == j) {
    const double f0 = effective_hamiltonian(par, w, z0);
    return (f(i, si, i, 0.0) - 2.0 * f0 + f(i, -si, i, 0.0)) / (si * si);
  }
  return (f(i, si, j, sj) - f(i, si, j, -sj) - f(i, -si, j, sj) + f(i, -si, j, -sj)) /
         (4.0 * si * sj);
}

}  // namespace detail

// Independent check of build_q: full 12x12 second-difference Hessian of H_eff
// at the equilibrium, projected onto the admissible variations.
//
// H_eff is exactly quadratic in (p, nu, n), so those entries need one central
// difference at a comfortable step.  Entries involving a position direction
// carry O(step^2) truncation error; a four-level step-halving ladder with
// Richardson extrapolation removes it while the large base step keeps
// rounding noise down.
inline Mat8 projected_hessian_fd(const OrbitronParams& par, const RelativeEquilibrium& eq) {
  const EffectiveWeights w = weights_of(eq);
  const State z0 = eq.state();
  const double lsc = std::max(eq.r0, par.h);

  std::array<double, 12> step{};
  for (int i = 0; i < 3; ++i) step[static_cast<size_t>(i)] = 0.1 * lsc;
  for (int i = 3; i < 6; ++i)
    step[static_cast<size_t>(i)] = 0.1 * std::max(eq.p0, par.mass * eq.omega * lsc);
  for (int i = 6; i < 9; ++i) step[static_cast<size_t>(i)] = 0.1;
  for (int i = 9; i < 12; ++i)
    step[static_cast<size_t>(i)] = 0.1 * std::max(std::abs(eq.n0), par.mass * eq.omega * eq.r0 * eq.r0);

  std::array<std::array<double, 12>, 12> hess{};
  for (int i = 0; i < 12; ++i) {
    for (int j = i; j < 12; ++j) {
      double value;
      if (i < 3 || j < 3) {
        constexpr int levels = 4;
        std::array<double, levels> ladder{};
        for (int k = 0; k < levels; ++k) {
          ladder[static_cast<size_t>(k)] = detail::second_difference(
              par, w, z0, i, j, step[static_cast<size_t>(i)], step[static_cast<size_t>(j)],
              std::ldexp(1.0, -k));
        }
        for (int m = 1; m < levels; ++m) {
          const double p4 = std::ldexp(1.0, 2 * m);  // 4^m
          for (int k = 0; k + m < levels; ++k) {
            ladder[static_cast<size_t>(k)] =
                (p4 * ladder[static_cast<size_t>(k + 1)] - ladder[static_cast<size_t>(k)]) /
                (p4 - 1.0);
          }
        }
        value = ladder[0];
      } else {
        value = detail::second_difference(par, w, z0, i, j, step[static_cast<size_t>(i)],
                                          step[static_cast<size_t>(j)], 1.0);
      }
      hess[static_cast<size_t>(i)][static_cast<size_t>(j)] = value;
      hess[static_cast<size_t>(j)][static_cast<size_t>(i)] = value;
    }
  }

  const auto b = embedding_matrix(eq);
  Mat8 q{};
  for (int a = 0; a < 8; ++a) {
    for (int c = 0; c < 8; ++c) {
      double acc = 0.0;
      for (int i = 0; i < 12; ++i) {
        if (b[static_cast<size_t>(i)][static_cast<size_t>(a)] == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < 12; ++j) {
          inner += hess[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                   b[static_cast<size_t>(j)][static_cast<size_t>(c)];
        }
        acc += b[static_cast<size_t>(i)][static_cast<size_t>(a)] * inner;
      }
      q[static_cast<size_t>(a)][static_cast<size_t>(c)] = acc;
    }
  }
  return q;
}

// Strict positive definiteness of the quadratic form, checked per diagonal
// block (the form's sparsity pattern; off-block entries are not inspected).
// A block passes when every leading principal minor clears a relative floor
// set by the block's Frobenius norm.
inline bool positive_definite(const Mat8& m) {
  constexpr double tol = 1e-12;
  constexpr std::array<std::array<int, 3>, 5> blocks{{
      {0, -1, -1}, {1, -1, -1}, {2, -1, -1}, {3, 4, 5}, {6, 7, -1}}};
  for (const auto& blk : blocks) {
    int idx[3];
    int nb = 0;
    for (int v : blk)
      if (v >= 0) idx[nb++] = v;
    double fro = 0.0;
    for (int a = 0; a < nb; ++a)
      for (int c = 0; c < nb; ++c) {
        const double e = m[static_cast<size_t>(idx[a])][static_cast<size_t>(idx[c])];
        fro += e * e;
      }
    fro = std::sqrt(fro);
    const double floor1 = tol * fro;
    // leading principal minors, sizes 1..nb
    double sub[3][3] = {};
    for (int a = 0; a < nb; ++a)
      for (int c = 0; c < nb; ++c)
        sub[a][c] = m[static_cast<size_t>(idx[a])][static_cast<size_t>(idx[c])];
    double minor1 = sub[0][0];
    if (!(minor1 > floor1)) return false;
    if (nb >= 2) {
      const double minor2 = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0];
      if (!(minor2 > floor1 * floor1)) return false;
    }
    if (nb >= 3) {
      const double minor3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                            sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                            sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
      if (!(minor3 > floor1 * floor1 * floor1)) return false;
    }
  }
  return true;
}

// Closed-form stability test equivalent to positive definiteness of the
// quadratic form.
//   geometric: sqrt(2/3) < r0/h < 2   (the two single-entry position blocks)
//   dynamic:   (omega/alpha) (alpha n0 - omega) > K / D,
//              D = (3/2)(r0/h)^2 - 1  (the coupled axis blocks)
// min_n0 is the smallest axial angular momentum satisfying the dynamic
// condition at this radius; NaN where D <= 0 (no spin can stabilize).
struct StabilityConditions {
  double r0_over_h = 0.0;
  double d_factor = 0.0;
  bool geometric_ok = false;
  double dynamic_lhs = 0.0;
  double dynamic_rhs = std::numeric_limits<double>::quiet_NaN();
  bool dynamic_ok = false;
  double min_n0 = std::numeric_limits<double>::quiet_NaN();
  bool stable = false;
};

inline StabilityConditions stability_conditions(const OrbitronParams& par,
                                                const RelativeEquilibrium& eq) {
  StabilityConditions c;
  c.r0_over_h = eq.r0 / par.h;
  c.d_factor = 1.5 * c.r0_over_h * c.r0_over_h - 1.0;
  c.geometric_ok = c.d_factor > 0.0 && c.r0_over_h < 2.0;
  c.dynamic_lhs = eq.omega * eq.lambda2 / par.alpha();
  if (c.d_factor > 0.0) {
    c.dynamic_rhs = eq.K / c.d_factor;
    c.min_n0 = eq.omega / par.alpha() + eq.K / (c.d_factor * eq.omega);
    c.dynamic_ok = c.dynamic_lhs > c.dynamic_rhs;
  }
  c.stable = c.geometric_ok && c.dynamic_ok;
  return c;
}

// Smallest axial angular momentum that stabilizes the orbit at radius r0.
inline double min_axis_momentum(const OrbitronParams& par, double r0) {
  const RelativeEquilibrium eq = make_equilibrium(par, r0, 0.0);
  const StabilityConditions c = stability_conditions(par, eq);
  if (!(c.d_factor > 0.0)) {
    throw std::domain_error("no spin stabilizes r0/h <= sqrt(2/3)");
  }
  return c.min_n0;
}

// The same threshold as a spin rate about the symmetry axis, rad/s.
inline double min_spin_rate(const OrbitronParams& par, double r0) {
  return min_axis_momentum(par, r0) / par.i_axial;
}

}  // namespace orbitron

#endif
