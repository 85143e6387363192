#ifndef ORBITRON_DYNAMICS_HPP
#define ORBITRON_DYNAMICS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "orbitron/field.hpp"
#include "orbitron/potential.hpp"
#include "orbitron/state.hpp"

namespace orbitron {

// Evaluating the right-hand side closer than this fraction of h to either
// pole raises std::domain_error; the 1/R^3 terms are meaningless there.
inline constexpr double pole_guard_fraction = 1e-3;

namespace detail {

inline void check_pole_guard(const OrbitronParams& par, Vec3 x) {
  if (min_pole_distance(par, x) < pole_guard_fraction * par.h) {
    throw std::domain_error("state within guard radius of a pole");
  }
}

inline State axpy(const State& a, double c, const State& b) {
  return {a.x + c * b.x, a.p + c * b.p, a.nu + c * b.nu, a.n + c * b.n};
}

}  // namespace detail

// Equations of motion from the Hamiltonian H = T + U with U expressed in the
// scalar variables (r, c1, c2, c3); the force enters through the chain rule.
inline State rhs_hamiltonian(const OrbitronParams& par, const State& s) {
  detail::check_pole_guard(par, s.x);
  const PotentialScalars sc = scalars_of(s);
  const PotentialGradient g = potential_gradient(par, sc);
  const Vec3 er = s.x / sc.r;
  const auto perp = [&er](Vec3 v) { return v - dot(v, er) * er; };

  State d;
  d.x = s.p / par.mass;
  d.p = -(g.dr * er) - (1.0 / sc.r) * (g.dc1 * perp(e_z) + g.dc2 * perp(s.nu));
  d.nu = par.alpha() * cross(s.n, s.nu);
  d.n = -cross(s.nu, g.dc2 * er + g.dc3 * e_z);
  return d;
}

// Same dynamics written directly against the pole field: force as the
// gradient of (mu nu, B) summed per pole, torque as mu nu x B.
inline State rhs_classical(const OrbitronParams& par, const State& s) {
  detail::check_pole_guard(par, s.x);
  const double pref = par.lambda0() / (4.0 * std::numbers::pi);

  State d;
  d.x = s.p / par.mass;
  d.p = Vec3{};
  for (double eps : {1.0, -1.0}) {
    const Vec3 se = s.x - eps * par.h * e_z;
    const double R2 = norm2(se);
    const double R3 = std::pow(R2, 1.5);
    const double R5 = R3 * R2;
    d.p += (eps * pref) * (s.nu / R3 - (3.0 * dot(s.nu, se) / R5) * se);
  }
  d.nu = par.alpha() * cross(s.n, s.nu);
  d.n = par.mu * cross(s.nu, field_at(par, s.x));
  return d;
}

enum class RhsForm { hamiltonian, classical };

inline State eval_rhs(const OrbitronParams& par, const State& s, RhsForm form) {
  return form == RhsForm::hamiltonian ? rhs_hamiltonian(par, s) : rhs_classical(par, s);
}

// Classical fourth-order Runge-Kutta step.
inline State rk4_step(const OrbitronParams& par, const State& s, double dt, RhsForm form) {
  const State k1 = eval_rhs(par, s, form);
  const State k2 = eval_rhs(par, detail::axpy(s, 0.5 * dt, k1), form);
  const State k3 = eval_rhs(par, detail::axpy(s, 0.5 * dt, k2), form);
  const State k4 = eval_rhs(par, detail::axpy(s, dt, k3), form);
  State out = s;
  out = detail::axpy(out, dt / 6.0, k1);
  out = detail::axpy(out, dt / 3.0, k2);
  out = detail::axpy(out, dt / 3.0, k3);
  out = detail::axpy(out, dt / 6.0, k4);
  return out;
}

struct IntegrateOptions {
  // Project (nu, n) back onto the constraint set after every step:
  // nu to unit length, n so that (nu, n) keeps its initial value.
  bool renormalize = true;
  RhsForm form = RhsForm::hamiltonian;
};

// Fixed-step trajectory. On a mid-run fault (guard trip or non-finite state)
// the partial trajectory up to the last good step is kept and `fault` is set.
struct Trajectory {
  std::vector<double> t;
  std::vector<State> s;
  bool fault = false;
  double t_fault = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void validate_initial(const OrbitronParams& par, State& s0,
                             double dt, long nsteps, const IntegrateOptions& opt) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (nsteps < 1) throw std::invalid_argument("nsteps must be >= 1");
  if (!is_finite(s0)) throw std::invalid_argument("initial state must be finite");
  const double nn = norm(s0.nu);
  if (opt.renormalize) {
    if (nn == 0.0) throw std::invalid_argument("initial nu must be nonzero");
    s0.nu = s0.nu / nn;
  } else if (std::abs(nn - 1.0) > 1e-9) {
    throw std::invalid_argument("initial nu must be a unit vector");
  }
  check_pole_guard(par, s0.x);  // initial violation is a caller error
}

}  // namespace detail

// Advance nsteps of size dt from s0, invoking obs(step, t, state) at step 0
// and after every accepted step. Returns false if the run faulted (obs is not
// called for the faulted step).
template <class Observer>
bool integrate_observe(const OrbitronParams& par, State s0, double dt, long nsteps,
                       const IntegrateOptions& opt, Observer&& obs) {
  detail::validate_initial(par, s0, dt, nsteps, opt);
  const double c0 = casimir_nu_n(s0);
  obs(long{0}, 0.0, s0);
  State s = s0;
  for (long k = 1; k <= nsteps; ++k) {
    State next;
    try {
      next = rk4_step(par, s, dt, opt.form);
    } catch (const std::domain_error&) {
      return false;
    }
    if (!is_finite(next)) return false;
    if (opt.renormalize) {
      next.nu = normalized(next.nu);
      next.n = next.n + (c0 - dot(next.n, next.nu)) * next.nu;
    }
    s = next;
    obs(k, k * dt, s);
  }
  return true;
}

inline Trajectory integrate(const OrbitronParams& par, const State& s0, double dt,
                            long nsteps, const IntegrateOptions& opt = {},
                            long record_stride = 1) {
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  Trajectory tr;
  tr.t.reserve(static_cast<size_t>(nsteps / record_stride) + 2);
  tr.s.reserve(tr.t.capacity());
  double t_last = 0.0;
  State s_last{};
  const bool ok = integrate_observe(
      par, s0, dt, nsteps, opt, [&](long k, double t, const State& s) {
        t_last = t;
        s_last = s;
        if (k % record_stride == 0 || k == nsteps) {
          tr.t.push_back(t);
          tr.s.push_back(s);
        }
      });
  if (!ok) {
    tr.fault = true;
    tr.t_fault = t_last + dt;
    if (tr.t.empty() || tr.t.back() != t_last) {  // keep the last good state
      tr.t.push_back(t_last);
      tr.s.push_back(s_last);
    }
  }
  return tr;
}

}  // namespace orbitron

#endif
