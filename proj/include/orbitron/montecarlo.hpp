#ifndef ORBITRON_MONTECARLO_HPP
#define ORBITRON_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "orbitron/dynamics.hpp"
#include "orbitron/equilibrium.hpp"

namespace orbitron {

inline constexpr const char* mc_rng_name = "mt19937_64/splitmix64-stream";

namespace detail {

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// k-th output of the splitmix64 stream seeded with `seed`; random access so
// trials can be dealt to threads in any order with identical results.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64_finalize(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform on [-1, 1] with full 53-bit resolution; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform_pm1(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace detail

// Normalized distance of a state from the equilibrium orbit, built from the
// quantities that stay put on the orbit itself: orbit radius, height above
// the plane, momentum magnitude, axis tilt away from -e3, axial angular
// momentum.  Each is scaled by its equilibrium magnitude, the tilt by the
// quarter turn that would tip the axis into the plane.
inline double deviation_metric(const OrbitronParams& par, const RelativeEquilibrium& eq,
                               const State& s) {
  const double r = norm(s.x);
  const double d_radius = std::abs(r - eq.r0) / eq.r0;
  const double d_height = std::abs(s.x.z) / eq.r0;
  const double d_momentum = std::abs(norm(s.p) - eq.p0) / eq.p0;
  const double d_tilt = std::acos(std::clamp(-s.nu.z, -1.0, 1.0)) / (0.5 * std::numbers::pi);
  const double n_scale = std::max(std::abs(eq.n0), par.mass * eq.omega * eq.r0 * eq.r0);
  const double d_axial = std::abs(s.n.z - eq.n0) / n_scale;
  return std::max({d_radius, d_height, d_momentum, d_tilt, d_axial});
}

// Random kick of relative size rel_eps: each coordinate gets an independent
// U[-1,1] draw scaled per block by (r0, p0, 1, |n0|); nu is re-normalized.
inline State perturbed_state(const RelativeEquilibrium& eq, double rel_eps,
                             std::mt19937_64& eng) {
  State s = eq.state();
  const double scales[4] = {eq.r0, eq.p0, 1.0, std::abs(eq.n0)};
  Vec3* blocks[4] = {&s.x, &s.p, &s.nu, &s.n};
  for (int b = 0; b < 4; ++b) {
    const double a = rel_eps * scales[b];
    blocks[b]->x += a * detail::uniform_pm1(eng);
    blocks[b]->y += a * detail::uniform_pm1(eng);
    blocks[b]->z += a * detail::uniform_pm1(eng);
  }
  s.nu = normalized(s.nu);
  return s;
}

struct McOptions {
  long n_trials = 100;
  double rel_eps = 0.01;        // kick size relative to the block scales
  double horizon_periods = 10.0;
  long steps_per_period = 2000;
  double threshold = 0.5;       // bounded iff max deviation stays below this
  std::uint64_t seed = 1;
  int threads = 1;
  bool renormalize = true;

  void validate() const {
    auto req = [](bool ok, const char* msg) {
      if (!ok) throw std::invalid_argument(std::string("montecarlo: ") + msg);
    };
    req(n_trials >= 1, "n_trials must be >= 1");
    req(std::isfinite(rel_eps) && rel_eps >= 0.0, "rel_eps must be >= 0");
    req(std::isfinite(horizon_periods) && horizon_periods > 0.0,
        "horizon_periods must be positive");
    req(steps_per_period >= 1, "steps_per_period must be >= 1");
    req(std::isfinite(threshold) && threshold > 0.0, "threshold must be positive");
    req(threads >= 1, "threads must be >= 1");
  }
};

struct TrialResult {
  long trial = 0;
  bool bounded = false;
  bool fault = false;
  double max_deviation = 0.0;
};

struct McSummary {
  std::vector<TrialResult> trials;  // ordered by trial index
  long n_bounded = 0;
  long n_fault = 0;
  double p50 = 0.0;  // nearest-rank percentiles of per-trial max deviation
  double p90 = 0.0;
  double max = 0.0;
};

inline TrialResult run_trial(const OrbitronParams& par, const RelativeEquilibrium& eq,
                             const McOptions& opt, long trial) {
  std::mt19937_64 eng(detail::trial_seed(opt.seed, static_cast<std::uint64_t>(trial)));
  const State s0 = perturbed_state(eq, opt.rel_eps, eng);

  TrialResult res;
  res.trial = trial;
  const double dt = eq.period() / static_cast<double>(opt.steps_per_period);
  const long nsteps = static_cast<long>(
      std::llround(opt.horizon_periods * static_cast<double>(opt.steps_per_period)));
  IntegrateOptions iopt;
  iopt.renormalize = opt.renormalize;
  const bool ok = integrate_observe(par, s0, dt, nsteps, iopt,
                                    [&](long, double, const State& s) {
                                      res.max_deviation = std::max(
                                          res.max_deviation, deviation_metric(par, eq, s));
                                    });
  res.fault = !ok;
  res.bounded = ok && res.max_deviation < opt.threshold;
  return res;
}

// Runs the trial set, splitting the index range statically over the worker
// threads; results are identical for any thread count.
inline McSummary run_batch(const OrbitronParams& par, const RelativeEquilibrium& eq,
                           const McOptions& opt) {
  opt.validate();
  McSummary out;
  out.trials.resize(static_cast<size_t>(opt.n_trials));

  const int nthreads = static_cast<int>(std::min<long>(opt.threads, opt.n_trials));
  auto work = [&](long lo, long hi) {
    for (long k = lo; k < hi; ++k) {
      out.trials[static_cast<size_t>(k)] = run_trial(par, eq, opt, k);
    }
  };
  if (nthreads <= 1) {
    work(0, opt.n_trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    const long chunk = (opt.n_trials + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const long lo = t * chunk;
      const long hi = std::min<long>(lo + chunk, opt.n_trials);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> devs;
  devs.reserve(out.trials.size());
  for (const TrialResult& t : out.trials) {
    out.n_bounded += t.bounded ? 1 : 0;
    out.n_fault += t.fault ? 1 : 0;
    devs.push_back(t.max_deviation);
  }
  std::sort(devs.begin(), devs.end());
  const auto rank = [&](double p) {  // nearest-rank percentile
    const size_t n = devs.size();
    const size_t r = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    return devs[std::max<size_t>(r, 1) - 1];
  };
  out.p50 = rank(50.0);
  out.p90 = rank(90.0);
  out.max = devs.back();
  return out;
}

}  // namespace orbitron

#endif
