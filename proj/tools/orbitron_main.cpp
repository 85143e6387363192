// Command-line front end: equilibrium / stability / simulate / montecarlo.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 numerical fault
// (guard trip or non-finite state), 3 I/O failure.

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "orbitron/orbitron.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_numerical = 2;
constexpr int exit_io = 3;

std::ofstream open_out(const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

int cmd_equilibrium(const std::string& config_path) {
  const orbitron::Config cfg = orbitron::load_config(config_path);
  const orbitron::OrbitronParams par = orbitron::params_from_config(cfg);
  const orbitron::RelativeEquilibrium eq = orbitron::equilibrium_from_config(cfg, par);
  const orbitron::State z = eq.state();

  orbitron::Report rep("result");
  rep.add("r0", eq.r0)
      .add("n0", eq.n0)
      .add("R", eq.R)
      .add("K", eq.K)
      .add("omega", eq.omega)
      .add("period", eq.period())
      .add("p0", eq.p0)
      .add("lambda1", eq.lambda1)
      .add("lambda2", eq.lambda2)
      .add("energy", orbitron::total_energy(par, z))
      .add("j3", orbitron::angular_momentum_z(z))
      .add("critical_point_residual", orbitron::critical_point_residual(par, eq));
  rep.write(std::cout);
  return exit_ok;
}

// Resolves the configured axial momentum policy at an arbitrary radius:
// a literal n0 applies everywhere, a ratio n0_over_min tracks the local
// threshold (0 where no spin stabilizes).
double resolve_n0(const orbitron::Config& cfg, const orbitron::OrbitronParams& par, double r0) {
  const auto n0_raw = cfg.find("equilibrium", "n0");
  if (n0_raw) return orbitron::require_double(cfg, "equilibrium", "n0");
  const double ratio = orbitron::require_double(cfg, "equilibrium", "n0_over_min");
  const orbitron::StabilityConditions c =
      orbitron::stability_conditions(par, orbitron::make_equilibrium(par, r0, 0.0));
  return c.d_factor > 0.0 ? ratio * c.min_n0 : 0.0;
}

int cmd_stability(const std::string& config_path, const std::string& out_dir, bool sweep,
                  double sweep_min, double sweep_max, long sweep_points) {
  const orbitron::Config cfg = orbitron::load_config(config_path);
  const orbitron::OrbitronParams par = orbitron::params_from_config(cfg);
  const orbitron::RelativeEquilibrium eq = orbitron::equilibrium_from_config(cfg, par);
  const orbitron::StabilityConditions c = orbitron::stability_conditions(par, eq);
  const bool pd = orbitron::positive_definite(orbitron::build_q(par, eq));

  orbitron::Report rep("result");
  rep.add("r0", eq.r0)
      .add("n0", eq.n0)
      .add("K", eq.K)
      .add("omega", eq.omega)
      .add("r0_over_h", c.r0_over_h)
      .add("d_factor", c.d_factor)
      .add("geometric_ok", c.geometric_ok)
      .add("dynamic_lhs", c.dynamic_lhs)
      .add("dynamic_rhs", c.dynamic_rhs)
      .add("dynamic_ok", c.dynamic_ok)
      .add("min_n0", c.min_n0)
      .add("min_spin_rate", c.min_n0 / par.i_axial)
      .add("q_positive_definite", pd)
      .add("stable", c.stable);
  rep.write(std::cout);

  if (sweep) {
    if (!(sweep_min > 0.0 && sweep_max > sweep_min && sweep_points >= 2)) {
      throw std::invalid_argument("sweep range must satisfy 0 < min < max, points >= 2");
    }
    std::ofstream out = open_out(out_dir, "stability_sweep.csv");
    out << "r0_over_h,r0,n0,K,omega,geometric_ok,dynamic_ok,q_positive_definite,"
           "min_n0,min_spin_rate\n";
    for (long i = 0; i < sweep_points; ++i) {
      const double ratio = sweep_min + (sweep_max - sweep_min) * static_cast<double>(i) /
                                           static_cast<double>(sweep_points - 1);
      const double r0 = ratio * par.h;
      const double n0 = resolve_n0(cfg, par, r0);
      const orbitron::RelativeEquilibrium e = orbitron::make_equilibrium(par, r0, n0);
      const orbitron::StabilityConditions sc = orbitron::stability_conditions(par, e);
      const bool spd = orbitron::positive_definite(orbitron::build_q(par, e));
      out << orbitron::fmt17(sc.r0_over_h) << ',' << orbitron::fmt17(e.r0) << ','
          << orbitron::fmt17(e.n0) << ',' << orbitron::fmt17(e.K) << ','
          << orbitron::fmt17(e.omega) << ',' << (sc.geometric_ok ? 1 : 0) << ','
          << (sc.dynamic_ok ? 1 : 0) << ',' << (spd ? 1 : 0) << ','
          << orbitron::fmt17(sc.min_n0) << ','
          << orbitron::fmt17(sc.min_n0 / par.i_axial) << '\n';
    }
    if (!out) throw std::runtime_error("write failure on stability_sweep.csv");
  }
  return exit_ok;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const orbitron::Config cfg = orbitron::load_config(config_path);
  const orbitron::OrbitronParams par = orbitron::params_from_config(cfg);
  const orbitron::SimulatePlan plan = orbitron::simulate_plan(cfg, par);

  const orbitron::Trajectory tr =
      orbitron::integrate(par, plan.s0, plan.dt, plan.nsteps, plan.opt, plan.record_stride);
  {
    std::ofstream out = open_out(out_dir, "trajectory.csv");
    orbitron::write_trajectory_csv(out, par, tr);
    if (!out) throw std::runtime_error("write failure on trajectory.csv");
  }

  const orbitron::State& first = tr.s.front();
  const orbitron::State& last = tr.s.back();
  const double e0 = orbitron::total_energy(par, first);
  const double e1 = orbitron::total_energy(par, last);
  const double j0 = orbitron::angular_momentum_z(first);
  const double j1 = orbitron::angular_momentum_z(last);

  orbitron::Report rep("result");
  rep.add("samples", static_cast<long>(tr.t.size()))
      .add("t_final", tr.t.back())
      .add("fault", tr.fault)
      .add("energy_initial", e0)
      .add("energy_final", e1)
      .add("energy_drift_rel", std::abs(e1 - e0) / std::max(std::abs(e0), DBL_MIN))
      .add("j3_drift_rel", std::abs(j1 - j0) / std::max(std::abs(j0), DBL_MIN))
      .add("c1_drift_abs", std::abs(orbitron::casimir_nu(last) - orbitron::casimir_nu(first)))
      .add("c2_drift_abs",
           std::abs(orbitron::casimir_nu_n(last) - orbitron::casimir_nu_n(first)));
  rep.write(std::cout);
  return tr.fault ? exit_numerical : exit_ok;
}

int cmd_montecarlo(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed, std::optional<int> threads) {
  const orbitron::Config cfg = orbitron::load_config(config_path);
  const orbitron::OrbitronParams par = orbitron::params_from_config(cfg);
  const orbitron::RelativeEquilibrium eq = orbitron::equilibrium_from_config(cfg, par);
  orbitron::McOptions mc = orbitron::mc_from_config(cfg);
  if (seed) mc.seed = *seed;
  if (threads) mc.threads = *threads;
  mc.validate();

  const orbitron::McSummary sum = orbitron::run_batch(par, eq, mc);
  {
    std::ofstream out = open_out(out_dir, "montecarlo.csv");
    orbitron::write_mc_csv(out, sum);
    if (!out) throw std::runtime_error("write failure on montecarlo.csv");
  }

  orbitron::Report rep("result");
  rep.add("n_trials", mc.n_trials)
      .add("n_bounded", sum.n_bounded)
      .add("n_fault", sum.n_fault)
      .add("fraction_bounded",
           static_cast<double>(sum.n_bounded) / static_cast<double>(mc.n_trials))
      .add("p50_max_deviation", sum.p50)
      .add("p90_max_deviation", sum.p90)
      .add("max_deviation", sum.max)
      .add("threshold", mc.threshold)
      .add("rel_eps", mc.rel_eps)
      .add("horizon_periods", mc.horizon_periods)
      .add("steps_per_period", mc.steps_per_period)
      .add("seed", mc.seed)
      .add("threads", static_cast<long>(mc.threads))
      .add("rng", orbitron::mc_rng_name);
  rep.write(std::cout);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbiting magnet toolkit: circular relative equilibria of a spinning "
               "dipole between two fixed magnetic poles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool sweep = false;
  double sweep_min = 0.5, sweep_max = 2.5;
  long sweep_points = 201;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "configuration file")->required();
    sub->add_option("-o,--out", out_dir, "output directory for data files");
  };

  CLI::App* eq_cmd = app.add_subcommand(
      "equilibrium", "solve the circular relative equilibrium and report its invariants");
  add_common(eq_cmd);

  CLI::App* st_cmd = app.add_subcommand(
      "stability", "evaluate the quadratic form and the closed-form stability window");
  add_common(st_cmd);
  st_cmd->add_flag("--sweep", sweep, "also write a radius sweep to stability_sweep.csv");
  st_cmd->add_option("--sweep-min", sweep_min, "sweep lower bound for r0/h");
  st_cmd->add_option("--sweep-max", sweep_max, "sweep upper bound for r0/h");
  st_cmd->add_option("--sweep-points", sweep_points, "number of sweep points");

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "integrate the equations of motion and write trajectory.csv");
  add_common(sim_cmd);

  CLI::App* mc_cmd = app.add_subcommand(
      "montecarlo", "perturbation trials around the equilibrium; writes montecarlo.csv");
  add_common(mc_cmd);
  std::uint64_t seed_val = 0;
  int threads_val = 0;
  mc_cmd->add_option("--seed", seed_val, "override the RNG seed");
  mc_cmd->add_option("--threads", threads_val, "worker threads for the trial set");

  CLI11_PARSE(app, argc, argv);

  if (mc_cmd->count("--seed") > 0) seed = seed_val;
  if (mc_cmd->count("--threads") > 0) threads = threads_val;

  try {
    if (eq_cmd->parsed()) return cmd_equilibrium(config_path);
    if (st_cmd->parsed())
      return cmd_stability(config_path, out_dir, sweep, sweep_min, sweep_max, sweep_points);
    if (sim_cmd->parsed()) return cmd_simulate(config_path, out_dir);
    if (mc_cmd->parsed()) return cmd_montecarlo(config_path, out_dir, seed, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_io;
  }
  return exit_invalid;
}
