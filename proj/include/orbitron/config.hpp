#ifndef ORBITRON_CONFIG_HPP
#define ORBITRON_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "orbitron/dynamics.hpp"
#include "orbitron/equilibrium.hpp"
#include "orbitron/montecarlo.hpp"
#include "orbitron/params.hpp"
#include "orbitron/stability.hpp"

namespace orbitron {

// INI-style configuration:
//   [section]
//   key = value      # comment ('#' or ';' starts a comment anywhere)
// Keys live in the most recent section; duplicate keys take the last value.
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has_section(const std::string& s) const { return sections.count(s) != 0; }

  std::optional<std::string> find(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }
};

namespace detail {

inline std::string_view trim(std::string_view v) {
  const char* ws = " \t\r\n";
  const auto b = v.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(ws);
  return v.substr(b, e - b + 1);
}

[[noreturn]] inline void config_error(size_t line_no, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  std::string section;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = line;
    if (const auto cpos = v.find_first_of("#;"); cpos != std::string_view::npos) {
      v = v.substr(0, cpos);
    }
    v = detail::trim(v);
    if (v.empty()) continue;
    if (v.front() == '[') {
      if (v.back() != ']' || v.size() < 3) detail::config_error(line_no, "malformed section header");
      section = std::string(detail::trim(v.substr(1, v.size() - 2)));
      if (section.empty()) detail::config_error(line_no, "empty section name");
      cfg.sections[section];  // a section may legitimately stay empty
      continue;
    }
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) detail::config_error(line_no, "expected 'key = value'");
    const std::string key(detail::trim(v.substr(0, eq)));
    const std::string val(detail::trim(v.substr(eq + 1)));
    if (key.empty()) detail::config_error(line_no, "empty key");
    if (section.empty()) detail::config_error(line_no, "key outside any section");
    cfg.sections[section][key] = val;
  }
  return cfg;
}

inline Config parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

namespace detail {

[[noreturn]] inline void key_error(const std::string& sec, const std::string& key,
                                   const std::string& what) {
  throw std::invalid_argument("config [" + sec + "] " + key + ": " + what);
}

inline double parse_double(const std::string& sec, const std::string& key,
                           const std::string& raw) {
  const std::string_view v = trim(raw);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) key_error(sec, key, "not a number: '" + raw + "'");
  return out;
}

inline long parse_long(const std::string& sec, const std::string& key, const std::string& raw) {
  const std::string_view v = trim(raw);
  long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) key_error(sec, key, "not an integer: '" + raw + "'");
  return out;
}

inline std::uint64_t parse_u64(const std::string& sec, const std::string& key,
                               const std::string& raw) {
  const std::string_view v = trim(raw);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    key_error(sec, key, "not an unsigned integer: '" + raw + "'");
  return out;
}

inline bool parse_bool(const std::string& sec, const std::string& key, const std::string& raw) {
  const std::string v{trim(raw)};
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  key_error(sec, key, "not a boolean (true/false/1/0): '" + raw + "'");
}

}  // namespace detail

// Typed access; `require_*` throws std::invalid_argument when absent.
inline double require_double(const Config& c, const std::string& sec, const std::string& key) {
  const auto v = c.find(sec, key);
  if (!v) detail::key_error(sec, key, "missing");
  return detail::parse_double(sec, key, *v);
}

inline double get_double(const Config& c, const std::string& sec, const std::string& key,
                         double fallback) {
  const auto v = c.find(sec, key);
  return v ? detail::parse_double(sec, key, *v) : fallback;
}

inline long get_long(const Config& c, const std::string& sec, const std::string& key,
                     long fallback) {
  const auto v = c.find(sec, key);
  return v ? detail::parse_long(sec, key, *v) : fallback;
}

inline std::uint64_t get_u64(const Config& c, const std::string& sec, const std::string& key,
                             std::uint64_t fallback) {
  const auto v = c.find(sec, key);
  return v ? detail::parse_u64(sec, key, *v) : fallback;
}

inline bool get_bool(const Config& c, const std::string& sec, const std::string& key,
                     bool fallback) {
  const auto v = c.find(sec, key);
  return v ? detail::parse_bool(sec, key, *v) : fallback;
}

inline std::string get_string(const Config& c, const std::string& sec, const std::string& key,
                              const std::string& fallback) {
  const auto v = c.find(sec, key);
  return v ? *v : fallback;
}

// Physical parameters come from exactly one of:
//   [magnet]  density, remanence, diameter, height, kappa, half_gap
//   [params]  mass, mu, i_perp, i_axial, kappa, h
inline OrbitronParams params_from_config(const Config& c) {
  const bool has_magnet = c.has_section("magnet");
  const bool has_params = c.has_section("params");
  if (has_magnet == has_params) {
    throw std::invalid_argument("config: provide exactly one of [magnet] or [params]");
  }
  if (has_magnet) {
    MagnetSpec m;
    m.density = require_double(c, "magnet", "density");
    m.remanence = require_double(c, "magnet", "remanence");
    m.diameter = require_double(c, "magnet", "diameter");
    m.height = require_double(c, "magnet", "height");
    m.kappa = require_double(c, "magnet", "kappa");
    m.half_gap = require_double(c, "magnet", "half_gap");
    return m.to_params();  // validates
  }
  OrbitronParams p;
  p.mass = require_double(c, "params", "mass");
  p.mu = require_double(c, "params", "mu");
  p.i_perp = require_double(c, "params", "i_perp");
  p.i_axial = require_double(c, "params", "i_axial");
  p.kappa = require_double(c, "params", "kappa");
  p.h = require_double(c, "params", "h");
  p.validate();
  return p;
}

// [equilibrium]  r0, and exactly one of n0 | n0_over_min.
inline RelativeEquilibrium equilibrium_from_config(const Config& c, const OrbitronParams& par) {
  if (!c.has_section("equilibrium")) {
    throw std::invalid_argument("config: missing [equilibrium] section");
  }
  const double r0 = require_double(c, "equilibrium", "r0");
  const auto n0_raw = c.find("equilibrium", "n0");
  const auto ratio_raw = c.find("equilibrium", "n0_over_min");
  if (static_cast<bool>(n0_raw) == static_cast<bool>(ratio_raw)) {
    throw std::invalid_argument("config [equilibrium]: provide exactly one of n0 | n0_over_min");
  }
  double n0;
  if (n0_raw) {
    n0 = detail::parse_double("equilibrium", "n0", *n0_raw);
  } else {
    const double ratio = detail::parse_double("equilibrium", "n0_over_min", *ratio_raw);
    n0 = ratio * min_axis_momentum(par, r0);  // throws where no spin stabilizes
  }
  return make_equilibrium(par, r0, n0);
}

// Integration job assembled from [simulate]; every key is optional.
//   initial = equilibrium (default) | explicit
//   equilibrium start: t_end_periods, steps_per_period
//   explicit start:    x1..x3, p1..p3, nu1..nu3, n1..n3, dt, steps
//   common:            renormalize, record_stride, form = hamiltonian|classical
struct SimulatePlan {
  State s0;
  double dt = 0.0;
  long nsteps = 0;
  IntegrateOptions opt;
  long record_stride = 1;
};

inline SimulatePlan simulate_plan(const Config& c, const OrbitronParams& par) {
  SimulatePlan plan;
  const std::string sec = "simulate";
  const std::string initial = get_string(c, sec, "initial", "equilibrium");
  if (initial == "equilibrium") {
    const RelativeEquilibrium eq = equilibrium_from_config(c, par);
    const double periods = get_double(c, sec, "t_end_periods", 10.0);
    const long spp = get_long(c, sec, "steps_per_period", 2000);
    if (!(periods > 0.0)) detail::key_error(sec, "t_end_periods", "must be positive");
    if (spp < 1) detail::key_error(sec, "steps_per_period", "must be >= 1");
    plan.s0 = eq.state();
    plan.dt = eq.period() / static_cast<double>(spp);
    plan.nsteps = static_cast<long>(std::llround(periods * static_cast<double>(spp)));
  } else if (initial == "explicit") {
    const char* names[12] = {"x1", "x2", "x3",  "p1",  "p2",  "p3",
                             "nu1", "nu2", "nu3", "n1", "n2", "n3"};
    std::array<double, 12> flat{};
    for (int i = 0; i < 12; ++i) flat[static_cast<size_t>(i)] = require_double(c, sec, names[i]);
    plan.s0 = State::from_flat(flat);
    plan.dt = require_double(c, sec, "dt");
    plan.nsteps = get_long(c, sec, "steps", 0);
    if (!(plan.dt > 0.0)) detail::key_error(sec, "dt", "must be positive");
    if (plan.nsteps < 1) detail::key_error(sec, "steps", "must be >= 1");
  } else {
    detail::key_error(sec, "initial", "must be 'equilibrium' or 'explicit'");
  }
  plan.opt.renormalize = get_bool(c, sec, "renormalize", true);
  const std::string form = get_string(c, sec, "form", "hamiltonian");
  if (form == "hamiltonian") {
    plan.opt.form = RhsForm::hamiltonian;
  } else if (form == "classical") {
    plan.opt.form = RhsForm::classical;
  } else {
    detail::key_error(sec, "form", "must be 'hamiltonian' or 'classical'");
  }
  plan.record_stride = get_long(c, sec, "record_stride", 1);
  if (plan.record_stride < 1) detail::key_error(sec, "record_stride", "must be >= 1");
  return plan;
}

// [montecarlo]  n_trials, rel_eps, horizon_periods, steps_per_period,
//               threshold, seed, renormalize; all optional.
inline McOptions mc_from_config(const Config& c) {
  McOptions mc;
  const std::string sec = "montecarlo";
  mc.n_trials = get_long(c, sec, "n_trials", mc.n_trials);
  mc.rel_eps = get_double(c, sec, "rel_eps", mc.rel_eps);
  mc.horizon_periods = get_double(c, sec, "horizon_periods", mc.horizon_periods);
  mc.steps_per_period = get_long(c, sec, "steps_per_period", mc.steps_per_period);
  mc.threshold = get_double(c, sec, "threshold", mc.threshold);
  mc.seed = get_u64(c, sec, "seed", mc.seed);
  mc.renormalize = get_bool(c, sec, "renormalize", mc.renormalize);
  mc.validate();
  return mc;
}

}  // namespace orbitron

#endif
