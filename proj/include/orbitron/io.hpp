#ifndef ORBITRON_IO_HPP
#define ORBITRON_IO_HPP

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "orbitron/dynamics.hpp"
#include "orbitron/montecarlo.hpp"
#include "orbitron/potential.hpp"

namespace orbitron {

// Shortest representation that round-trips a double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* trajectory_csv_header =
    "t,x1,x2,x3,p1,p2,p3,nu1,nu2,nu3,n1,n2,n3,E,j3,C1,C2";

// One row per recorded sample; a faulted run ends with a '# fault' comment
// line after the partial data.
inline void write_trajectory_csv(std::ostream& out, const OrbitronParams& par,
                                 const Trajectory& tr) {
  out << trajectory_csv_header << '\n';
  for (size_t i = 0; i < tr.t.size(); ++i) {
    const State& s = tr.s[i];
    out << fmt17(tr.t[i]);
    for (double v : s.flat()) out << ',' << fmt17(v);
    out << ',' << fmt17(total_energy(par, s));
    out << ',' << fmt17(angular_momentum_z(s));
    out << ',' << fmt17(casimir_nu(s));
    out << ',' << fmt17(casimir_nu_n(s));
    out << '\n';
  }
  if (tr.fault) out << "# fault t=" << fmt17(tr.t_fault) << '\n';
}

inline constexpr const char* mc_csv_header = "trial,bounded,fault,max_deviation";

inline void write_mc_csv(std::ostream& out, const McSummary& sum) {
  out << mc_csv_header << '\n';
  for (const TrialResult& t : sum.trials) {
    out << t.trial << ',' << (t.bounded ? 1 : 0) << ',' << (t.fault ? 1 : 0) << ','
        << fmt17(t.max_deviation) << '\n';
  }
}

// Key/value report in the same [section] syntax the config reader accepts,
// so emitted results can be parsed back losslessly.
struct Report {
  std::string section;
  std::vector<std::pair<std::string, std::string>> items;

  explicit Report(std::string sec) : section(std::move(sec)) {}

  Report& add(const std::string& key, const std::string& value) {
    items.emplace_back(key, value);
    return *this;
  }
  Report& add(const std::string& key, const char* value) {
    return add(key, std::string(value));
  }
  Report& add(const std::string& key, double value) { return add(key, fmt17(value)); }
  Report& add(const std::string& key, long value) { return add(key, std::to_string(value)); }
  Report& add(const std::string& key, bool value) {
    return add(key, std::string(value ? "true" : "false"));
  }
  Report& add(const std::string& key, std::uint64_t value) {
    return add(key, std::to_string(value));
  }

  void write(std::ostream& out) const {
    out << '[' << section << "]\n";
    for (const auto& [k, v] : items) out << k << " = " << v << '\n';
  }
};

}  // namespace orbitron

#endif
