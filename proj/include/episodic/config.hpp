#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

#include "episodic/interval.hpp"
#include "episodic/merit.hpp"

namespace episodic {

struct Satisfaction {
  double max_entropy = 0.0;
  std::size_t min_coverage = 10;
};

struct EngineConfig {
  MeritConfig merit;
  Tick gap_tolerance = 2;
  std::size_t few_limit = 2;
  double moderate_fraction = 0.2;
  double theta_og = 0.3;
  double eps_eq = 0.02;
  std::size_t beam_width = 3;
  Tick assoc_window = 5;
  std::size_t assoc_min_count = 3;
  std::size_t retention_window = 0;  // 0 keeps every episode
  Satisfaction satisfaction;
  std::map<std::string, Satisfaction> class_satisfaction;
  bool quarantine_spurious = false;
  bool stop_when_satisfied = true;
  std::size_t gen_max_patterns = 2;
  std::uint64_t rng_seed = 0;  // 0: no tie shuffling

  const Satisfaction& satisfaction_for(const std::string& label) const;
  // Throws ConfigError on out-of-range values.
  void validate() const;

  // `key = value` lines, `#` comments. Per-class satisfaction is
  // `satisfaction.<class> = <max_entropy>,<min_coverage>`.
  static EngineConfig parse(std::istream& in);
  static EngineConfig load(const std::string& path);
};

}  // namespace episodic
