#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/event.hpp"
#include "episodic/schema.hpp"

namespace episodic {

struct GroundTruth {
  RuleCondition condition;
  std::string label;
};

struct SynthConfig {
  std::vector<GroundTruth> rules;
  std::string default_class;  // label for episodes no rule covers; empty rejects them
  std::size_t episodes = 100;
  double noise_rate = 0.0;
  std::size_t events_per_episode = 2;
  std::size_t distractors = 0;
  std::size_t atoms_per_event = 1;
  std::size_t objects = 1;
  Tick max_tick = 20;
  Tick max_duration = 6;
  std::uint64_t rng_seed = 1;
  std::size_t max_attempts = 20000;  // per episode
  std::string schema_path;

  void validate() const;
  // `key = value` lines; `rule = <condition> => <class>` may repeat; `schema`
  // is resolved relative to the config file.
  static SynthConfig parse(std::istream& in, const std::string& base_dir = ".");
  static SynthConfig load(const std::string& path);
};

struct SynthResult {
  std::vector<Episode> episodes;
  std::set<std::string> relabeled;  // ids whose label the noise step changed
};

// Episodes satisfying exactly one ground-truth label, classes drawn in
// rotation, then a `noise_rate` share relabeled uniformly over all classes.
SynthResult generate_synthetic(const SynthConfig& cfg, const Schema& schema);

}  // namespace episodic
