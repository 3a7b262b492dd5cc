#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "episodic/rulebase.hpp"

namespace episodic {

// Base-2 class entropy of a rule's coverage; 0 log 0 = 0 and H(0,0) = 0.
double entropy(std::size_t pos, std::size_t neg);
inline double entropy(const RuleStats& s) { return entropy(s.pos, s.neg); }

// Largest entropy drop one more covered instance could cause.
double emer(const RuleStats& s);

struct MeritWeights {
  double entropy = 0.3;
  double confidence = 0.2;
  double cosmetic = 0.1;
  double emer = 0.4;

  // Throws ConfigError unless non-negative and summing to 1.
  void validate() const;
};

struct MeritConfig {
  double theta_u = 0.3;
  double theta_evid = 0.2;
  double theta_spur = 0.15;
  std::size_t n_conf = 20;
  double theta_common = 0.01;
  double kappa = 5.0;
  std::size_t invoke_k = 5;
  MeritWeights weights;
};

enum class Role { Evidence, Spurious, Commonplace, Neutral };

std::string_view to_string(Role r);

struct InstanceRole {
  Role role = Role::Neutral;
  double max_delta = 0.0;  // largest |delta| over covering rules
  std::optional<int> rule;  // rule with that delta, or the damaged confident rule
};

struct UniformnessVerdict {
  bool uniform = true;
  std::optional<int> witness;
  double gap = 0.0;
};

// Entropy change the episode would cause if counted; 0 when not covered.
double instance_delta(const Rulebase& db, int id, const Episode& ep, const Schema& schema);
// Same, from a known coverage decision.
double instance_delta(const RuleStats& before, bool positive);

// Roles are judged on counts before the episode is recorded.
InstanceRole classify_instance_role(const Rulebase& db, const Episode& ep, const Schema& schema, const MeritConfig& cfg);
InstanceRole classify_instance_role(const Rulebase& db, const std::vector<int>& covering, const Episode& ep,
                                    const MeritConfig& cfg);

// Lazy: only specializations already in the DAG, with some coverage, count.
UniformnessVerdict uniformness(const Rulebase& db, int id, double theta_u);

double merit(const Rule& r, const MeritWeights& w, double kappa);

// Covering rules (any class) plus rules of the episode's class, best merit
// first, ties by lower id. Retired rules are never invoked.
std::vector<int> invoke(const Rulebase& db, const Episode& ep, std::size_t k, const Schema& schema,
                        const MeritConfig& cfg);
std::vector<int> invoke(const Rulebase& db, const std::vector<int>& covering, const std::string& label, std::size_t k,
                        const MeritConfig& cfg);

}  // namespace episodic
