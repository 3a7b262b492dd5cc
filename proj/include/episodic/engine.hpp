#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "episodic/config.hpp"
#include "episodic/merit.hpp"
#include "episodic/refinement.hpp"
#include "episodic/rulebase.hpp"
#include "episodic/schema.hpp"

namespace episodic {

enum class ActionKind {
  ExceptionRegistered,
  LocalGeneralizationException,
  Specialized,
  Generalized,
  NewRule,
  MarkedProbabilistic,
  NoChange,
};

std::string_view to_string(ActionKind k);

struct RepairAction {
  ActionKind kind = ActionKind::NoChange;
  std::vector<int> rules;  // repaired rule first, then any rule created or retired
  std::string detail;
};

struct InvocationLogEntry {
  int rule = 0;
  std::size_t tick = 0;  // episode sequence number
  std::vector<std::string> objects;  // bound objects, sorted
};

struct IncrementReport {
  std::size_t seq = 0;
  std::string episode;
  InstanceRole role;
  std::vector<int> invoked;
  std::vector<RepairAction> actions;
  bool quarantined = false;
};

std::string to_string(const IncrementReport& r);

struct RunSummary {
  std::size_t consumed = 0;
  bool satisfied = false;
};

/// The incremental learner: episode store, rulebase and invocation log, fed
/// one episode at a time.
class Engine {
 public:
  explicit Engine(Schema schema, EngineConfig cfg = {});
  Engine(Schema schema, EngineConfig cfg, Rulebase resume);

  IncrementReport train_increment(const Episode& ep);
  // Feeds episodes until every class seen so far has a Final rule (when
  // configured to stop) or the stream ends.
  RunSummary run(std::span<const Episode> stream, std::vector<IncrementReport>* reports = nullptr);

  RepairAction repair_rule(int id, const Episode& ep);
  RepairAction dependency_refine(int r_id, int rg_id);
  std::optional<int> associate_and_specialize(int r1, int r2);
  int generate_new_rule(const Episode& ep);

  const Rulebase& rulebase() const { return db_; }
  Rulebase& rulebase() { return db_; }
  const EpisodeStore& store() const { return store_; }
  const Schema& schema() const { return schema_; }
  const EngineConfig& config() const { return cfg_; }
  const ValueLattice& lattice() const { return lattice_; }
  const std::vector<InvocationLogEntry>& invocation_log() const { return log_; }
  std::size_t sequence() const { return seq_; }

  // Adds an episode to the store (and to every rule's stats) without
  // invoking or repairing anything. Useful for fixtures.
  void observe(const Episode& ep);
  // Inserts a rule and counts it over the store.
  int add_rule(RuleCondition cond, const std::string& label, std::vector<RuleCondition> exceptions = {});
  void refresh_status();
  void record_invocation(InvocationLogEntry entry) { log_.push_back(std::move(entry)); }
  bool satisfied() const;

 private:
  struct Scored;

  std::vector<const Episode*> episodes_where(const std::string& label, bool same, const RuleCondition* covered_by,
                                             bool want_covered) const;
  std::vector<const Episode*> counted_episodes(const Rule& r, bool positives) const;
  kernels::CoverCounts score_counts(const RuleCondition& c, const std::string& label) const;
  std::optional<int> find_rule(const RuleCondition& c, const std::string& label) const;
  void count_new_rule(int id);
  void evict_if_needed();
  std::vector<int> covering_rules(const Episode& ep) const;

  Schema schema_;
  EngineConfig cfg_;
  Rulebase db_;
  EpisodeStore store_;
  ValueLattice lattice_;
  std::vector<InvocationLogEntry> log_;
  std::map<std::string, Role> roles_;
  std::set<std::string> classes_;
  std::set<std::pair<int, int>> association_tried_;
  std::size_t seq_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace episodic
