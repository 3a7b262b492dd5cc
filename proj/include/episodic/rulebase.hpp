#pragma once

#include <cstddef>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/event.hpp"
#include "episodic/kernels.hpp"
#include "episodic/schema.hpp"

namespace episodic {

enum class RuleStatus { Active, Probabilistic, Final, Retired };

std::string_view to_string(RuleStatus s);
std::optional<RuleStatus> parse_rule_status(std::string_view text);

struct RuleStats {
  std::size_t pos = 0;
  std::size_t neg = 0;

  std::size_t coverage() const { return pos + neg; }
  auto operator<=>(const RuleStats&) const = default;
};

struct Rule {
  int id = 0;
  RuleCondition condition;
  std::string label;
  RuleStats stats;
  std::vector<RuleCondition> exceptions;
  RuleStatus status = RuleStatus::Active;
  // Episodes currently counted in `stats`; exception recounts only look here.
  std::set<std::string> counted;

  kernels::Guarded guarded() const { return {&condition, &exceptions}; }
  bool retired() const { return status == RuleStatus::Retired; }
  bool operator==(const Rule&) const = default;
};

// Canonical rule text: `<condition> => <class>`.
std::string rule_text(const Rule& r);

struct GenEdge {
  int general = 0;
  int specific = 0;
  std::string witness;  // operator name or "subsumption"

  auto operator<=>(const GenEdge&) const = default;
};

/// Retained training episodes, by id, in arrival order.
class EpisodeStore {
 public:
  // Throws DuplicateId.
  const Episode& add(Episode ep);
  const Episode* find(const std::string& id) const;
  void erase(const std::string& id);
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  const std::deque<std::string>& order() const { return order_; }
  std::vector<const Episode*> pointers() const;

 private:
  std::map<std::string, Episode> episodes_;
  std::deque<std::string> order_;
};

/// Rules plus the generalization DAG between same-class rules.
class Rulebase {
 public:
  // Assigns a fresh id when r.id == 0. Throws DuplicateId. Adds an edge to
  // every same-class rule for which subsumption is decisive in one direction.
  int insert_rule(Rule r, const Schema& schema);
  int next_id() const { return next_id_; }

  const Rule* find(int id) const;
  const Rule& get(int id) const;  // throws UnknownRule
  Rule& get_mutable(int id);
  const std::map<int, Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

  // Counts `ep` toward the rule if the guarded condition covers it; true when counted.
  bool update_stats(int id, const Episode& ep, const Schema& schema);
  // Records an already-established coverage decision without re-evaluating.
  void record(int id, const Episode& ep);
  // Appends the exception and recounts only the rule's counted episodes.
  void register_exception(int id, RuleCondition excl, const EpisodeStore& store, const Schema& schema);
  // Drops an evicted episode from every rule that counted it.
  void forget(const Episode& ep);
  void set_status(int id, RuleStatus s) { get_mutable(id).status = s; }

  // Stats from scratch over the store; does not mutate.
  RuleStats recount(int id, const EpisodeStore& store, const Schema& schema) const;

  std::vector<int> specializations_of(int id, bool transitive = false) const;
  std::vector<int> generalizations_of(int id, bool transitive = false) const;
  const std::set<GenEdge>& edges() const { return edges_; }
  bool has_edge(int general, int specific) const;
  // Throws MissingEdge-free IllegalParameter if the edge would close a cycle.
  void add_edge(int general, int specific, std::string witness);

  // Coverage evaluations performed on behalf of each rule (instrumentation).
  std::size_t evaluations(int id) const;

  void write(std::ostream& out) const;
  static Rulebase read(std::istream& in);
  // Atomic: writes a temp file next to `path` and renames it into place.
  void save(const std::string& path) const;
  static Rulebase load(const std::string& path);

  bool operator==(const Rulebase& o) const { return rules_ == o.rules_ && edges_ == o.edges_; }

 private:
  bool reachable(int from, int to) const;
  bool evaluate(const Rule& r, const Episode& ep, const Schema& schema) const;

  std::map<int, Rule> rules_;
  std::set<GenEdge> edges_;
  int next_id_ = 1;
  mutable std::map<int, std::size_t> evaluations_;
};

}  // namespace episodic
