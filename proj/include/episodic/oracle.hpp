#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/refinement.hpp"
#include "episodic/schema.hpp"

namespace episodic {

/// Finite rule space for brute-force search. Each pattern draws at most
/// `max_selectors_per_pattern` selectors from distinct attributes, all on a
/// single object variable; temporal constraints are one-sided thresholds at
/// observed values.
struct SpaceBounds {
  std::size_t max_patterns = 2;
  std::size_t max_selectors_per_pattern = 1;
  std::size_t max_temporals = 1;
  std::set<TAttr> allowed_t_attributes = {TAttr::T1, TAttr::T2, TAttr::T3, TAttr::T4, TAttr::T5, TAttr::T6};
  // Empty means every non-relation attribute of the schema.
  std::vector<std::string> attributes;
  std::string variable = "X";

  // `key = value` lines: max_patterns, max_selectors, max_temporals,
  // t_attributes (comma list such as T1,T2), attributes (comma list).
  static SpaceBounds parse(std::istream& in);
  static SpaceBounds load(const std::string& path);
};

// Calls `fn` on every condition within bounds exactly once, in a fixed order.
void for_each_condition(const SpaceBounds& bounds, const Schema& schema, const ValueLattice& lattice,
                        const std::function<void(const RuleCondition&)>& fn);
std::vector<RuleCondition> enumerate_rule_space(const SpaceBounds& bounds, const Schema& schema,
                                                const ValueLattice& lattice);

struct OracleResult {
  RuleCondition condition;
  double entropy = 0;
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t examined = 0;
};

// Lowest-entropy condition among those covering at least one positive and
// no more negatives than positives; ties by more positives, then fewer
// selectors, then enumeration order.
OracleResult best_rule_bruteforce(std::span<const Episode> episodes, const std::string& label, const SpaceBounds& bounds,
                                  const Schema& schema);
OracleResult best_rule_bruteforce_serial(std::span<const Episode> episodes, const std::string& label,
                                         const SpaceBounds& bounds, const Schema& schema);

}  // namespace episodic
