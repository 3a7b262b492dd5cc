#pragma once

#include <map>
#include <optional>
#include <string>

#include "episodic/condition.hpp"
#include "episodic/schema.hpp"

namespace episodic {

enum class Generality { MoreGeneral, MoreSpecific, Equal, Incomparable };

std::string_view to_string(Generality g);

/// Syntactic subsumption: true when `general` maps into `specific` so that
/// every selector, mark and temporal constraint of `general` is implied by
/// `specific`. Sound (coverage of `specific` is then a subset of coverage of
/// `general`) but incomplete.
bool subsumes(const RuleCondition& general, const RuleCondition& specific, const Schema& schema);

// Relation of `a` to `b`.
Generality is_more_general(const RuleCondition& a, const RuleCondition& b, const Schema& schema);

// Whether `specific` implies `general` under the variable mapping, which is
// extended in place on success.
bool selector_implies(const Selector& general, const Selector& specific, std::map<std::string, std::string>& vars,
                      const Schema& schema);

}  // namespace episodic
