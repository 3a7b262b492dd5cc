#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/event.hpp"
#include "episodic/schema.hpp"

namespace episodic {

/// One way a condition holds on an episode: the events assigned to each
/// pattern (a chain for gap-closed patterns, otherwise a single index) and
/// the object bound to each variable.
struct Binding {
  std::vector<std::vector<int>> events;
  std::map<std::string, std::string> objects;

  auto operator<=>(const Binding&) const = default;
};

// Patterns map injectively onto events; distinct variables may bind the
// same object. Only positively stated atoms are consulted.
std::vector<Binding> match_rule(const RuleCondition& cond, const Episode& ep, const Schema& schema);
std::optional<Binding> first_match(const RuleCondition& cond, const Episode& ep, const Schema& schema);
bool covers(const RuleCondition& cond, const Episode& ep, const Schema& schema);

bool selector_holds_on(const Selector& sel, const Atom& atom, const Schema& schema);

// Variable name used for an object constant when lifting it: m1 -> M1.
std::string variable_for(const std::string& object);

/// Maximally specific condition describing `ep`: one pattern per event with
/// point selectors for every atom, object constants lifted to variables, and
/// point T1..T4 constraints for every pattern pair plus each duration.
RuleCondition msc_rule(const Episode& ep);

}  // namespace episodic
