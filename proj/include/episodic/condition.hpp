#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "episodic/event.hpp"
#include "episodic/interval.hpp"

namespace episodic {

// Object terms starting with an uppercase letter are variables; anything
// else is a constant object id.
inline bool is_variable(std::string_view term) { return !term.empty() && term[0] >= 'A' && term[0] <= 'Z'; }

enum class SelectorKind {
  ValueSet,  // attr(X) = v  /  attr(X) in {v, w}
  Range,     // attr(X) in [lo, hi]
  IsA,       // attr(X) isa node
  Present,   // rel(X, Y) or bare flag
};

struct Selector {
  std::string name;
  std::vector<std::string> args;
  SelectorKind kind = SelectorKind::Present;
  std::vector<std::string> values;  // ValueSet (sorted) or the IsA node
  Interval range;                   // Range

  static Selector value_set(std::string name, std::string term, std::vector<std::string> values);
  static Selector in_range(std::string name, std::string term, Interval range);
  static Selector isa(std::string name, std::string term, std::string node);
  static Selector relation(std::string name, std::vector<std::string> args);

  bool is_attribute() const { return kind != SelectorKind::Present; }
  auto operator<=>(const Selector&) const = default;
};

std::string to_string(const Selector& s);

/// Absolute constraint on a pattern's start or finish mark: either a tick
/// interval or a calendar label.
struct MarkConstraint {
  std::optional<Interval> range;
  std::optional<std::string> label;

  static MarkConstraint of(Interval iv) { return {iv, std::nullopt}; }
  static MarkConstraint of(std::string lbl) { return {std::nullopt, std::move(lbl)}; }
  auto operator<=>(const MarkConstraint&) const = default;
};

/// One event slot `{sel & sel}@[TSi,TFi]`. Marks are variables unless
/// constrained. A pattern with `max_gap` matches a chain of same-description
/// events whose consecutive gaps are at most that many ticks.
struct EventPattern {
  std::vector<Selector> selectors;
  std::optional<MarkConstraint> start;
  std::optional<MarkConstraint> finish;
  std::optional<Tick> max_gap;

  bool vacuous() const { return selectors.empty() && !start && !finish && !max_gap; }
  auto operator<=>(const EventPattern&) const = default;
};

/// `[Tk(i,j) in [lo,hi]]` over pattern indices (0-based internally, 1-based in
/// text). Durations use first == second.
struct TemporalConstraint {
  TAttr attr = TAttr::T1;
  int first = 0;
  int second = 0;
  Interval range;

  auto operator<=>(const TemporalConstraint&) const = default;
};

std::string to_string(const TemporalConstraint& c);

struct RuleCondition {
  std::vector<EventPattern> patterns;
  std::vector<Selector> statics;
  std::vector<TemporalConstraint> temporals;

  // Canonical form: selectors sorted and deduplicated, pairwise temporal
  // constraints oriented first < second, durations spelled T5 for the first
  // pattern and T6 otherwise, duplicate constraints intersected, unbounded
  // ones dropped.
  void normalize();
  // Number of selectors, mark constraints and temporal constraints.
  std::size_t complexity() const;
  std::vector<std::string> variables() const;
  bool empty() const { return patterns.empty() && statics.empty() && temporals.empty(); }

  bool operator==(const RuleCondition&) const = default;
};

std::string to_string(const RuleCondition& c);
std::string to_string(const EventPattern& p, int index);

// Inverse of to_string; accepts any whitespace layout of the canonical syntax.
RuleCondition parse_condition(std::string_view text);
Selector parse_selector(std::string_view text);

struct ParsedRuleText {
  RuleCondition condition;
  std::string label;
};

// `<condition> => <class>`
ParsedRuleText parse_rule_text(std::string_view text);

// Reorients a pairwise constraint to (second, first); durations unchanged.
TemporalConstraint flip(const TemporalConstraint& c);

}  // namespace episodic
