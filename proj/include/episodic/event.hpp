#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "episodic/interval.hpp"
#include "episodic/label_tree.hpp"

namespace episodic {

using AtomValue = std::variant<std::monostate, std::string, Tick>;

/// Ground atom of an event description: `attr(obj)=value`, `rel(a,b)` or a
/// bare proposition `flag`. Relations carry no value.
struct Atom {
  std::string name;
  std::vector<std::string> args;
  AtomValue value;

  bool is_relation() const { return std::holds_alternative<std::monostate>(value); }
  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& atom);

/// Sorted, duplicate-free set of atoms.
struct EventDescription {
  std::vector<Atom> atoms;

  EventDescription() = default;
  explicit EventDescription(std::vector<Atom> a);
  std::vector<std::string> objects() const;
  auto operator<=>(const EventDescription&) const = default;
};

std::string to_string(const EventDescription& d);

struct TemporalMark {
  Tick tick = 0;
  std::optional<std::string> calendar_tag;

  auto operator<=>(const TemporalMark&) const = default;
};

struct Event {
  EventDescription description;
  TemporalMark start;
  TemporalMark finish;

  Tick ts() const { return start.tick; }
  Tick tf() const { return finish.tick; }
  auto operator<=>(const Event&) const = default;
};

/// A class-labelled training instance.
struct Episode {
  std::string id;
  std::vector<Event> events;
  std::string label;

  std::vector<std::string> objects() const;
  bool operator==(const Episode&) const = default;
};

/// Throws SchemaViolation-free structural errors (IllegalParameter) for
/// episodes violating start <= finish, non-negative ticks, or emptiness.
void check_episode(const Episode& ep);

// T1..T4 relate an ordered pair, T5/T6 are the two durations.
enum class TAttr { T1 = 1, T2, T3, T4, T5, T6 };

inline bool is_duration(TAttr a) { return a == TAttr::T5 || a == TAttr::T6; }

struct TemporalAttributeVector {
  Tick t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0, t6 = 0;

  Tick get(TAttr a) const;
  auto operator<=>(const TemporalAttributeVector&) const = default;
};

TemporalAttributeVector temporal_attributes(const Event& e1, const Event& e2);

// Value of a pairwise attribute given the two spans; durations read the span
// of `first` for T5 and `second` for T6.
Tick temporal_value(TAttr a, Tick ts1, Tick tf1, Tick ts2, Tick tf2);

/// Climbs `levels` steps above the leaf the mark resolves to. The calendar
/// tag wins when present; otherwise the tick is looked up among leaf ranges.
std::string generalize_mark(const TemporalMark& m, const TemporalHierarchy& h, int levels);

/// Merges two same-description events separated by at most `gap_tolerance`
/// ticks into one spanning both. Overlapping events merge with gap 0.
Event close_temporal_gap(const Event& a, const Event& b, Tick gap_tolerance);

}  // namespace episodic
