#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "episodic/interval.hpp"

namespace episodic {

/// A forest of labels linked child -> parent. Used both for structured
/// attribute domains and for the abstraction levels of temporal marks.
class LabelTree {
 public:
  void add_node(const std::string& label);
  // Throws IllegalParameter if the edge would give `child` a second parent or a cycle.
  void add_edge(const std::string& child, const std::string& parent);

  bool contains(const std::string& label) const { return parent_.count(label) != 0; }
  std::optional<std::string> parent(const std::string& label) const;
  // Clamped at the root.
  std::string ancestor(const std::string& label, int levels) const;
  // True when `ancestor` is `label` or one of its ancestors.
  bool is_ancestor_or_self(const std::string& ancestor, const std::string& label) const;
  int depth(const std::string& label) const;
  std::vector<std::string> children(const std::string& label) const;
  std::vector<std::string> labels() const;
  bool empty() const { return parent_.empty(); }

  bool operator==(const LabelTree&) const = default;

 private:
  std::map<std::string, std::string> parent_;  // root maps to ""
};

/// Label hierarchy over tick ranges: leaves own half-open ranges [lo, hi),
/// inner labels cover the union of their descendants' ranges.
class TemporalHierarchy {
 public:
  void add_leaf(const std::string& label, Tick lo, Tick hi);
  void add_edge(const std::string& child, const std::string& parent);
  // Leaf ranges pairwise disjoint; all labels in one tree structure.
  void validate() const;

  bool empty() const { return tree_.empty(); }
  bool contains(const std::string& label) const { return tree_.contains(label); }
  const LabelTree& tree() const { return tree_; }

  // Leaf whose range contains the tick, if exactly one does.
  std::optional<std::string> leaf_for(Tick tick) const;
  bool is_leaf(const std::string& label) const { return leaves_.count(label) != 0; }
  // Closed intervals of ticks covered by the label, merged and sorted.
  std::vector<Interval> coverage(const std::string& label) const;
  bool covers(const std::string& label, Tick tick) const;
  // True when every tick in `iv` is covered by `label`.
  bool covers(const std::string& label, const Interval& iv) const;
  // Smallest closed interval containing the label's coverage.
  Interval hull(const std::string& label) const;

  static TemporalHierarchy parse(std::istream& in);
  static TemporalHierarchy load(const std::string& path);

  bool operator==(const TemporalHierarchy&) const = default;

 private:
  LabelTree tree_;
  std::map<std::string, Interval> leaves_;  // stored closed: [lo, hi-1]
};

}  // namespace episodic
