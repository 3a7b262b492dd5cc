#pragma once

#include <utility>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/schema.hpp"

namespace episodic {

/// A pattern's start or finish mark; pattern -1 denotes the time origin.
struct MarkRef {
  int pattern = -1;
  bool finish = false;

  auto operator<=>(const MarkRef&) const = default;
};

// (x, y) such that the attribute's value is mark y minus mark x.
std::pair<MarkRef, MarkRef> marks_of(TAttr attr, int first, int second);

/// Difference-constraint network over a condition's marks. All-pairs
/// shortest paths give the tightest range of any mark difference implied by
/// the temporal constraints, absolute mark constraints, non-negative ticks
/// and non-negative durations.
class TemporalNetwork {
 public:
  explicit TemporalNetwork(const RuleCondition& cond, const Schema* schema = nullptr);

  bool consistent() const { return consistent_; }
  // Range of value(to) - value(from).
  Interval difference(MarkRef from, MarkRef to) const;
  Interval absolute(MarkRef m) const { return difference({}, m); }
  Interval implied(TAttr attr, int first, int second) const;

 private:
  int node(MarkRef m) const { return m.pattern < 0 ? 0 : 1 + 2 * m.pattern + (m.finish ? 1 : 0); }
  void bound(MarkRef from, MarkRef to, Interval range);

  int size_;
  std::vector<Tick> dist_;
  bool consistent_ = true;
};

}  // namespace episodic
