#include "episodic/temporal_network.hpp"

#include <algorithm>

namespace episodic {

std::pair<MarkRef, MarkRef> marks_of(TAttr attr, int first, int second) {
  switch (attr) {
    case TAttr::T1: return {{first, false}, {second, false}};
    case TAttr::T2: return {{first, true}, {second, false}};
    case TAttr::T3: return {{first, false}, {second, true}};
    case TAttr::T4: return {{first, true}, {second, true}};
    case TAttr::T5:
    case TAttr::T6: return {{first, false}, {first, true}};
  }
  return {};
}

TemporalNetwork::TemporalNetwork(const RuleCondition& cond, const Schema* schema)
    : size_(1 + 2 * static_cast<int>(cond.patterns.size())), dist_(size_ * size_, kPosInf) {
  for (int i = 0; i < size_; ++i) dist_[i * size_ + i] = 0;
  for (int p = 0; p < static_cast<int>(cond.patterns.size()); ++p) {
    const auto& pat = cond.patterns[p];
    bound({}, {p, false}, Interval::at_least(0));
    bound({p, false}, {p, true}, Interval::at_least(0));
    for (bool fin : {false, true}) {
      const auto& m = fin ? pat.finish : pat.start;
      if (!m) continue;
      if (m->range) {
        bound({}, {p, fin}, *m->range);
      } else if (schema && schema->calendar.contains(*m->label)) {
        bound({}, {p, fin}, schema->calendar.hull(*m->label));
      }
    }
  }
  for (const auto& t : cond.temporals) {
    if (t.first >= static_cast<int>(cond.patterns.size()) || t.second >= static_cast<int>(cond.patterns.size())) continue;
    auto [x, y] = marks_of(t.attr, t.first, t.second);
    bound(x, y, t.range);
  }
  for (int k = 0; k < size_; ++k)
    for (int i = 0; i < size_; ++i) {
      const Tick ik = dist_[i * size_ + k];
      if (ik == kPosInf) continue;
      for (int j = 0; j < size_; ++j) {
        const Tick kj = dist_[k * size_ + j];
        if (kj == kPosInf) continue;
        const Tick via = saturating_add(ik, kj);
        if (via < dist_[i * size_ + j]) dist_[i * size_ + j] = via;
      }
    }
  for (int i = 0; i < size_; ++i)
    if (dist_[i * size_ + i] < 0) consistent_ = false;
}

void TemporalNetwork::bound(MarkRef from, MarkRef to, Interval range) {
  const int x = node(from), y = node(to);
  Tick& up = dist_[x * size_ + y];
  up = std::min(up, range.hi);
  if (range.lo != kNegInf) {
    Tick& down = dist_[y * size_ + x];
    down = std::min(down, saturating_neg(range.lo));
  }
}

Interval TemporalNetwork::difference(MarkRef from, MarkRef to) const {
  const int x = node(from), y = node(to);
  return {saturating_neg(dist_[y * size_ + x]), dist_[x * size_ + y]};
}

Interval TemporalNetwork::implied(TAttr attr, int first, int second) const {
  auto [x, y] = marks_of(attr, first, second);
  return difference(x, y);
}

}  // namespace episodic
