#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/event.hpp"
#include "episodic/schema.hpp"

namespace episodic {

enum class OpKind {
  DropSelector,
  WidenInterval,
  ClimbHierarchy,
  ConstantToVariable,
  CloseValueInterval,
  TemporalVariablize,
  WidenTemporalInterval,
  ClimbTemporalHierarchy,
  CloseTemporalGap,
  DropTemporalConstraint,
  DropPattern,
};

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view text);

/// Where an operator acts. `pattern` and `index` are positions in the
/// normalized condition.
struct Locator {
  enum class Area { PatternSelector, Static, Temporal, StartMark, FinishMark, Pattern, PatternPair };
  Area area = Area::PatternSelector;
  int pattern = -1;
  int index = -1;  // selector / constraint index, or the second pattern of a pair

  auto operator<=>(const Locator&) const = default;
};

struct RefinementOp {
  OpKind kind = OpKind::DropSelector;
  Locator target;
  Interval bounds;    // WidenInterval, WidenTemporalInterval
  int levels = 1;     // Climb*
  std::string term;   // ConstantToVariable: the constant; CloseValueInterval: nominal value
  Tick value = 0;     // CloseValueInterval: linear value; CloseTemporalGap: gap tolerance

  auto operator<=>(const RefinementOp&) const = default;
};

std::string to_string(const RefinementOp& op);

/// Observed values per linear attribute, per temporal attribute and for
/// absolute marks. Interval widening steps to the next observed value, then
/// to infinity, which keeps enumeration finite.
class ValueLattice {
 public:
  ValueLattice() = default;
  explicit ValueLattice(std::span<const Episode> episodes);
  explicit ValueLattice(std::span<const Episode* const> episodes);

  void observe(const Episode& ep);

  const std::set<Tick>& linear(const std::string& attr) const;
  const std::set<Tick>& temporal(TAttr attr) const;
  const std::set<Tick>& marks() const { return marks_; }

  // Next observed value strictly below / above, or the matching infinity.
  static Tick step_down(const std::set<Tick>& values, Tick lo);
  static Tick step_up(const std::set<Tick>& values, Tick hi);

 private:
  std::map<std::string, std::set<Tick>> linear_;
  std::map<int, std::set<Tick>> temporal_;  // durations share T5's slot
  std::set<Tick> marks_;
};

/// Applies one operator. Results are normalized; generalizing parameters
/// yield a condition whose coverage contains the input's.
RuleCondition apply_operator(const RefinementOp& op, const RuleCondition& cond, const Schema& schema);

/// All single-step generalizations of `cond`, in a fixed order.
std::vector<std::pair<RefinementOp, RuleCondition>> enumerate_generalizations(const RuleCondition& cond,
                                                                              const ValueLattice& lattice,
                                                                              const Schema& schema,
                                                                              Tick gap_tolerance = 2);

/// Aq-style extend-against: greedily generalizes `seed` element by element
/// (object constants, then attribute selectors, then relations, then temporal
/// constraints and marks, then unconstrained patterns) while no negative is
/// covered. Throws SeedCoversNegative when the seed itself covers one.
RuleCondition extend_against(const RuleCondition& seed, std::span<const Episode* const> positives,
                             std::span<const Episode* const> negatives, const Schema& schema,
                             const ValueLattice& lattice);

}  // namespace episodic
