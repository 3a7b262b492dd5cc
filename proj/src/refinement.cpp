#include "episodic/refinement.hpp"

#include <algorithm>
#include <array>

#include "episodic/error.hpp"
#include "episodic/kernels.hpp"
#include "episodic/match.hpp"
#include "episodic/temporal_network.hpp"

namespace episodic {

namespace {

constexpr std::array<std::string_view, 11> kOpNames = {
    "DropSelector",          "WidenInterval",          "ClimbHierarchy",   "ConstantToVariable",
    "CloseValueInterval",    "TemporalVariablize",     "WidenTemporalInterval", "ClimbTemporalHierarchy",
    "CloseTemporalGap",      "DropTemporalConstraint", "DropPattern",
};

[[noreturn]] void not_found(const std::string& what) { throw Error(ErrorCode::TargetNotFound, what); }
[[noreturn]] void illegal(const std::string& what) { throw Error(ErrorCode::IllegalParameter, what); }

Selector& selector_at(RuleCondition& c, const Locator& at) {
  if (at.area == Locator::Area::Static) {
    if (at.index < 0 || at.index >= static_cast<int>(c.statics.size())) not_found("static selector");
    return c.statics[at.index];
  }
  if (at.area != Locator::Area::PatternSelector) not_found("operator needs a selector target");
  if (at.pattern < 0 || at.pattern >= static_cast<int>(c.patterns.size())) not_found("pattern");
  auto& sels = c.patterns[at.pattern].selectors;
  if (at.index < 0 || at.index >= static_cast<int>(sels.size())) not_found("selector");
  return sels[at.index];
}

std::optional<MarkConstraint>& mark_at(RuleCondition& c, const Locator& at) {
  if (at.area != Locator::Area::StartMark && at.area != Locator::Area::FinishMark) not_found("operator needs a mark target");
  if (at.pattern < 0 || at.pattern >= static_cast<int>(c.patterns.size())) not_found("pattern");
  auto& p = c.patterns[at.pattern];
  return at.area == Locator::Area::StartMark ? p.start : p.finish;
}

TemporalConstraint& temporal_at(RuleCondition& c, const Locator& at) {
  if (at.area != Locator::Area::Temporal || at.index < 0 || at.index >= static_cast<int>(c.temporals.size()))
    not_found("temporal constraint");
  return c.temporals[at.index];
}

void check_pattern(const RuleCondition& c, int p) {
  if (p < 0 || p >= static_cast<int>(c.patterns.size())) not_found("pattern " + std::to_string(p + 1));
}

// Rebuilds a constraint on value(y) - value(x).
TemporalConstraint constraint_from_marks(MarkRef x, MarkRef y, Interval range) {
  if (x.pattern == y.pattern) {
    if (x.finish && !y.finish) {
      std::swap(x, y);
      range = range.negate();
    }
    return {TAttr::T5, x.pattern, x.pattern, range};
  }
  if (x.pattern > y.pattern) {
    std::swap(x, y);
    range = range.negate();
  }
  TAttr attr = !x.finish ? (!y.finish ? TAttr::T1 : TAttr::T3) : (!y.finish ? TAttr::T2 : TAttr::T4);
  return {attr, x.pattern, y.pattern, range};
}

std::string fresh_variable(const RuleCondition& c, const std::string& constant) {
  auto vars = c.variables();
  std::string base = variable_for(constant), name = base;
  for (int n = 2; std::binary_search(vars.begin(), vars.end(), name); ++n) name = base + "_" + std::to_string(n);
  return name;
}

bool has_constant(const RuleCondition& c, const std::string& constant) {
  auto in = [&](const Selector& s) { return std::find(s.args.begin(), s.args.end(), constant) != s.args.end(); };
  for (const auto& p : c.patterns)
    if (std::any_of(p.selectors.begin(), p.selectors.end(), in)) return true;
  return std::any_of(c.statics.begin(), c.statics.end(), in);
}

std::vector<std::string> constants_of(const RuleCondition& c) {
  std::set<std::string> out;
  auto collect = [&](const Selector& s) {
    for (const auto& a : s.args)
      if (!is_variable(a)) out.insert(a);
  };
  for (const auto& p : c.patterns)
    for (const auto& s : p.selectors) collect(s);
  for (const auto& s : c.statics) collect(s);
  return {out.begin(), out.end()};
}

void drop_pattern(RuleCondition& c, int p) {
  c.patterns.erase(c.patterns.begin() + p);
  std::vector<TemporalConstraint> kept;
  for (auto t : c.temporals) {
    if (t.first == p || t.second == p) continue;
    if (t.first > p) --t.first;
    if (t.second > p) --t.second;
    kept.push_back(t);
  }
  c.temporals = std::move(kept);
}

bool structured(const Selector& s, const Schema& schema) {
  const auto* d = schema.find(s.name);
  return d && d->kind == DomainKind::Structured;
}

std::optional<std::string> climbable_node(const Selector& s, const Schema& schema) {
  if (!structured(s, schema)) return std::nullopt;
  if (s.kind == SelectorKind::IsA || (s.kind == SelectorKind::ValueSet && s.values.size() == 1)) return s.values.front();
  return std::nullopt;
}

}  // namespace

std::string_view to_string(OpKind kind) { return kOpNames[static_cast<std::size_t>(kind)]; }

std::optional<OpKind> parse_op_kind(std::string_view text) {
  for (std::size_t i = 0; i < kOpNames.size(); ++i)
    if (kOpNames[i] == text) return static_cast<OpKind>(i);
  return std::nullopt;
}

std::string to_string(const RefinementOp& op) {
  std::string out(to_string(op.kind));
  out += "@";
  switch (op.target.area) {
    case Locator::Area::PatternSelector: out += "p" + std::to_string(op.target.pattern + 1) + ".s" + std::to_string(op.target.index + 1); break;
    case Locator::Area::Static: out += "static" + std::to_string(op.target.index + 1); break;
    case Locator::Area::Temporal: out += "t" + std::to_string(op.target.index + 1); break;
    case Locator::Area::StartMark: out += "p" + std::to_string(op.target.pattern + 1) + ".start"; break;
    case Locator::Area::FinishMark: out += "p" + std::to_string(op.target.pattern + 1) + ".finish"; break;
    case Locator::Area::Pattern: out += "p" + std::to_string(op.target.pattern + 1); break;
    case Locator::Area::PatternPair:
      out += "p" + std::to_string(op.target.pattern + 1) + "+p" + std::to_string(op.target.index + 1);
      break;
  }
  switch (op.kind) {
    case OpKind::WidenInterval:
    case OpKind::WidenTemporalInterval: out += to_string(op.bounds); break;
    case OpKind::ClimbHierarchy:
    case OpKind::ClimbTemporalHierarchy: out += "^" + std::to_string(op.levels); break;
    case OpKind::ConstantToVariable: out += ":" + op.term; break;
    case OpKind::CloseValueInterval: out += ":" + (op.term.empty() ? std::to_string(op.value) : op.term); break;
    case OpKind::CloseTemporalGap: out += "~" + std::to_string(op.value); break;
    default: break;
  }
  return out;
}

// ---------------------------------------------------------------------------

ValueLattice::ValueLattice(std::span<const Episode> episodes) {
  for (const auto& ep : episodes) observe(ep);
}

ValueLattice::ValueLattice(std::span<const Episode* const> episodes) {
  for (const auto* ep : episodes) observe(*ep);
}

void ValueLattice::observe(const Episode& ep) {
  const int n = static_cast<int>(ep.events.size());
  for (int i = 0; i < n; ++i) {
    const Event& a = ep.events[i];
    marks_.insert(a.ts());
    marks_.insert(a.tf());
    temporal_[5].insert(a.tf() - a.ts());
    for (const auto& atom : a.description.atoms)
      if (auto v = std::get_if<Tick>(&atom.value)) linear_[atom.name].insert(*v);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto tv = temporal_attributes(a, ep.events[j]);
      for (TAttr k : {TAttr::T1, TAttr::T2, TAttr::T3, TAttr::T4}) temporal_[static_cast<int>(k)].insert(tv.get(k));
    }
  }
}

const std::set<Tick>& ValueLattice::linear(const std::string& attr) const {
  static const std::set<Tick> none;
  auto it = linear_.find(attr);
  return it == linear_.end() ? none : it->second;
}

const std::set<Tick>& ValueLattice::temporal(TAttr attr) const {
  static const std::set<Tick> none;
  auto it = temporal_.find(is_duration(attr) ? 5 : static_cast<int>(attr));
  return it == temporal_.end() ? none : it->second;
}

Tick ValueLattice::step_down(const std::set<Tick>& values, Tick lo) {
  if (lo == kNegInf) return kNegInf;
  auto it = values.lower_bound(lo);
  if (it == values.begin()) return kNegInf;
  return *std::prev(it);
}

Tick ValueLattice::step_up(const std::set<Tick>& values, Tick hi) {
  if (hi == kPosInf) return kPosInf;
  auto it = values.upper_bound(hi);
  return it == values.end() ? kPosInf : *it;
}

// ---------------------------------------------------------------------------

RuleCondition apply_operator(const RefinementOp& op, const RuleCondition& cond, const Schema& schema) {
  RuleCondition c = cond;
  const Locator& at = op.target;
  switch (op.kind) {
    case OpKind::DropSelector: {
      selector_at(c, at);
      if (at.area == Locator::Area::Static)
        c.statics.erase(c.statics.begin() + at.index);
      else
        c.patterns[at.pattern].selectors.erase(c.patterns[at.pattern].selectors.begin() + at.index);
      break;
    }
    case OpKind::WidenInterval: {
      Selector& s = selector_at(c, at);
      if (s.kind != SelectorKind::Range) illegal("WidenInterval needs a linear selector");
      if (op.bounds.empty()) illegal("empty interval");
      s.range = op.bounds;
      break;
    }
    case OpKind::ClimbHierarchy: {
      Selector& s = selector_at(c, at);
      auto node = climbable_node(s, schema);
      if (!node) illegal("ClimbHierarchy needs a structured selector");
      if (op.levels < 1) illegal("levels must be positive");
      const auto& tree = schema.find(s.name)->hierarchy;
      if (!tree.parent(*node)) illegal("'" + *node + "' is already a root");
      s = Selector::isa(s.name, s.args.front(), tree.ancestor(*node, op.levels));
      break;
    }
    case OpKind::ConstantToVariable: {
      if (op.term.empty() || is_variable(op.term)) illegal("ConstantToVariable needs an object constant");
      if (!has_constant(c, op.term)) not_found("constant '" + op.term + "'");
      const std::string var = fresh_variable(c, op.term);
      auto lift = [&](Selector& s) { std::replace(s.args.begin(), s.args.end(), op.term, var); };
      for (auto& p : c.patterns)
        for (auto& s : p.selectors) lift(s);
      for (auto& s : c.statics) lift(s);
      break;
    }
    case OpKind::CloseValueInterval: {
      Selector& s = selector_at(c, at);
      if (s.kind == SelectorKind::Range) {
        s.range = s.range.hull(Interval::point(op.value));
      } else if (s.kind == SelectorKind::ValueSet) {
        if (op.term.empty()) illegal("CloseValueInterval on a value set needs a value");
        s.values.push_back(op.term);
      } else {
        illegal("CloseValueInterval needs a linear or nominal selector");
      }
      break;
    }
    case OpKind::TemporalVariablize: {
      if (at.area != Locator::Area::Pattern) not_found("TemporalVariablize needs a pattern target");
      check_pattern(c, at.pattern);
      auto& pat = c.patterns[at.pattern];
      if (!pat.start && !pat.finish) illegal("pattern has no temporal constants");
      TemporalNetwork net(cond, &schema);
      const int p = at.pattern;
      c.temporals.push_back({TAttr::T5, p, p, net.implied(TAttr::T5, p, p)});
      for (int q = 0; q < static_cast<int>(c.patterns.size()); ++q) {
        if (q == p) continue;
        const int lo = std::min(p, q), hi = std::max(p, q);
        for (TAttr k : {TAttr::T1, TAttr::T2, TAttr::T3, TAttr::T4}) c.temporals.push_back({k, lo, hi, net.implied(k, lo, hi)});
      }
      pat.start.reset();
      pat.finish.reset();
      break;
    }
    case OpKind::WidenTemporalInterval: {
      if (op.bounds.empty()) illegal("empty interval");
      if (at.area == Locator::Area::Temporal) {
        temporal_at(c, at).range = op.bounds;
      } else {
        auto& m = mark_at(c, at);
        if (!m || !m->range) illegal("mark is not an interval");
        m->range = op.bounds;
      }
      break;
    }
    case OpKind::ClimbTemporalHierarchy: {
      auto& m = mark_at(c, at);
      if (!m) illegal("mark is a variable");
      if (op.levels < 1) illegal("levels must be positive");
      const auto& cal = schema.calendar;
      if (m->label) {
        if (!cal.tree().parent(*m->label)) illegal("'" + *m->label + "' is already a root");
        m = MarkConstraint::of(cal.tree().ancestor(*m->label, op.levels));
      } else {
        auto leaf = m->range->lo == kNegInf ? std::nullopt : cal.leaf_for(m->range->lo);
        if (!leaf || !cal.covers(*leaf, *m->range))
          throw Error(ErrorCode::UnresolvedMark, "mark " + to_string(*m->range) + " lies in no single calendar leaf");
        m = MarkConstraint::of(cal.tree().ancestor(*leaf, op.levels));
      }
      break;
    }
    case OpKind::CloseTemporalGap: {
      if (at.area != Locator::Area::PatternPair) not_found("CloseTemporalGap needs a pattern pair");
      int p = std::min(at.pattern, at.index), q = std::max(at.pattern, at.index);
      check_pattern(c, p);
      check_pattern(c, q);
      if (p == q) illegal("pattern pair must be distinct");
      if (op.value < 0) illegal("negative gap tolerance");
      if (c.patterns[p].selectors != c.patterns[q].selectors) throw Error(ErrorCode::DescriptionMismatch, "patterns differ");
      TemporalNetwork net(cond, &schema);
      const bool chained = c.patterns[p].max_gap || c.patterns[q].max_gap;
      const Interval floor = Interval::at_least(0);
      if (!floor.contains(net.implied(TAttr::T1, p, q)) || !floor.contains(net.implied(TAttr::T4, p, q)))
        throw Error(ErrorCode::DegenerateOrder, "pattern " + std::to_string(q + 1) + " is not known to follow " + std::to_string(p + 1));
      const Interval gap = net.implied(TAttr::T2, p, q);
      if (!Interval::at_most(op.value).contains(gap))
        throw Error(ErrorCode::GapExceedsTolerance, "gap " + to_string(gap) + " not within " + std::to_string(op.value));
      if (chained && !floor.contains(gap)) throw Error(ErrorCode::DegenerateOrder, "chains may only be joined across a gap");

      EventPattern merged = c.patterns[p];
      merged.finish = c.patterns[q].finish;
      merged.max_gap = std::max({op.value, c.patterns[p].max_gap.value_or(0), c.patterns[q].max_gap.value_or(0)});
      std::vector<TemporalConstraint> kept;
      for (const auto& t : c.temporals) {
        auto [x, y] = marks_of(t.attr, t.first, t.second);
        auto remap = [&](MarkRef m) -> std::optional<MarkRef> {
          if (m.pattern == p) return m.finish ? std::nullopt : std::optional<MarkRef>(m);
          if (m.pattern == q) return m.finish ? std::optional<MarkRef>(MarkRef{p, true}) : std::nullopt;
          if (m.pattern > q) --m.pattern;
          return m;
        };
        auto nx = remap(x), ny = remap(y);
        if (!nx || !ny) continue;
        kept.push_back(constraint_from_marks(*nx, *ny, t.range));
      }
      c.patterns[p] = std::move(merged);
      c.patterns.erase(c.patterns.begin() + q);
      c.temporals = std::move(kept);
      break;
    }
    case OpKind::DropTemporalConstraint: {
      temporal_at(c, at);
      c.temporals.erase(c.temporals.begin() + at.index);
      break;
    }
    case OpKind::DropPattern: {
      if (at.area != Locator::Area::Pattern) not_found("DropPattern needs a pattern target");
      check_pattern(c, at.pattern);
      drop_pattern(c, at.pattern);
      break;
    }
  }
  c.normalize();
  return c;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<RefinementOp, RuleCondition>> enumerate_generalizations(const RuleCondition& cond,
                                                                              const ValueLattice& lattice,
                                                                              const Schema& schema,
                                                                              Tick gap_tolerance) {
  std::vector<std::pair<RefinementOp, RuleCondition>> out;
  auto emit = [&](RefinementOp op) {
    try {
      auto result = apply_operator(op, cond, schema);
      if (result != cond) out.emplace_back(std::move(op), std::move(result));
    } catch (const Error&) {
      // operator not applicable here
    }
  };
  auto selector_ops = [&](const Selector& s, Locator at) {
    emit({OpKind::DropSelector, at});
    if (s.kind == SelectorKind::Range) {
      const auto& values = lattice.linear(s.name);
      if (s.range.lo != kNegInf)
        emit({OpKind::WidenInterval, at, {ValueLattice::step_down(values, s.range.lo), s.range.hi}});
      if (s.range.hi != kPosInf)
        emit({OpKind::WidenInterval, at, {s.range.lo, ValueLattice::step_up(values, s.range.hi)}});
    }
    if (climbable_node(s, schema)) emit({OpKind::ClimbHierarchy, at, {}, 1});
  };

  const int np = static_cast<int>(cond.patterns.size());
  for (int p = 0; p < np; ++p) {
    const auto& pat = cond.patterns[p];
    for (int i = 0; i < static_cast<int>(pat.selectors.size()); ++i)
      selector_ops(pat.selectors[i], {Locator::Area::PatternSelector, p, i});
  }
  for (int i = 0; i < static_cast<int>(cond.statics.size()); ++i)
    selector_ops(cond.statics[i], {Locator::Area::Static, -1, i});
  for (const auto& constant : constants_of(cond)) {
    RefinementOp op{OpKind::ConstantToVariable, {}};
    op.term = constant;
    emit(op);
  }
  for (int p = 0; p < np; ++p) {
    const auto& pat = cond.patterns[p];
    if (pat.start || pat.finish) emit({OpKind::TemporalVariablize, {Locator::Area::Pattern, p}});
    for (auto area : {Locator::Area::StartMark, Locator::Area::FinishMark}) {
      const auto& m = area == Locator::Area::StartMark ? pat.start : pat.finish;
      if (!m) continue;
      Locator at{area, p};
      if (m->range) {
        if (m->range->lo != kNegInf)
          emit({OpKind::WidenTemporalInterval, at, {ValueLattice::step_down(lattice.marks(), m->range->lo), m->range->hi}});
        if (m->range->hi != kPosInf)
          emit({OpKind::WidenTemporalInterval, at, {m->range->lo, ValueLattice::step_up(lattice.marks(), m->range->hi)}});
      }
      if (!schema.calendar.empty()) emit({OpKind::ClimbTemporalHierarchy, at, {}, 1});
    }
  }
  for (int i = 0; i < static_cast<int>(cond.temporals.size()); ++i) {
    const auto& t = cond.temporals[i];
    Locator at{Locator::Area::Temporal, -1, i};
    emit({OpKind::DropTemporalConstraint, at});
    const auto& values = lattice.temporal(t.attr);
    if (t.range.lo != kNegInf) emit({OpKind::WidenTemporalInterval, at, {ValueLattice::step_down(values, t.range.lo), t.range.hi}});
    if (t.range.hi != kPosInf) emit({OpKind::WidenTemporalInterval, at, {t.range.lo, ValueLattice::step_up(values, t.range.hi)}});
  }
  for (int p = 0; p + 1 < np; ++p) {
    if (cond.patterns[p].selectors != cond.patterns[p + 1].selectors) continue;
    RefinementOp op{OpKind::CloseTemporalGap, {Locator::Area::PatternPair, p, p + 1}};
    op.value = gap_tolerance;
    emit(op);
  }
  for (int p = 0; p < np; ++p) {
    if (!cond.patterns[p].vacuous()) continue;
    bool referenced = std::any_of(cond.temporals.begin(), cond.temporals.end(),
                                  [&](const TemporalConstraint& t) { return t.first == p || t.second == p; });
    if (!referenced) emit({OpKind::DropPattern, {Locator::Area::Pattern, p}});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Extender {
 public:
  Extender(std::span<const Episode* const> negatives, const Schema& schema, const ValueLattice& lattice)
      : negatives_(negatives), schema_(schema), lattice_(lattice) {}

  bool clean(const RuleCondition& c) const { return !kernels::any_covered(c, negatives_, schema_); }

  // Smallest lower bound (from -inf and the observed values below `range.lo`)
  // keeping `c` clean; `set` installs a candidate bound.
  template <typename Set>
  Tick widen_lo(RuleCondition& c, const std::set<Tick>& values, Interval range, Set&& set) const {
    if (range.lo == kNegInf) return range.lo;
    std::vector<Tick> cand{kNegInf};
    for (auto it = values.begin(); it != values.end() && *it < range.lo; ++it) cand.push_back(*it);
    std::size_t lo = 0, hi = cand.size();  // answer in [lo, hi]; hi means keep the current bound
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      set(c, Interval{cand[mid], range.hi});
      if (clean(c))
        hi = mid;
      else
        lo = mid + 1;
    }
    Tick best = lo < cand.size() ? cand[lo] : range.lo;
    set(c, Interval{best, range.hi});
    return best;
  }

  template <typename Set>
  Tick widen_hi(RuleCondition& c, const std::set<Tick>& values, Interval range, Set&& set) const {
    if (range.hi == kPosInf) return range.hi;
    std::vector<Tick> cand{kPosInf};
    for (auto it = values.rbegin(); it != values.rend() && *it > range.hi; ++it) cand.push_back(*it);
    std::size_t lo = 0, hi = cand.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      set(c, Interval{range.lo, cand[mid]});
      if (clean(c))
        hi = mid;
      else
        lo = mid + 1;
    }
    Tick best = lo < cand.size() ? cand[lo] : range.hi;
    set(c, Interval{range.lo, best});
    return best;
  }

  // Generalizes the selector list in place; `attributes` picks the stage.
  void selectors(RuleCondition& c, std::vector<Selector>& (*list)(RuleCondition&, int), int owner, bool attributes) const {
    for (std::size_t i = 0; i < list(c, owner).size();) {
      Selector s = list(c, owner)[i];
      if (s.is_attribute() != attributes) {
        ++i;
        continue;
      }
      list(c, owner).erase(list(c, owner).begin() + i);
      if (clean(c)) continue;
      list(c, owner).insert(list(c, owner).begin() + i, s);
      if (s.kind == SelectorKind::Range) {
        const auto& values = lattice_.linear(s.name);
        auto set = [&](RuleCondition& cc, Interval iv) { list(cc, owner)[i].range = iv; };
        Tick lo = widen_lo(c, values, s.range, set);
        widen_hi(c, values, {lo, s.range.hi}, set);
      } else if (auto node = climbable_node(s, schema_)) {
        const auto& tree = schema_.find(s.name)->hierarchy;
        while (auto up = tree.parent(*node)) {
          Selector before = list(c, owner)[i];
          list(c, owner)[i] = Selector::isa(s.name, s.args.front(), *up);
          if (!clean(c)) {
            list(c, owner)[i] = before;
            break;
          }
          node = up;
        }
      }
      ++i;
    }
  }

 private:
  std::span<const Episode* const> negatives_;
  const Schema& schema_;
  const ValueLattice& lattice_;
};

std::vector<Selector>& pattern_selectors(RuleCondition& c, int p) { return c.patterns[p].selectors; }
std::vector<Selector>& static_selectors(RuleCondition& c, int) { return c.statics; }

}  // namespace

RuleCondition extend_against(const RuleCondition& seed, std::span<const Episode* const> positives,
                             std::span<const Episode* const> negatives, const Schema& schema,
                             const ValueLattice& lattice) {
  (void)positives;
  Extender ext(negatives, schema, lattice);
  if (!ext.clean(seed)) throw Error(ErrorCode::SeedCoversNegative, "seed covers a negative episode");
  RuleCondition c = seed;

  for (const auto& constant : constants_of(c)) {
    RefinementOp op{OpKind::ConstantToVariable, {}};
    op.term = constant;
    auto lifted = apply_operator(op, c, schema);
    if (ext.clean(lifted)) c = std::move(lifted);
  }

  // attributes, then relations
  for (bool attributes : {true, false}) {
    for (int p = 0; p < static_cast<int>(c.patterns.size()); ++p) ext.selectors(c, pattern_selectors, p, attributes);
    ext.selectors(c, static_selectors, -1, attributes);
  }

  // temporal constants become relative constraints, then those are widened
  for (int p = 0; p < static_cast<int>(c.patterns.size()); ++p) {
    if (!c.patterns[p].start && !c.patterns[p].finish) continue;
    auto lifted = apply_operator({OpKind::TemporalVariablize, {Locator::Area::Pattern, p}}, c, schema);
    if (ext.clean(lifted)) c = std::move(lifted);
  }
  c.normalize();
  for (std::size_t i = 0; i < c.temporals.size();) {
    TemporalConstraint t = c.temporals[i];
    c.temporals.erase(c.temporals.begin() + i);
    if (ext.clean(c)) continue;
    c.temporals.insert(c.temporals.begin() + i, t);
    const auto& values = lattice.temporal(t.attr);
    auto set = [&](RuleCondition& cc, Interval iv) { cc.temporals[i].range = iv; };
    Tick lo = ext.widen_lo(c, values, t.range, set);
    ext.widen_hi(c, values, {lo, t.range.hi}, set);
    ++i;
  }
  for (int p = static_cast<int>(c.patterns.size()) - 1; p >= 0; --p) {
    if (!c.patterns[p].selectors.empty() || c.patterns[p].start || c.patterns[p].finish) continue;
    RuleCondition dropped = c;
    drop_pattern(dropped, p);
    if (ext.clean(dropped)) c = std::move(dropped);
  }
  c.normalize();
  return c;
}

}  // namespace episodic
