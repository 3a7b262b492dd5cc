#include "episodic/subsumption.hpp"

#include <algorithm>
#include <functional>

#include "episodic/temporal_network.hpp"

namespace episodic {

std::string_view to_string(Generality g) {
  switch (g) {
    case Generality::MoreGeneral: return "MoreGeneral";
    case Generality::MoreSpecific: return "MoreSpecific";
    case Generality::Equal: return "Equal";
    case Generality::Incomparable: return "Incomparable";
  }
  return "";
}

namespace {

using VarMap = std::map<std::string, std::string>;

bool constraint_implies(const Selector& g, const Selector& s, const Schema& schema) {
  switch (g.kind) {
    case SelectorKind::Present: return s.kind == SelectorKind::Present;
    case SelectorKind::ValueSet:
      return s.kind == SelectorKind::ValueSet &&
             std::includes(g.values.begin(), g.values.end(), s.values.begin(), s.values.end());
    case SelectorKind::Range: return s.kind == SelectorKind::Range && g.range.contains(s.range);
    case SelectorKind::IsA:
      if (s.kind == SelectorKind::IsA) return schema.value_isa(g.name, s.values.front(), g.values.front());
      if (s.kind == SelectorKind::ValueSet)
        return std::all_of(s.values.begin(), s.values.end(),
                           [&](const std::string& v) { return schema.value_isa(g.name, v, g.values.front()); });
      return false;
  }
  return false;
}

// A general pattern lands on one specific pattern or, when gap-closed, on an
// ordered pair whose union forms a valid chain.
struct Target {
  int first = -1;
  int last = -1;
};

class Subsumer {
 public:
  Subsumer(const RuleCondition& g, const RuleCondition& s, const Schema& schema)
      : g_(g), s_(s), schema_(schema), net_(s, &schema) {
    used_.assign(s.patterns.size(), false);
    targets_.resize(g.patterns.size());
  }

  bool run() {
    if (!net_.consistent()) return true;
    if (g_.patterns.size() > s_.patterns.size() * 2) return false;
    return map_pattern(0);
  }

 private:
  MarkRef mapped(MarkRef m) const {
    if (m.pattern < 0) return m;
    const Target& t = targets_[m.pattern];
    return m.finish ? MarkRef{t.last, true} : MarkRef{t.first, false};
  }

  bool mark_implied(const std::optional<MarkConstraint>& gm, MarkRef sm) const {
    if (!gm) return true;
    const auto& sp = s_.patterns[sm.pattern];
    const auto& smark = sm.finish ? sp.finish : sp.start;
    if (gm->label) {
      if (smark && smark->label && schema_.calendar.tree().is_ancestor_or_self(*gm->label, *smark->label)) return true;
      Interval iv = net_.absolute(sm);
      if (iv.lo == kNegInf || iv.hi == kPosInf) return false;
      return schema_.calendar.covers(*gm->label, iv);
    }
    return gm->range->contains(net_.absolute(sm));
  }

  bool selectors_for(const std::vector<Selector>& gsels, std::size_t i, const std::vector<int>& spats, VarMap& vars,
                     const std::function<bool(VarMap&)>& cont) {
    if (i == gsels.size() * spats.size()) return cont(vars);
    const Selector& gsel = gsels[i % gsels.size()];
    const auto& ssels = s_.patterns[spats[i / gsels.size()]].selectors;
    for (const auto& ssel : ssels) {
      VarMap trial = vars;
      if (!selector_implies(gsel, ssel, trial, schema_)) continue;
      if (selectors_for(gsels, i + 1, spats, trial, cont)) return true;
    }
    return false;
  }

  bool statics_for(std::size_t i, VarMap& vars) {
    if (i == g_.statics.size()) return true;
    auto attempt = [&](const Selector& ssel) {
      VarMap trial = vars;
      return selector_implies(g_.statics[i], ssel, trial, schema_) && statics_for(i + 1, trial);
    };
    for (const auto& ssel : s_.statics)
      if (attempt(ssel)) return true;
    for (const auto& sp : s_.patterns)
      for (const auto& ssel : sp.selectors)
        if (attempt(ssel)) return true;
    return false;
  }

  bool temporals_ok() const {
    for (const auto& t : g_.temporals) {
      auto [x, y] = marks_of(t.attr, t.first, t.second);
      if (!t.range.contains(net_.difference(mapped(x), mapped(y)))) return false;
    }
    return true;
  }

  bool try_target(std::size_t k, Target t, VarMap& vars) {
    const auto& gp = g_.patterns[k];
    targets_[k] = t;
    if (!mark_implied(gp.start, {t.first, false}) || !mark_implied(gp.finish, {t.last, true})) return false;
    std::vector<int> spats{t.first};
    if (t.last != t.first) spats.push_back(t.last);
    auto next = [&](VarMap& extended) {
      VarMap saved = vars_;
      vars_ = extended;
      bool ok = map_pattern(k + 1);
      vars_ = saved;
      return ok;
    };
    if (gp.selectors.empty()) return next(vars);
    return selectors_for(gp.selectors, 0, spats, vars, next);
  }

  bool map_pattern(std::size_t k) {
    if (k == g_.patterns.size()) {
      if (!temporals_ok()) return false;
      VarMap vars = vars_;
      return statics_for(0, vars);
    }
    const auto& gp = g_.patterns[k];
    const int n = static_cast<int>(s_.patterns.size());
    for (int q = 0; q < n; ++q) {
      if (used_[q]) continue;
      const auto& sp = s_.patterns[q];
      bool single_ok = !sp.max_gap || (gp.max_gap && *sp.max_gap <= *gp.max_gap);
      used_[q] = true;
      VarMap vars = vars_;
      if (single_ok && try_target(k, {q, q}, vars)) return true;
      if (gp.max_gap && !sp.max_gap) {
        for (int r = 0; r < n; ++r) {
          if (used_[r] || s_.patterns[r].max_gap) continue;
          const bool forward = Interval::at_least(0).contains(net_.implied(TAttr::T1, q, r)) &&
                               Interval::at_least(0).contains(net_.implied(TAttr::T4, q, r));
          const bool close = Interval::at_most(*gp.max_gap).contains(net_.implied(TAttr::T2, q, r));
          if (!forward || !close) continue;
          used_[r] = true;
          VarMap pair_vars = vars_;
          bool ok = try_target(k, {q, r}, pair_vars);
          used_[r] = false;
          if (ok) {
            used_[q] = false;
            return true;
          }
        }
      }
      used_[q] = false;
    }
    return false;
  }

  const RuleCondition& g_;
  const RuleCondition& s_;
  const Schema& schema_;
  TemporalNetwork net_;
  std::vector<bool> used_;
  std::vector<Target> targets_;
  VarMap vars_;
};

}  // namespace

bool selector_implies(const Selector& general, const Selector& specific, VarMap& vars, const Schema& schema) {
  if (general.name != specific.name || general.args.size() != specific.args.size()) return false;
  if (!constraint_implies(general, specific, schema)) return false;
  VarMap trial = vars;
  for (std::size_t i = 0; i < general.args.size(); ++i) {
    const std::string& g = general.args[i];
    const std::string& s = specific.args[i];
    if (!is_variable(g)) {
      if (g != s) return false;
      continue;
    }
    auto [it, fresh] = trial.emplace(g, s);
    if (!fresh && it->second != s) return false;
  }
  vars = std::move(trial);
  return true;
}

bool subsumes(const RuleCondition& general, const RuleCondition& specific, const Schema& schema) {
  return Subsumer(general, specific, schema).run();
}

Generality is_more_general(const RuleCondition& a, const RuleCondition& b, const Schema& schema) {
  const bool ab = subsumes(a, b, schema);
  const bool ba = subsumes(b, a, schema);
  if (ab && ba) return Generality::Equal;
  if (ab) return Generality::MoreGeneral;
  if (ba) return Generality::MoreSpecific;
  return Generality::Incomparable;
}

}  // namespace episodic
