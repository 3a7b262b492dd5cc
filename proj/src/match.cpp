#include "episodic/match.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace episodic {

bool selector_holds_on(const Selector& sel, const Atom& atom, const Schema& schema) {
  if (atom.name != sel.name || atom.args.size() != sel.args.size()) return false;
  switch (sel.kind) {
    case SelectorKind::Present: return atom.is_relation();
    case SelectorKind::ValueSet: {
      if (auto s = std::get_if<std::string>(&atom.value))
        return std::binary_search(sel.values.begin(), sel.values.end(), *s);
      if (auto v = std::get_if<Tick>(&atom.value))
        return std::binary_search(sel.values.begin(), sel.values.end(), std::to_string(*v));
      return false;
    }
    case SelectorKind::Range: {
      auto v = std::get_if<Tick>(&atom.value);
      return v && sel.range.contains(*v);
    }
    case SelectorKind::IsA: {
      auto s = std::get_if<std::string>(&atom.value);
      return s && schema.value_isa(sel.name, *s, sel.values.front());
    }
  }
  return false;
}

namespace {

using Objects = std::map<std::string, std::string>;

struct Span {
  Tick ts = 0, tf = 0;
};

bool mark_ok(const std::optional<MarkConstraint>& m, Tick tick, const Schema& schema) {
  if (!m) return true;
  if (m->range) return m->range->contains(tick);
  return schema.calendar.covers(*m->label, tick);
}

class Matcher {
 public:
  Matcher(const RuleCondition& cond, const Episode& ep, const Schema& schema,
          std::function<bool(const Binding&)> emit)
      : cond_(cond), ep_(ep), schema_(schema), emit_(std::move(emit)) {
    used_.assign(ep.events.size(), false);
    spans_.resize(cond.patterns.size());
    chains_.resize(cond.patterns.size());
    std::set<Atom> all;
    for (const auto& e : ep.events) all.insert(e.description.atoms.begin(), e.description.atoms.end());
    union_atoms_.assign(all.begin(), all.end());
    by_second_.resize(cond.patterns.size());
    for (const auto& t : cond.temporals) {
      int last = std::max(t.first, t.second);
      if (last < static_cast<int>(by_second_.size())) by_second_[last].push_back(&t);
    }
  }

  // Returns true once the callback asked to stop.
  bool run() {
    if (cond_.patterns.size() > ep_.events.size()) return false;
    return assign(0);
  }

 private:
  // Unifies selectors [i..] against atoms of `atoms`, extending `objects`.
  template <typename Cont>
  bool unify(const std::vector<Selector>& sels, std::size_t i, const std::vector<Atom>& atoms, Objects& objects,
             Cont&& cont) {
    if (i == sels.size()) return cont(objects);
    const Selector& sel = sels[i];
    for (const auto& atom : atoms) {
      if (!selector_holds_on(sel, atom, schema_)) continue;
      std::vector<std::string> fresh;
      bool ok = true;
      for (std::size_t a = 0; a < sel.args.size() && ok; ++a) {
        const std::string& term = sel.args[a];
        const std::string& obj = atom.args[a];
        if (!is_variable(term)) {
          ok = term == obj;
        } else if (auto it = objects.find(term); it != objects.end()) {
          ok = it->second == obj;
        } else {
          objects.emplace(term, obj);
          fresh.push_back(term);
        }
      }
      bool stop = ok && unify(sels, i + 1, atoms, objects, cont);
      for (const auto& v : fresh) objects.erase(v);
      if (stop) return true;
    }
    return false;
  }

  bool temporals_ok(int k) const {
    for (const auto* t : by_second_[k]) {
      const Span& a = spans_[t->first];
      const Span& b = spans_[t->second];
      if (!t->range.contains(temporal_value(t->attr, a.ts, a.tf, b.ts, b.tf))) return false;
    }
    return true;
  }

  bool place(int k) {
    const auto& pat = cond_.patterns[k];
    if (!mark_ok(pat.start, spans_[k].ts, schema_) || !mark_ok(pat.finish, spans_[k].tf, schema_)) return false;
    if (!temporals_ok(k)) return false;
    return assign(k + 1);
  }

  // Extends the chain of pattern k by further events after the current last one.
  bool extend_chain(int k) {
    if (place(k)) return true;
    const auto& pat = cond_.patterns[k];
    const Event& last = ep_.events[chains_[k].back()];
    for (std::size_t e = 0; e < ep_.events.size(); ++e) {
      if (used_[e]) continue;
      const Event& next = ep_.events[e];
      if (next.ts() < last.ts() || next.tf() < last.tf() || next.ts() - last.tf() > *pat.max_gap) continue;
      used_[e] = true;
      chains_[k].push_back(static_cast<int>(e));
      const Span saved = spans_[k];
      spans_[k].tf = next.tf();
      bool stop = unify(pat.selectors, 0, next.description.atoms, objects_, [&](Objects&) { return extend_chain(k); });
      spans_[k] = saved;
      chains_[k].pop_back();
      used_[e] = false;
      if (stop) return true;
    }
    return false;
  }

  bool assign(std::size_t k) {
    if (k == cond_.patterns.size()) {
      return unify(cond_.statics, 0, union_atoms_, objects_, [&](Objects& objs) {
        Binding b;
        b.events = chains_;
        for (const auto& [var, obj] : objs)
          if (is_variable(var)) b.objects.emplace(var, obj);
        return emit_(b);
      });
    }
    const auto& pat = cond_.patterns[k];
    for (std::size_t e = 0; e < ep_.events.size(); ++e) {
      if (used_[e]) continue;
      const Event& ev = ep_.events[e];
      used_[e] = true;
      chains_[k] = {static_cast<int>(e)};
      spans_[k] = {ev.ts(), ev.tf()};
      bool stop = unify(pat.selectors, 0, ev.description.atoms, objects_, [&](Objects&) {
        return pat.max_gap ? extend_chain(static_cast<int>(k)) : place(static_cast<int>(k));
      });
      used_[e] = false;
      chains_[k].clear();
      if (stop) return true;
    }
    return false;
  }

  const RuleCondition& cond_;
  const Episode& ep_;
  const Schema& schema_;
  std::function<bool(const Binding&)> emit_;
  std::vector<bool> used_;
  std::vector<Span> spans_;
  std::vector<std::vector<int>> chains_;
  std::vector<std::vector<const TemporalConstraint*>> by_second_;
  std::vector<Atom> union_atoms_;
  Objects objects_;
};

}  // namespace

std::vector<Binding> match_rule(const RuleCondition& cond, const Episode& ep, const Schema& schema) {
  std::set<Binding> found;
  Matcher(cond, ep, schema, [&](const Binding& b) {
    found.insert(b);
    return false;
  }).run();
  return {found.begin(), found.end()};
}

std::optional<Binding> first_match(const RuleCondition& cond, const Episode& ep, const Schema& schema) {
  std::optional<Binding> out;
  Matcher(cond, ep, schema, [&](const Binding& b) {
    out = b;
    return true;
  }).run();
  return out;
}

bool covers(const RuleCondition& cond, const Episode& ep, const Schema& schema) {
  return Matcher(cond, ep, schema, [](const Binding&) { return true; }).run();
}

std::string variable_for(const std::string& object) {
  if (object.empty()) return "X";
  std::string out = object;
  if (std::islower(static_cast<unsigned char>(out[0])))
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  else
    out = "O" + out;
  return out;
}

RuleCondition msc_rule(const Episode& ep) {
  RuleCondition cond;
  for (const auto& e : ep.events) {
    EventPattern p;
    for (const auto& atom : e.description.atoms) {
      std::vector<std::string> args;
      for (const auto& obj : atom.args) args.push_back(variable_for(obj));
      if (atom.is_relation()) {
        p.selectors.push_back(Selector::relation(atom.name, std::move(args)));
      } else if (auto v = std::get_if<Tick>(&atom.value)) {
        p.selectors.push_back(Selector::in_range(atom.name, args.front(), Interval::point(*v)));
      } else {
        p.selectors.push_back(Selector::value_set(atom.name, args.front(), {std::get<std::string>(atom.value)}));
      }
    }
    cond.patterns.push_back(std::move(p));
  }
  const int n = static_cast<int>(ep.events.size());
  for (int i = 0; i < n; ++i) {
    const Event& a = ep.events[i];
    cond.temporals.push_back({i == 0 ? TAttr::T5 : TAttr::T6, i, i, Interval::point(a.tf() - a.ts())});
    for (int j = i + 1; j < n; ++j) {
      auto tv = temporal_attributes(a, ep.events[j]);
      for (TAttr k : {TAttr::T1, TAttr::T2, TAttr::T3, TAttr::T4})
        cond.temporals.push_back({k, i, j, Interval::point(tv.get(k))});
    }
  }
  cond.normalize();
  return cond;
}

}  // namespace episodic
