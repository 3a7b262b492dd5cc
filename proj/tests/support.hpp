#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/error.hpp"
#include "episodic/event.hpp"
#include "episodic/schema.hpp"
#include "episodic/synth.hpp"

namespace testing {

using namespace episodic;

inline Schema schema_from(const std::string& text) {
  std::istringstream in(text);
  return Schema::parse(in);
}

inline Schema machine_schema() { return schema_from("nominal state idle warmup run\nnominal temp low high\n"); }

// Every domain kind, for property tests.
inline Schema rich_schema() {
  return schema_from(
      "nominal state idle warmup run\n"
      "linear level 0 9\n"
      "structured shape\n"
      "edge circle round\nedge oval round\nedge square angular\nedge round any\nedge angular any\n"
      "relation near 2\n"
      "relation alarm 0\n");
}

// Code of the Error thrown by fn, or IoError as a "nothing thrown" sentinel.
template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

inline Event ev(std::vector<Atom> atoms, Tick s, Tick f) {
  Event e;
  e.description = EventDescription(std::move(atoms));
  e.start.tick = s;
  e.finish.tick = f;
  return e;
}

inline Atom nominal(const std::string& attr, const std::string& obj, const std::string& v) { return {attr, {obj}, v}; }
inline Atom linear(const std::string& attr, const std::string& obj, Tick v) { return {attr, {obj}, v}; }
inline Atom flag(const std::string& name) { return {name, {}, {}}; }

// Random ground atom drawn from the rich schema.
inline Atom random_atom(std::mt19937_64& rng, int objects) {
  auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
  auto obj = [&] { return "m" + std::to_string(1 + pick(objects)); };
  static const std::vector<std::string> states = {"idle", "warmup", "run"};
  static const std::vector<std::string> shapes = {"circle", "oval", "square", "round", "angular"};
  switch (pick(5)) {
    case 0: return nominal("state", obj(), states[pick(3)]);
    case 1: return linear("level", obj(), pick(10));
    case 2: return nominal("shape", obj(), shapes[pick(5)]);
    case 3: return {"near", {obj(), obj()}, {}};
    default: return flag("alarm");
  }
}

inline Episode random_episode(std::mt19937_64& rng, int max_events = 3, int objects = 2, Tick max_tick = 12,
                              const std::string& id = "r") {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Episode ep{id, {}, pick(0, 1) ? "pos" : "neg"};
  const int n = pick(1, max_events);
  for (int i = 0; i < n; ++i) {
    std::vector<Atom> atoms;
    for (int k = pick(1, 2); k > 0; --k) atoms.push_back(random_atom(rng, objects));
    const Tick s = pick(0, static_cast<int>(max_tick));
    ep.events.push_back(ev(std::move(atoms), s, s + pick(0, 4)));
  }
  return ep;
}

// Small random mutation: shift marks, swap an atom, or drop an event.
inline Episode mutate(const Episode& base, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Episode ep = base;
  for (auto& e : ep.events) {
    switch (pick(0, 5)) {
      case 0: {
        const Tick d = pick(-2, 2);
        e.start.tick = std::max<Tick>(0, e.start.tick + d);
        e.finish.tick = std::max(e.start.tick, e.finish.tick + d + pick(-1, 1));
        break;
      }
      case 1: {
        auto atoms = e.description.atoms;
        atoms[pick(0, static_cast<int>(atoms.size()) - 1)] = random_atom(rng, 2);
        e.description = EventDescription(std::move(atoms));
        break;
      }
      default: break;
    }
  }
  if (ep.events.size() > 1 && pick(0, 7) == 0) ep.events.erase(ep.events.begin() + pick(0, static_cast<int>(ep.events.size()) - 1));
  return ep;
}

/// Reference matcher written independently of the library's backtracking
/// matcher: enumerates every injective event assignment and every object
/// assignment. Gap-closed patterns are not supported.
class BruteMatcher {
 public:
  BruteMatcher(const RuleCondition& c, const Episode& ep, const Schema& schema) : c_(c), ep_(ep), schema_(schema) {
    std::set<std::string> vars;
    auto collect = [&](const Selector& s) {
      for (const auto& a : s.args)
        if (is_variable(a)) vars.insert(a);
    };
    for (const auto& p : c.patterns)
      for (const auto& s : p.selectors) collect(s);
    for (const auto& s : c.statics) collect(s);
    vars_.assign(vars.begin(), vars.end());
    objects_ = ep.objects();
  }

  std::size_t count() {
    assignment_.assign(c_.patterns.size(), -1);
    used_.assign(ep_.events.size(), false);
    total_ = 0;
    assign_pattern(0);
    return total_;
  }

 private:
  void assign_pattern(std::size_t p) {
    if (p == c_.patterns.size()) {
      if (!temporals_hold()) return;
      objects_bound_.clear();
      assign_var(0);
      return;
    }
    for (std::size_t e = 0; e < ep_.events.size(); ++e) {
      if (used_[e]) continue;
      used_[e] = true;
      assignment_[p] = static_cast<int>(e);
      assign_pattern(p + 1);
      used_[e] = false;
    }
  }

  void assign_var(std::size_t v) {
    if (v == vars_.size()) {
      if (selectors_hold()) ++total_;
      return;
    }
    for (const auto& o : objects_) {
      objects_bound_[vars_[v]] = o;
      assign_var(v + 1);
    }
  }

  bool temporals_hold() const {
    for (std::size_t p = 0; p < c_.patterns.size(); ++p) {
      const Event& e = ep_.events[assignment_[p]];
      const auto& pat = c_.patterns[p];
      if (pat.start && !mark_holds(*pat.start, e.ts())) return false;
      if (pat.finish && !mark_holds(*pat.finish, e.tf())) return false;
    }
    for (const auto& t : c_.temporals) {
      const Event& a = ep_.events[assignment_[t.first]];
      const Event& b = ep_.events[assignment_[t.second]];
      Tick v = 0;
      switch (t.attr) {
        case TAttr::T1: v = b.ts() - a.ts(); break;
        case TAttr::T2: v = b.ts() - a.tf(); break;
        case TAttr::T3: v = b.tf() - a.ts(); break;
        case TAttr::T4: v = b.tf() - a.tf(); break;
        case TAttr::T5:
        case TAttr::T6: v = a.tf() - a.ts(); break;
      }
      if (v < t.range.lo || v > t.range.hi) return false;
    }
    return true;
  }

  bool mark_holds(const MarkConstraint& m, Tick tick) const {
    if (m.range && (tick < m.range->lo || tick > m.range->hi)) return false;
    if (m.label && !schema_.calendar.covers(*m.label, tick)) return false;
    return true;
  }

  bool atom_satisfies(const Selector& s, const Atom& a) const {
    if (a.name != s.name || a.args.size() != s.args.size()) return false;
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      const std::string want = is_variable(s.args[i]) ? objects_bound_.at(s.args[i]) : s.args[i];
      if (a.args[i] != want) return false;
    }
    switch (s.kind) {
      case SelectorKind::Present: return a.is_relation();
      case SelectorKind::Range: {
        auto v = std::get_if<Tick>(&a.value);
        return v && *v >= s.range.lo && *v <= s.range.hi;
      }
      case SelectorKind::ValueSet: {
        auto v = std::get_if<std::string>(&a.value);
        return v && std::find(s.values.begin(), s.values.end(), *v) != s.values.end();
      }
      case SelectorKind::IsA: {
        auto v = std::get_if<std::string>(&a.value);
        return v && schema_.value_isa(s.name, *v, s.values.front());
      }
    }
    return false;
  }

  bool selectors_hold() const {
    for (std::size_t p = 0; p < c_.patterns.size(); ++p) {
      const auto& atoms = ep_.events[assignment_[p]].description.atoms;
      for (const auto& s : c_.patterns[p].selectors)
        if (std::none_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return atom_satisfies(s, a); })) return false;
    }
    for (const auto& s : c_.statics) {
      bool found = false;
      for (const auto& e : ep_.events)
        for (const auto& a : e.description.atoms) found = found || atom_satisfies(s, a);
      if (!found) return false;
    }
    return true;
  }

  const RuleCondition& c_;
  const Episode& ep_;
  const Schema& schema_;
  std::vector<std::string> vars_;
  std::vector<std::string> objects_;
  std::vector<int> assignment_;
  std::vector<bool> used_;
  std::map<std::string, std::string> objects_bound_;
  std::size_t total_ = 0;
};

inline bool brute_covers(const RuleCondition& c, const Episode& ep, const Schema& schema) {
  return BruteMatcher(c, ep, schema).count() > 0;
}

// Random condition over the rich schema with variables X and Y.
inline RuleCondition random_condition(std::mt19937_64& rng, int max_patterns = 2) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto var = [&] { return pick(0, 1) ? std::string("X") : std::string("Y"); };
  auto selector = [&]() -> Selector {
    switch (pick(0, 4)) {
      case 0: {
        static const std::vector<std::string> states = {"idle", "warmup", "run"};
        std::vector<std::string> vs{states[pick(0, 2)]};
        if (pick(0, 1)) vs.push_back(states[pick(0, 2)]);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return Selector::value_set("state", var(), vs);
      }
      case 1: {
        Tick lo = pick(0, 9), hi = lo + pick(0, 5);
        return Selector::in_range("level", var(), {pick(0, 4) ? lo : kNegInf, pick(0, 4) ? hi : kPosInf});
      }
      case 2: {
        static const std::vector<std::string> nodes = {"circle", "oval", "square", "round", "angular", "any"};
        return Selector::isa("shape", var(), nodes[pick(0, 5)]);
      }
      case 3: return Selector::relation("near", {var(), var()});
      default: return Selector::relation("alarm", {});
    }
  };
  RuleCondition c;
  const int np = pick(0, max_patterns);
  for (int p = 0; p < np; ++p) {
    EventPattern pat;
    for (int k = pick(0, 2); k > 0; --k) pat.selectors.push_back(selector());
    if (pick(0, 5) == 0) pat.start = MarkConstraint::of(Interval{pick(0, 5), pick(5, 12)});
    c.patterns.push_back(std::move(pat));
  }
  if (pick(0, 4) == 0) c.statics.push_back(selector());
  for (int k = np ? pick(0, 2) : 0; k > 0; --k) {
    int i = pick(0, np - 1), j = pick(0, np - 1);
    TAttr a;
    if (i == j)
      a = i == 0 ? TAttr::T5 : TAttr::T6;
    else
      a = static_cast<TAttr>(pick(1, 4));
    Tick lo = pick(-6, 6);
    c.temporals.push_back({a, std::min(i, j), std::max(i, j), {pick(0, 3) ? lo : kNegInf, pick(0, 3) ? lo + pick(0, 6) : kPosInf}});
    if (i > j) c.temporals.back() = flip(c.temporals.back());
  }
  c.normalize();
  return c;
}

inline SynthConfig fault_domain(std::size_t episodes, std::uint64_t seed, double noise) {
  std::istringstream in(
      "rule = {}@[TS1,TF1] & {}@[TS2,TF2] & [T2(1,2) in [1,+inf]] => fault\n"
      "default_class = normal\n"
      "events_per_episode = 2\n"
      "max_tick = 12\n"
      "max_duration = 5\n");
  SynthConfig cfg = SynthConfig::parse(in);
  cfg.episodes = episodes;
  cfg.rng_seed = seed;
  cfg.noise_rate = noise;
  return cfg;
}

// Probability that a random positive outscores a random negative; ties count half.
inline double auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  double wins = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      ++pairs;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  return pairs ? wins / static_cast<double>(pairs) : 0.0;
}

}  // namespace testing
