#include "episodic/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "episodic/error.hpp"
#include "episodic/kernels.hpp"
#include "episodic/match.hpp"
#include "episodic/subsumption.hpp"

namespace episodic {

namespace {

constexpr std::size_t kMaxBindings = 8;
constexpr std::size_t kThresholdsPerSide = 5;

std::vector<std::string> bound_objects(const Binding& b) {
  std::set<std::string> objs;
  for (const auto& [var, obj] : b.objects) objs.insert(obj);
  return {objs.begin(), objs.end()};
}

// Up to `limit` values spread over `values`, always keeping both ends.
std::vector<Tick> spread(const std::vector<Tick>& values, std::size_t limit) {
  if (values.size() <= limit) return values;
  std::vector<Tick> out;
  for (std::size_t i = 0; i < limit; ++i) out.push_back(values[i * (values.size() - 1) / (limit - 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void rename_variables(RuleCondition& c, const std::string& suffix) {
  auto lift = [&](Selector& s) {
    for (auto& a : s.args)
      if (is_variable(a)) a += suffix;
  };
  for (auto& p : c.patterns)
    for (auto& s : p.selectors) lift(s);
  for (auto& s : c.statics) lift(s);
}

RuleCondition conjoin(const RuleCondition& a, RuleCondition b) {
  RuleCondition out = a;
  const int shift = static_cast<int>(a.patterns.size());
  for (auto& p : b.patterns) out.patterns.push_back(std::move(p));
  for (auto& s : b.statics) out.statics.push_back(std::move(s));
  for (auto t : b.temporals) {
    t.first += shift;
    t.second += shift;
    out.temporals.push_back(t);
  }
  out.normalize();
  return out;
}

bool same_slot(const Selector& a, const Selector& b) { return a.name == b.name && a.args == b.args; }

}  // namespace

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::ExceptionRegistered: return "ExceptionRegistered";
    case ActionKind::LocalGeneralizationException: return "LocalGeneralizationException";
    case ActionKind::Specialized: return "Specialized";
    case ActionKind::Generalized: return "Generalized";
    case ActionKind::NewRule: return "NewRule";
    case ActionKind::MarkedProbabilistic: return "MarkedProbabilistic";
    case ActionKind::NoChange: return "NoChange";
  }
  return "?";
}

std::string to_string(const IncrementReport& r) {
  std::ostringstream out;
  out << '#' << r.seq << " role=" << to_string(r.role.role) << " invoked=";
  for (std::size_t i = 0; i < r.invoked.size(); ++i) out << (i ? "," : "") << r.invoked[i];
  if (r.invoked.empty()) out << '-';
  out << " action=";
  if (r.quarantined) {
    out << "Quarantined";
  } else if (r.actions.empty()) {
    out << "NoChange";
  } else {
    for (std::size_t i = 0; i < r.actions.size(); ++i) {
      out << (i ? "," : "") << to_string(r.actions[i].kind);
      if (!r.actions[i].rules.empty()) {
        out << '(';
        for (std::size_t j = 0; j < r.actions[i].rules.size(); ++j) out << (j ? " " : "") << r.actions[i].rules[j];
        out << ')';
      }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

struct Engine::Scored {
  RuleCondition cond;
  std::string key;
  double h = 0;
  std::size_t pos = 0;
  std::size_t neg = 0;
};

Engine::Engine(Schema schema, EngineConfig cfg) : schema_(std::move(schema)), cfg_(std::move(cfg)), rng_(cfg_.rng_seed) {
  cfg_.validate();
}

Engine::Engine(Schema schema, EngineConfig cfg, Rulebase resume) : Engine(std::move(schema), std::move(cfg)) {
  db_ = std::move(resume);
  for (const auto& [id, r] : db_.rules()) classes_.insert(r.label);
}

std::vector<const Episode*> Engine::episodes_where(const std::string& label, bool same, const RuleCondition* covered_by,
                                                   bool want_covered) const {
  std::vector<const Episode*> out;
  for (const auto* ep : store_.pointers()) {
    if ((ep->label == label) != same) continue;
    if (covered_by && covers(*covered_by, *ep, schema_) != want_covered) continue;
    out.push_back(ep);
  }
  return out;
}

std::vector<const Episode*> Engine::counted_episodes(const Rule& r, bool positives) const {
  std::vector<const Episode*> out;
  for (const auto& id : r.counted)
    if (const Episode* ep = store_.find(id); ep && (ep->label == r.label) == positives) out.push_back(ep);
  return out;
}

kernels::CoverCounts Engine::score_counts(const RuleCondition& c, const std::string& label) const {
  auto eps = store_.pointers();
  return kernels::count_coverage({&c, nullptr}, eps, label, schema_);
}

std::optional<int> Engine::find_rule(const RuleCondition& c, const std::string& label) const {
  std::optional<int> retired;
  for (const auto& [id, r] : db_.rules()) {
    if (r.label != label || r.condition != c) continue;
    if (!r.retired()) return id;
    if (!retired) retired = id;
  }
  return retired;
}

void Engine::count_new_rule(int id) {
  for (const auto* ep : store_.pointers()) db_.update_stats(id, *ep, schema_);
}

int Engine::add_rule(RuleCondition cond, const std::string& label, std::vector<RuleCondition> exceptions) {
  cond.normalize();
  Rule r;
  r.condition = std::move(cond);
  r.label = label;
  r.exceptions = std::move(exceptions);
  int id = db_.insert_rule(std::move(r), schema_);
  count_new_rule(id);
  classes_.insert(label);
  return id;
}

void Engine::observe(const Episode& ep) {
  schema_.check(ep);
  const Episode& stored = store_.add(ep);
  lattice_.observe(stored);
  classes_.insert(ep.label);
  for (const auto& [id, r] : db_.rules()) db_.update_stats(id, stored, schema_);
}

std::vector<int> Engine::covering_rules(const Episode& ep) const {
  std::vector<kernels::Guarded> guards;
  std::vector<int> ids;
  for (const auto& [id, r] : db_.rules()) {
    guards.push_back(r.guarded());
    ids.push_back(id);
  }
  auto mask = kernels::rules_covering(guards, ep, schema_);
  std::vector<int> out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (mask[i]) out.push_back(ids[i]);
  return out;
}

void Engine::evict_if_needed() {
  if (cfg_.retention_window == 0) return;
  while (store_.size() > cfg_.retention_window) {
    // Commonplace episodes are the forgettable ones; go oldest-first.
    std::string victim = store_.order().front();
    for (const auto& id : store_.order())
      if (roles_[id] == Role::Commonplace) {
        victim = id;
        break;
      }
    db_.forget(*store_.find(victim));
    store_.erase(victim);
    roles_.erase(victim);
  }
}

void Engine::refresh_status() {
  for (const auto& [id, r] : db_.rules()) {
    if (r.retired()) continue;
    const auto& sat = cfg_.satisfaction_for(r.label);
    const bool ok = entropy(r.stats) <= sat.max_entropy + 1e-12 && r.stats.pos >= sat.min_coverage;
    if (ok)
      db_.set_status(id, RuleStatus::Final);
    else if (r.status == RuleStatus::Final)
      db_.set_status(id, RuleStatus::Active);
  }
}

bool Engine::satisfied() const {
  if (classes_.empty()) return false;
  for (const auto& label : classes_) {
    bool found = std::any_of(db_.rules().begin(), db_.rules().end(), [&](const auto& kv) {
      return kv.second.label == label && kv.second.status == RuleStatus::Final;
    });
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

IncrementReport Engine::train_increment(const Episode& ep) {
  schema_.check(ep);
  if (store_.find(ep.id)) throw Error(ErrorCode::DuplicateId, "episode '" + ep.id + "' already stored");
  IncrementReport report;
  report.seq = ++seq_;
  report.episode = ep.id;
  classes_.insert(ep.label);

  const auto covering_all = covering_rules(ep);
  std::vector<int> covering;
  for (int id : covering_all)
    if (!db_.get(id).retired()) covering.push_back(id);
  report.role = classify_instance_role(db_, covering, ep, cfg_.merit);
  if (cfg_.quarantine_spurious && report.role.role == Role::Spurious) {
    report.quarantined = true;
    return report;
  }

  const Episode& stored = store_.add(ep);
  lattice_.observe(stored);
  roles_[stored.id] = report.role.role;
  for (int id : covering_all) db_.record(id, stored);

  report.invoked = invoke(db_, covering, stored.label, cfg_.merit.invoke_k, cfg_.merit);
  for (int id : report.invoked) {
    if (!std::binary_search(covering.begin(), covering.end(), id)) continue;
    auto b = first_match(db_.get(id).condition, stored, schema_);
    log_.push_back({id, seq_, b ? bound_objects(*b) : std::vector<std::string>{}});
  }

  for (int id : report.invoked) {
    const Rule& r = db_.get(id);
    if (r.retired() || r.stats.neg == 0) continue;
    auto action = repair_rule(id, stored);
    if (action.kind != ActionKind::NoChange) report.actions.push_back(std::move(action));
  }

  auto class_covered = [&] {
    return std::any_of(db_.rules().begin(), db_.rules().end(), [&](const auto& kv) {
      const Rule& r = kv.second;
      return !r.retired() && r.label == stored.label && r.counted.count(stored.id);
    });
  };
  if (!class_covered()) {
    const int before = db_.next_id();
    int id = generate_new_rule(stored);
    if (id >= before) report.actions.push_back({ActionKind::NewRule, {id}, rule_text(db_.get(id))});
  }

  // Same-class rules triggered together may be worth conjoining.
  std::vector<int> triggered;
  for (int id : report.invoked)
    if (std::binary_search(covering.begin(), covering.end(), id) && !db_.get(id).retired()) triggered.push_back(id);
  for (std::size_t i = 0; i < triggered.size(); ++i)
    for (std::size_t j = i + 1; j < triggered.size(); ++j) {
      int a = std::min(triggered[i], triggered[j]), b = std::max(triggered[i], triggered[j]);
      if (db_.get(a).label != db_.get(b).label || association_tried_.count({a, b})) continue;
      if (auto id = associate_and_specialize(a, b)) report.actions.push_back({ActionKind::Specialized, {a, b, *id}});
    }

  evict_if_needed();
  refresh_status();
  return report;
}

RunSummary Engine::run(std::span<const Episode> stream, std::vector<IncrementReport>* reports) {
  RunSummary summary;
  for (const auto& ep : stream) {
    auto report = train_increment(ep);
    ++summary.consumed;
    if (reports) reports->push_back(std::move(report));
    if (cfg_.stop_when_satisfied && satisfied()) {
      summary.satisfied = true;
      return summary;
    }
  }
  summary.satisfied = satisfied();
  return summary;
}

// ---------------------------------------------------------------------------

RepairAction Engine::repair_rule(int id, const Episode& ep) {
  const Rule& r = db_.get(id);
  (void)ep;
  if (r.status == RuleStatus::Probabilistic) return {ActionKind::NoChange, {id}};
  auto offenders = counted_episodes(r, false);
  if (offenders.empty()) return {ActionKind::NoChange, {id}};

  // Heuristic (1): a few offenders become point exceptions.
  if (r.exceptions.size() + offenders.size() <= cfg_.few_limit) {
    for (const auto* off : offenders) db_.register_exception(id, msc_rule(*off), store_, schema_);
    return {ActionKind::ExceptionRegistered, {id}};
  }

  // Heuristic (2): a moderate share is masked by generalized exceptions.
  auto masked_neg = episodes_where(r.label, false, &r.condition, true);
  if (static_cast<double>(masked_neg.size()) <=
      cfg_.moderate_fraction * static_cast<double>(r.stats.pos + masked_neg.size())) {
    auto keep = episodes_where(r.label, true, &r.condition, true);
    std::vector<RuleCondition> added;
    for (const auto* off : offenders) {
      if (std::any_of(added.begin(), added.end(), [&](const RuleCondition& c) { return covers(c, *off, schema_); }))
        continue;
      RuleCondition seed = msc_rule(*off), exc = seed;
      try {
        exc = extend_against(seed, offenders, keep, schema_, lattice_);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SeedCoversNegative) throw;
      }
      added.push_back(exc);
    }
    for (auto& exc : added) db_.register_exception(id, std::move(exc), store_, schema_);
    return {ActionKind::LocalGeneralizationException, {id}};
  }

  // Heuristic (3). A uniform rule whose known specializations do no better is
  // intrinsically probabilistic.
  const double h = entropy(r.stats);
  auto specs = db_.specializations_of(id, true);
  std::vector<int> covered_specs;
  for (int s : specs)
    if (db_.get(s).stats.coverage() > 0) covered_specs.push_back(s);
  if (h > 0 && !covered_specs.empty() && uniformness(db_, id, cfg_.merit.theta_u).uniform &&
      std::none_of(covered_specs.begin(), covered_specs.end(),
                   [&](int s) { return entropy(db_.get(s).stats) < h - cfg_.eps_eq; })) {
    db_.set_status(id, RuleStatus::Probabilistic);
    return {ActionKind::MarkedProbabilistic, {id}};
  }

  for (int s : db_.specializations_of(id))
    if (!db_.get(s).retired())
      if (auto a = dependency_refine(s, id); a.kind != ActionKind::NoChange) return a;
  for (int g : db_.generalizations_of(id))
    if (!db_.get(g).retired())
      if (auto a = dependency_refine(id, g); a.kind != ActionKind::NoChange) return a;

  auto positives = counted_episodes(db_.get(id), true);
  if (positives.empty()) return {ActionKind::NoChange, {id}};
  const int before = db_.next_id();
  int fresh = generate_new_rule(*positives.back());
  if (fresh < before) return {ActionKind::NoChange, {id}};
  return {ActionKind::NewRule, {id, fresh}, rule_text(db_.get(fresh))};
}

RepairAction Engine::dependency_refine(int r_id, int rg_id) {
  if (!db_.has_edge(rg_id, r_id))
    throw Error(ErrorCode::MissingEdge, "no edge " + std::to_string(rg_id) + " -> " + std::to_string(r_id));
  const Rule& r = db_.get(r_id);
  const Rule& rg = db_.get(rg_id);
  const double h = entropy(r.stats), hg = entropy(rg.stats);
  const bool r_uniform = uniformness(db_, r_id, cfg_.merit.theta_u).uniform;

  if (hg - h > cfg_.theta_og && r_uniform) {
    // Extend R's plateau up to the entropy cliff.
    auto negatives = episodes_where(r.label, false, &r.condition, false);
    auto positives = episodes_where(r.label, true, nullptr, true);
    RuleCondition cond = extend_against(r.condition, positives, negatives, schema_, lattice_);
    if (cond == r.condition || find_rule(cond, r.label)) return {ActionKind::NoChange, {r_id}};
    const std::string label = r.label;
    const std::size_t rg_pos = rg.stats.pos;
    int id = add_rule(cond, label, r.exceptions);
    RepairAction out{ActionKind::Generalized, {r_id, id}};
    const Rule& fresh = db_.get(id);
    if (fresh.stats.pos >= rg_pos && entropy(fresh.stats) < hg) {
      db_.set_status(rg_id, RuleStatus::Retired);
      out.rules.push_back(rg_id);
    }
    return out;
  }
  if (std::abs(hg - h) <= cfg_.eps_eq && r_uniform && uniformness(db_, rg_id, cfg_.merit.theta_u).uniform) {
    // Over-specialization: keep the simpler of the two.
    if (rg.condition.complexity() <= r.condition.complexity()) {
      db_.set_status(r_id, RuleStatus::Retired);
      return {ActionKind::Generalized, {r_id, rg_id}, "retired specialization"};
    }
    db_.set_status(rg_id, RuleStatus::Retired);
    return {ActionKind::Specialized, {r_id, rg_id}, "retired generalization"};
  }
  return {ActionKind::NoChange, {r_id}};
}

std::optional<int> Engine::associate_and_specialize(int r1, int r2) {
  const Rule& a = db_.get(r1);
  const Rule& b = db_.get(r2);
  if (a.label != b.label) throw Error(ErrorCode::ClassMismatch, "rules predict different classes");
  std::size_t spatial = 0, temporal = 0;
  for (const auto& e1 : log_) {
    if (e1.rule != r1) continue;
    bool near = false, same_objects = false;
    for (const auto& e2 : log_) {
      if (e2.rule != r2) continue;
      const Tick d = static_cast<Tick>(e1.tick) - static_cast<Tick>(e2.tick);
      if (std::abs(d) <= cfg_.assoc_window) near = true;
      if (e1.tick == e2.tick && !e1.objects.empty() && e1.objects == e2.objects) same_objects = true;
    }
    temporal += near;
    spatial += same_objects;
  }
  RuleCondition other = b.condition;
  if (spatial < cfg_.assoc_min_count) {
    if (temporal < cfg_.assoc_min_count) return std::nullopt;
    rename_variables(other, "_2");
  }
  association_tried_.insert({std::min(r1, r2), std::max(r1, r2)});
  RuleCondition conj = conjoin(a.condition, std::move(other));
  if (is_more_general(conj, a.condition, schema_) != Generality::MoreSpecific ||
      is_more_general(conj, b.condition, schema_) != Generality::MoreSpecific)
    return std::nullopt;
  if (find_rule(conj, a.label)) return std::nullopt;
  auto positives = episodes_where(a.label, true, nullptr, true);
  if (!kernels::any_covered(conj, positives, schema_)) return std::nullopt;
  return add_rule(std::move(conj), a.label);
}

// ---------------------------------------------------------------------------

int Engine::generate_new_rule(const Episode& ep) {
  const std::string& label = ep.label;
  auto positives = episodes_where(label, true, nullptr, true);
  auto negatives = episodes_where(label, false, nullptr, true);

  auto score = [&](RuleCondition c) {
    c.normalize();
    Scored s;
    auto counts = score_counts(c, label);
    s.pos = counts.pos;
    s.neg = counts.neg;
    s.h = entropy(counts.pos, counts.neg);
    s.key = to_string(c);
    s.cond = std::move(c);
    return s;
  };
  const bool shuffle = cfg_.rng_seed != 0;
  auto order = [&](std::vector<Scored>& v) {
    if (shuffle) std::shuffle(v.begin(), v.end(), rng_);
    std::stable_sort(v.begin(), v.end(), [&](const Scored& x, const Scored& y) {
      if (x.h != y.h) return x.h < y.h;
      if (x.pos != y.pos) return x.pos > y.pos;
      if (x.cond.complexity() != y.cond.complexity()) return x.cond.complexity() < y.cond.complexity();
      return !shuffle && x.key < y.key;
    });
  };

  std::vector<Scored> seen_all;
  std::set<std::string> seen_keys;
  using Expander = std::function<std::vector<RuleCondition>(const RuleCondition&, const Binding&)>;
  auto stage = [&](std::vector<Scored> beam, const Expander& expand, int steps) {
    for (int step = 0; step < steps; ++step) {
      std::vector<RuleCondition> kids;
      for (const auto& b : beam) {
        auto bindings = match_rule(b.cond, ep, schema_);
        if (bindings.size() > kMaxBindings) bindings.resize(kMaxBindings);
        for (const auto& binding : bindings)
          for (auto& k : expand(b.cond, binding)) {
            k.normalize();
            if (seen_keys.insert(to_string(k)).second) kids.push_back(std::move(k));
          }
      }
      if (kids.empty()) break;
      std::vector<Scored> scored(kids.size());
#pragma omp parallel for schedule(dynamic, 4) if (kids.size() >= 16)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(kids.size()); ++i) scored[i] = score(kids[i]);
      std::vector<Scored> pool = beam;
      for (auto& s : scored)
        if (covers(s.cond, ep, schema_)) pool.push_back(std::move(s));
      order(pool);
      if (pool.size() > cfg_.beam_width) pool.resize(cfg_.beam_width);
      bool same = pool.size() == beam.size() &&
                  std::equal(pool.begin(), pool.end(), beam.begin(), [](auto& x, auto& y) { return x.key == y.key; });
      beam = std::move(pool);
      for (const auto& s : beam) seen_all.push_back(s);
      if (same) break;
    }
    return beam;
  };

  // Stage 1: temporal skeleton.
  std::vector<Scored> beam;
  const std::size_t max_k = std::min(cfg_.gen_max_patterns, ep.events.size());
  for (std::size_t k = 1; k <= max_k; ++k) {
    RuleCondition c;
    c.patterns.resize(k);
    auto s = score(c);
    seen_keys.insert(s.key);
    beam.push_back(std::move(s));
  }
  order(beam);
  if (beam.size() > cfg_.beam_width) beam.resize(cfg_.beam_width);
  for (const auto& s : beam) seen_all.push_back(s);

  auto temporal_kids = [&](const RuleCondition& c, const Binding& b) {
    std::vector<RuleCondition> out;
    const int n = static_cast<int>(c.patterns.size());
    auto span_of = [&](int p) {
      return std::pair{ep.events[b.events[p].front()].ts(), ep.events[b.events[p].back()].tf()};
    };
    auto add = [&](TAttr attr, int i, int j) {
      bool present = std::any_of(c.temporals.begin(), c.temporals.end(), [&](const TemporalConstraint& t) {
        return t.attr == attr && t.first == i && t.second == j;
      });
      if (present) return;
      auto [ts1, tf1] = span_of(i);
      auto [ts2, tf2] = span_of(j);
      const Tick v = temporal_value(attr, ts1, tf1, ts2, tf2);
      std::vector<Tick> below, above;
      for (Tick t : lattice_.temporal(attr)) (t <= v ? below : above).push_back(t);
      if (below.empty() || below.back() != v) below.push_back(v);
      above.insert(above.begin(), v);
      if (above.size() > 1 && above[1] == v) above.erase(above.begin());
      for (Tick t : spread(below, kThresholdsPerSide)) {
        RuleCondition k = c;
        k.temporals.push_back({attr, i, j, Interval::at_least(t)});
        out.push_back(std::move(k));
      }
      for (Tick t : spread(above, kThresholdsPerSide)) {
        RuleCondition k = c;
        k.temporals.push_back({attr, i, j, Interval::at_most(t)});
        out.push_back(std::move(k));
      }
    };
    for (int i = 0; i < n; ++i) {
      add(i == 0 ? TAttr::T5 : TAttr::T6, i, i);
      for (int j = i + 1; j < n; ++j)
        for (TAttr attr : {TAttr::T1, TAttr::T2, TAttr::T3, TAttr::T4}) add(attr, i, j);
    }
    return out;
  };
  auto selector_kids = [&](bool relations) {
    return [&, relations](const RuleCondition& c, const Binding& b) {
      std::vector<RuleCondition> out;
      for (int p = 0; p < static_cast<int>(c.patterns.size()); ++p) {
        for (int ev : b.events[p]) {
          for (const auto& atom : ep.events[ev].description.atoms) {
            if (atom.is_relation() != relations) continue;
            std::vector<std::string> args;
            for (const auto& o : atom.args) args.push_back(variable_for(o));
            Selector sel;
            if (atom.is_relation())
              sel = Selector::relation(atom.name, args);
            else if (auto v = std::get_if<Tick>(&atom.value))
              sel = Selector::in_range(atom.name, args.front(), Interval::point(*v));
            else
              sel = Selector::value_set(atom.name, args.front(), {std::get<std::string>(atom.value)});
            const auto& sels = c.patterns[p].selectors;
            if (std::any_of(sels.begin(), sels.end(), [&](const Selector& s) { return same_slot(s, sel); })) continue;
            RuleCondition k = c;
            k.patterns[p].selectors.push_back(std::move(sel));
            out.push_back(std::move(k));
          }
        }
      }
      return out;
    };
  };

  beam = stage(std::move(beam), temporal_kids, 2);
  beam = stage(std::move(beam), selector_kids(true), 2);
  beam = stage(std::move(beam), selector_kids(false), 3);

  // Consistent survivors are widened to the entropy cliff; the msc seed competes.
  std::vector<Scored> finals;
  std::set<std::string> final_keys;
  auto push_final = [&](Scored s) {
    if (final_keys.insert(s.key).second) finals.push_back(std::move(s));
  };
  for (const auto& s : seen_all) {
    push_final(s);
    if (s.neg == 0 && s.pos > 0) push_final(score(extend_against(s.cond, positives, negatives, schema_, lattice_)));
  }
  RuleCondition msc = msc_rule(ep);
  if (!kernels::any_covered(msc, negatives, schema_))
    push_final(score(extend_against(msc, positives, negatives, schema_, lattice_)));
  else
    push_final(score(msc));
  std::erase_if(finals, [&](const Scored& s) { return !covers(s.cond, ep, schema_); });
  order(finals);

  const RuleCondition& best = finals.empty() ? msc : finals.front().cond;
  if (auto existing = find_rule(best, label)) {
    if (db_.get(*existing).retired()) db_.set_status(*existing, RuleStatus::Active);
    return *existing;
  }
  return add_rule(best, label);
}

}  // namespace episodic
