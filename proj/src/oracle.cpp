#include "episodic/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "episodic/error.hpp"
#include "episodic/kernels.hpp"
#include "episodic/merit.hpp"

namespace episodic {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

// Selector choices for one attribute slot.
std::vector<Selector> slot_choices(const AttributeDomain& d, const std::string& var, const ValueLattice& lattice) {
  std::vector<Selector> out;
  switch (d.kind) {
    case DomainKind::Nominal:
      for (const auto& v : d.values) out.push_back(Selector::value_set(d.name, var, {v}));
      break;
    case DomainKind::Linear: {
      const auto& obs = lattice.linear(d.name);
      std::vector<Tick> bounds{kNegInf};
      bounds.insert(bounds.end(), obs.begin(), obs.end());
      bounds.push_back(kPosInf);
      for (std::size_t i = 0; i < bounds.size(); ++i)
        for (std::size_t j = i; j < bounds.size(); ++j) {
          Interval iv{bounds[i], bounds[j]};
          if (iv.unbounded() || iv.lo == kPosInf || iv.hi == kNegInf) continue;
          out.push_back(Selector::in_range(d.name, var, iv));
        }
      break;
    }
    case DomainKind::Structured:
      for (const auto& node : d.hierarchy.labels()) out.push_back(Selector::isa(d.name, var, node));
      break;
    case DomainKind::Relation:
      break;
  }
  return out;
}

// Every selector set drawing at most `limit` selectors from distinct slots.
void selector_sets(const std::vector<std::vector<Selector>>& slots, std::size_t limit, std::size_t from,
                   std::vector<Selector>& cur, std::vector<std::vector<Selector>>& out) {
  out.push_back(cur);
  if (cur.size() == limit) return;
  for (std::size_t s = from; s < slots.size(); ++s)
    for (const auto& sel : slots[s]) {
      cur.push_back(sel);
      selector_sets(slots, limit, s + 1, cur, out);
      cur.pop_back();
    }
}

struct Candidate {
  std::size_t index;
  double h;
  std::size_t pos, neg, selectors;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.h != b.h) return a.h < b.h;
  if (a.pos != b.pos) return a.pos > b.pos;
  if (a.selectors != b.selectors) return a.selectors < b.selectors;
  return a.index < b.index;
}

std::size_t selector_count(const RuleCondition& c) {
  std::size_t n = c.statics.size();
  for (const auto& p : c.patterns) n += p.selectors.size();
  return n;
}

OracleResult finish(std::vector<RuleCondition>& space, const std::optional<Candidate>& best) {
  OracleResult out;
  out.examined = space.size();
  if (!best) {
    out.entropy = 1.0;
    return out;
  }
  out.condition = std::move(space[best->index]);
  out.entropy = best->h;
  out.pos = best->pos;
  out.neg = best->neg;
  return out;
}

std::vector<const Episode*> pointers(std::span<const Episode> episodes) {
  std::vector<const Episode*> out;
  for (const auto& e : episodes) out.push_back(&e);
  return out;
}

std::optional<Candidate> evaluate(std::size_t i, const RuleCondition& c, std::span<const Episode* const> eps,
                                  const std::string& label, const Schema& schema) {
  auto counts = kernels::count_coverage_serial({&c, nullptr}, eps, label, schema);
  if (counts.pos == 0 || counts.neg > counts.pos) return std::nullopt;
  return Candidate{i, entropy(counts.pos, counts.neg), counts.pos, counts.neg, selector_count(c)};
}

}  // namespace

SpaceBounds SpaceBounds::parse(std::istream& in) {
  SpaceBounds b;
  std::string line;
  std::size_t lineno = 0;
  auto count = [&](const std::string& v) {
    try {
      std::size_t used = 0;
      long long n = std::stoll(v, &used);
      if (used == v.size() && n >= 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected a count, got '" + v + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "max_patterns") {
      b.max_patterns = count(value);
    } else if (key == "max_selectors") {
      b.max_selectors_per_pattern = count(value);
    } else if (key == "max_temporals") {
      b.max_temporals = count(value);
    } else if (key == "attributes") {
      b.attributes = split_list(value);
    } else if (key == "t_attributes") {
      b.allowed_t_attributes.clear();
      for (const auto& t : split_list(value)) {
        if (t.size() != 2 || t[0] != 'T' || t[1] < '1' || t[1] > '6')
          throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown attribute '" + t + "'");
        b.allowed_t_attributes.insert(static_cast<TAttr>(t[1] - '0'));
      }
    } else {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return b;
}

SpaceBounds SpaceBounds::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse(in);
}

void for_each_condition(const SpaceBounds& bounds, const Schema& schema, const ValueLattice& lattice,
                        const std::function<void(const RuleCondition&)>& fn) {
  std::vector<std::vector<Selector>> slots;
  auto add_slot = [&](const AttributeDomain& d) {
    auto choices = slot_choices(d, bounds.variable, lattice);
    if (!choices.empty()) slots.push_back(std::move(choices));
  };
  if (bounds.attributes.empty()) {
    for (const auto& [name, d] : schema.domains()) add_slot(d);
  } else {
    for (const auto& name : bounds.attributes) {
      const auto* d = schema.find(name);
      if (!d) throw Error(ErrorCode::ConfigError, "unknown attribute '" + name + "' in bounds");
      add_slot(*d);
    }
  }
  std::vector<std::vector<Selector>> sets;
  std::vector<Selector> cur;
  selector_sets(slots, bounds.max_selectors_per_pattern, 0, cur, sets);

  for (std::size_t np = 0; np <= bounds.max_patterns; ++np) {
    // Temporal constraint slots for this pattern count.
    std::vector<TemporalConstraint> tslots;
    for (int i = 0; i < static_cast<int>(np); ++i)
      for (int j = i; j < static_cast<int>(np); ++j)
        for (TAttr a : bounds.allowed_t_attributes) {
          if (is_duration(a) != (i == j)) continue;
          if (i == j && (a == TAttr::T5) != (i == 0)) continue;  // one spelling per duration
          for (Tick t : lattice.temporal(a)) {
            tslots.push_back({a, i, j, Interval::at_least(t)});
            tslots.push_back({a, i, j, Interval::at_most(t)});
          }
        }
    std::vector<std::vector<TemporalConstraint>> tsets{{}};
    for (std::size_t k = 0; k < bounds.max_temporals; ++k) {
      std::vector<std::vector<TemporalConstraint>> grown;
      for (const auto& s : tsets) {
        if (s.size() != k) continue;
        std::size_t start = 0;
        if (!s.empty()) start = std::find(tslots.begin(), tslots.end(), s.back()) - tslots.begin() + 1;
        for (std::size_t t = start; t < tslots.size(); ++t) {
          // one constraint per (attribute, pair)
          if (std::any_of(s.begin(), s.end(), [&](const TemporalConstraint& c) {
                return c.attr == tslots[t].attr && c.first == tslots[t].first && c.second == tslots[t].second;
              }))
            continue;
          auto g = s;
          g.push_back(tslots[t]);
          grown.push_back(std::move(g));
        }
      }
      tsets.insert(tsets.end(), grown.begin(), grown.end());
    }

    std::vector<std::size_t> choice(np, 0);
    for (;;) {
      for (const auto& ts : tsets) {
        std::set<int> referenced;
        for (const auto& t : ts) referenced.insert({t.first, t.second});
        bool redundant = false;
        RuleCondition c;
        for (std::size_t p = 0; p < np; ++p) {
          EventPattern pat;
          pat.selectors = sets[choice[p]];
          if (pat.selectors.empty() && !referenced.count(static_cast<int>(p))) redundant = true;
          c.patterns.push_back(std::move(pat));
        }
        if (redundant) continue;
        c.temporals = ts;
        c.normalize();
        fn(c);
      }
      std::size_t p = 0;
      while (p < np && ++choice[p] == sets.size()) choice[p++] = 0;
      if (p == np) break;
    }
  }
}

std::vector<RuleCondition> enumerate_rule_space(const SpaceBounds& bounds, const Schema& schema,
                                                const ValueLattice& lattice) {
  std::vector<RuleCondition> out;
  for_each_condition(bounds, schema, lattice, [&](const RuleCondition& c) { out.push_back(c); });
  return out;
}

OracleResult best_rule_bruteforce_serial(std::span<const Episode> episodes, const std::string& label,
                                         const SpaceBounds& bounds, const Schema& schema) {
  ValueLattice lattice(episodes);
  auto space = enumerate_rule_space(bounds, schema, lattice);
  auto eps = pointers(episodes);
  std::optional<Candidate> best;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (auto c = evaluate(i, space[i], eps, label, schema); c && (!best || better(*c, *best))) best = c;
  return finish(space, best);
}

OracleResult best_rule_bruteforce(std::span<const Episode> episodes, const std::string& label,
                                  const SpaceBounds& bounds, const Schema& schema) {
  ValueLattice lattice(episodes);
  auto space = enumerate_rule_space(bounds, schema, lattice);
  auto eps = pointers(episodes);
  const auto n = static_cast<std::ptrdiff_t>(space.size());
  std::optional<Candidate> best;
#pragma omp parallel
  {
    std::optional<Candidate> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i)
      if (auto c = evaluate(i, space[i], eps, label, schema); c && (!local || better(*c, *local))) local = c;
#pragma omp critical
    if (local && (!best || better(*local, *best))) best = local;
  }
  return finish(space, best);
}

}  // namespace episodic
