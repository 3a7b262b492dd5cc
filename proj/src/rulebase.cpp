#include "episodic/rulebase.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "episodic/error.hpp"
#include "episodic/match.hpp"
#include "episodic/subsumption.hpp"

namespace episodic {

namespace {

constexpr std::array<std::string_view, 4> kStatusNames = {"Active", "Probabilistic", "Final", "Retired"};
constexpr std::string_view kHeader = "episodic-rulebase v1";

void uncount(Rule& r, const std::string& id, bool positive) {
  if (!r.counted.erase(id)) return;
  auto& n = positive ? r.stats.pos : r.stats.neg;
  if (n > 0) --n;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

std::string_view to_string(RuleStatus s) { return kStatusNames[static_cast<std::size_t>(s)]; }

std::optional<RuleStatus> parse_rule_status(std::string_view text) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i)
    if (kStatusNames[i] == text) return static_cast<RuleStatus>(i);
  return std::nullopt;
}

std::string rule_text(const Rule& r) { return to_string(r.condition) + " => " + r.label; }

// ---------------------------------------------------------------------------

const Episode& EpisodeStore::add(Episode ep) {
  auto id = ep.id;
  auto [it, fresh] = episodes_.emplace(id, std::move(ep));
  if (!fresh) throw Error(ErrorCode::DuplicateId, "episode '" + id + "' already stored");
  order_.push_back(id);
  return it->second;
}

const Episode* EpisodeStore::find(const std::string& id) const {
  auto it = episodes_.find(id);
  return it == episodes_.end() ? nullptr : &it->second;
}

void EpisodeStore::erase(const std::string& id) {
  if (!episodes_.erase(id)) return;
  order_.erase(std::find(order_.begin(), order_.end(), id));
}

std::vector<const Episode*> EpisodeStore::pointers() const {
  std::vector<const Episode*> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(&episodes_.at(id));
  return out;
}

// ---------------------------------------------------------------------------

const Rule* Rulebase::find(int id) const {
  auto it = rules_.find(id);
  return it == rules_.end() ? nullptr : &it->second;
}

const Rule& Rulebase::get(int id) const {
  const Rule* r = find(id);
  if (!r) throw Error(ErrorCode::UnknownRule, "no rule " + std::to_string(id));
  return *r;
}

Rule& Rulebase::get_mutable(int id) { return const_cast<Rule&>(get(id)); }

bool Rulebase::reachable(int from, int to) const {
  std::vector<int> stack{from};
  std::set<int> seen;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    if (cur == to) return true;
    if (!seen.insert(cur).second) continue;
    for (auto it = edges_.lower_bound({cur, INT32_MIN, {}}); it != edges_.end() && it->general == cur; ++it)
      stack.push_back(it->specific);
  }
  return false;
}

bool Rulebase::has_edge(int general, int specific) const {
  auto it = edges_.lower_bound({general, specific, {}});
  return it != edges_.end() && it->general == general && it->specific == specific;
}

void Rulebase::add_edge(int general, int specific, std::string witness) {
  get(general);
  get(specific);
  if (general == specific || reachable(specific, general))
    throw Error(ErrorCode::IllegalParameter,
                "edge " + std::to_string(general) + "->" + std::to_string(specific) + " would close a cycle");
  if (has_edge(general, specific)) return;
  edges_.insert({general, specific, std::move(witness)});
}

int Rulebase::insert_rule(Rule r, const Schema& schema) {
  if (r.id == 0) r.id = next_id_;
  if (rules_.count(r.id)) throw Error(ErrorCode::DuplicateId, "rule " + std::to_string(r.id) + " already exists");
  const int id = r.id;

  // Keep the DAG a transitive reduction: link only to the nearest
  // generalizations and specializations, and drop edges now routed via `r`.
  std::vector<int> generals, specifics;
  for (const auto& [oid, other] : rules_) {
    if (other.label != r.label) continue;
    switch (is_more_general(r.condition, other.condition, schema)) {
      case Generality::MoreGeneral: specifics.push_back(oid); break;
      case Generality::MoreSpecific: generals.push_back(oid); break;
      default: break;
    }
  }
  auto nearest = [&](const std::vector<int>& ids, bool up) {
    std::vector<int> out;
    for (int a : ids) {
      bool shadowed = std::any_of(ids.begin(), ids.end(),
                                  [&](int b) { return b != a && (up ? reachable(a, b) : reachable(b, a)); });
      if (!shadowed) out.push_back(a);
    }
    return out;
  };
  generals = nearest(generals, true);
  specifics = nearest(specifics, false);

  rules_.emplace(id, std::move(r));
  next_id_ = std::max(next_id_, id + 1);
  for (int g : generals)
    for (int s : specifics)
      std::erase_if(edges_, [&](const GenEdge& e) { return e.general == g && e.specific == s; });
  for (int g : generals) add_edge(g, id, "subsumption");
  for (int s : specifics) add_edge(id, s, "subsumption");
  return id;
}

bool Rulebase::evaluate(const Rule& r, const Episode& ep, const Schema& schema) const {
  ++evaluations_[r.id];
  return kernels::guarded_covers(r.guarded(), ep, schema);
}

std::size_t Rulebase::evaluations(int id) const {
  auto it = evaluations_.find(id);
  return it == evaluations_.end() ? 0 : it->second;
}

void Rulebase::record(int id, const Episode& ep) {
  Rule& r = get_mutable(id);
  if (!r.counted.insert(ep.id).second) return;
  ++(ep.label == r.label ? r.stats.pos : r.stats.neg);
}

bool Rulebase::update_stats(int id, const Episode& ep, const Schema& schema) {
  const Rule& r = get(id);
  if (r.counted.count(ep.id) || !evaluate(r, ep, schema)) return false;
  record(id, ep);
  return true;
}

void Rulebase::register_exception(int id, RuleCondition excl, const EpisodeStore& store, const Schema& schema) {
  Rule& r = get_mutable(id);
  excl.normalize();
  r.exceptions.push_back(std::move(excl));
  const RuleCondition& added = r.exceptions.back();
  std::vector<std::string> counted(r.counted.begin(), r.counted.end());
  for (const auto& eid : counted) {
    const Episode* ep = store.find(eid);
    if (!ep) continue;  // evicted or from an earlier session: cannot be re-examined
    ++evaluations_[id];
    if (covers(added, *ep, schema)) uncount(r, eid, ep->label == r.label);
  }
}

void Rulebase::forget(const Episode& ep) {
  for (auto& [id, r] : rules_) uncount(r, ep.id, ep.label == r.label);
}

RuleStats Rulebase::recount(int id, const EpisodeStore& store, const Schema& schema) const {
  const Rule& r = get(id);
  RuleStats s;
  for (const auto* ep : store.pointers())
    if (kernels::guarded_covers(r.guarded(), *ep, schema)) ++(ep->label == r.label ? s.pos : s.neg);
  return s;
}

std::vector<int> Rulebase::specializations_of(int id, bool transitive) const {
  get(id);
  std::set<int> out;
  std::vector<int> frontier{id};
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (const auto& e : edges_)
      if (e.general == cur && out.insert(e.specific).second && transitive) frontier.push_back(e.specific);
  }
  return {out.begin(), out.end()};
}

std::vector<int> Rulebase::generalizations_of(int id, bool transitive) const {
  get(id);
  std::set<int> out;
  std::vector<int> frontier{id};
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (const auto& e : edges_)
      if (e.specific == cur && out.insert(e.general).second && transitive) frontier.push_back(e.general);
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------

void Rulebase::write(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& [id, r] : rules_) {
    out << "rule " << id << ' ' << r.label << ' ' << r.stats.pos << ' ' << r.stats.neg << ' ' << to_string(r.status)
        << '\n';
    out << "  cond " << to_string(r.condition) << '\n';
    for (const auto& ex : r.exceptions) out << "  except " << to_string(ex) << '\n';
    if (!r.counted.empty()) {
      out << "  covers";
      for (const auto& eid : r.counted) out << ' ' << eid;
      out << '\n';
    }
  }
  for (const auto& e : edges_) out << "edge " << e.general << ' ' << e.specific << ' ' << e.witness << '\n';
}

Rulebase Rulebase::read(std::istream& in) {
  Rulebase db;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty rulebase file");
  ++lineno;
  if (line != kHeader) {
    if (line.rfind("episodic-rulebase", 0) == 0)
      throw Error(ErrorCode::VersionMismatch, "unsupported header '" + line + "'");
    throw ParseError(lineno, "missing 'episodic-rulebase v1' header");
  }
  Rule* current = nullptr;
  bool have_cond = false;
  auto finish_rule = [&] {
    if (current && !have_cond) throw ParseError(lineno, "rule " + std::to_string(current->id) + " has no cond line");
  };
  auto to_int = [&](const std::string& tok) -> long long {
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected a non-negative integer, got '" + tok + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const bool indented = line[0] == ' ' || line[0] == '\t';
    auto trimmed = line.substr(line.find_first_not_of(" \t"));
    auto toks = split_ws(trimmed);
    if (indented) {
      if (!current) throw ParseError(lineno, "indented line outside a rule");
      auto rest = [&](std::size_t skip) { return trimmed.substr(std::min(trimmed.size(), skip)); };
      try {
        if (toks[0] == "cond") {
          current->condition = parse_condition(rest(5));
          have_cond = true;
        } else if (toks[0] == "except") {
          current->exceptions.push_back(parse_condition(rest(7)));
        } else if (toks[0] == "covers") {
          current->counted.insert(toks.begin() + 1, toks.end());
        } else {
          throw ParseError(lineno, "unknown rule field '" + toks[0] + "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
      continue;
    }
    finish_rule();
    current = nullptr;
    if (toks[0] == "rule") {
      if (toks.size() != 6) throw ParseError(lineno, "expected 'rule <id> <class> <pos> <neg> <status>'");
      Rule r;
      r.id = static_cast<int>(to_int(toks[1]));
      r.label = toks[2];
      r.stats = {static_cast<std::size_t>(to_int(toks[3])), static_cast<std::size_t>(to_int(toks[4]))};
      auto status = parse_rule_status(toks[5]);
      if (!status) throw ParseError(lineno, "unknown status '" + toks[5] + "'");
      r.status = *status;
      if (r.id == 0 || db.rules_.count(r.id)) throw ParseError(lineno, "bad or duplicate rule id " + toks[1]);
      auto id = r.id;
      current = &db.rules_.emplace(id, std::move(r)).first->second;
      db.next_id_ = std::max(db.next_id_, id + 1);
      have_cond = false;
    } else if (toks[0] == "edge") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'edge <general> <specific> <witness>'");
      int g = static_cast<int>(to_int(toks[1])), s = static_cast<int>(to_int(toks[2]));
      if (!db.find(g) || !db.find(s)) throw ParseError(lineno, "edge references an unknown rule");
      try {
        db.add_edge(g, s, toks[3]);
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
    } else {
      throw ParseError(lineno, "unknown record '" + toks[0] + "'");
    }
  }
  finish_rule();
  // Stats must agree with the recorded coverage when it is present.
  for (const auto& [id, r] : db.rules_)
    if (!r.counted.empty() && r.counted.size() != r.stats.coverage())
      throw ParseError(lineno, "rule " + std::to_string(id) + ": covers list disagrees with stats");
  return db;
}

void Rulebase::save(const std::string& path) const {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    write(out);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move rulebase into '" + path + "'");
  }
}

Rulebase Rulebase::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return read(in);
}

}  // namespace episodic
