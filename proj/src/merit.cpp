#include "episodic/merit.hpp"

#include <algorithm>
#include <cmath>

#include "episodic/error.hpp"

namespace episodic {

double entropy(std::size_t pos, std::size_t neg) {
  const double n = static_cast<double>(pos + neg);
  if (n == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : {pos, neg}) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double emer(const RuleStats& s) {
  const double h = entropy(s);
  return std::max(h - entropy(s.pos + 1, s.neg), h - entropy(s.pos, s.neg + 1));
}

void MeritWeights::validate() const {
  for (double w : {entropy, confidence, cosmetic, emer})
    if (w < 0 || !std::isfinite(w)) throw Error(ErrorCode::ConfigError, "merit weights must be non-negative");
  if (std::abs(entropy + confidence + cosmetic + emer - 1.0) > 1e-9)
    throw Error(ErrorCode::ConfigError, "merit weights must sum to 1");
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Evidence: return "evidence";
    case Role::Spurious: return "spurious";
    case Role::Commonplace: return "commonplace";
    case Role::Neutral: return "neutral";
  }
  return "?";
}

double instance_delta(const RuleStats& before, bool positive) {
  RuleStats after = before;
  ++(positive ? after.pos : after.neg);
  return entropy(after) - entropy(before);
}

double instance_delta(const Rulebase& db, int id, const Episode& ep, const Schema& schema) {
  const Rule& r = db.get(id);
  if (!kernels::guarded_covers(r.guarded(), ep, schema)) return 0.0;
  return instance_delta(r.stats, ep.label == r.label);
}

InstanceRole classify_instance_role(const Rulebase& db, const std::vector<int>& covering, const Episode& ep,
                                    const MeritConfig& cfg) {
  InstanceRole out;
  std::optional<int> damaged;
  double damage = 0.0;
  bool any = false;
  for (int id : covering) {
    const Rule& r = db.get(id);
    if (r.retired()) continue;
    any = true;
    const double d = instance_delta(r.stats, ep.label == r.label);
    if (std::abs(d) > out.max_delta) {
      out.max_delta = std::abs(d);
      out.rule = id;
    }
    if (r.stats.coverage() >= cfg.n_conf && d >= cfg.theta_spur && d > damage) {
      damage = d;
      damaged = id;
    }
  }
  if (damaged) {
    out.role = Role::Spurious;
    out.rule = damaged;
  } else if (any && out.max_delta >= cfg.theta_evid) {
    out.role = Role::Evidence;
  } else if (any && out.max_delta <= cfg.theta_common) {
    out.role = Role::Commonplace;
  }
  return out;
}

InstanceRole classify_instance_role(const Rulebase& db, const Episode& ep, const Schema& schema,
                                    const MeritConfig& cfg) {
  std::vector<int> covering;
  for (const auto& [id, r] : db.rules())
    if (!r.retired() && kernels::guarded_covers(r.guarded(), ep, schema)) covering.push_back(id);
  return classify_instance_role(db, covering, ep, cfg);
}

UniformnessVerdict uniformness(const Rulebase& db, int id, double theta_u) {
  const Rule& r = db.get(id);
  const double h = entropy(r.stats);
  UniformnessVerdict v;
  for (int s : db.specializations_of(id, true)) {
    const Rule& spec = db.get(s);
    if (spec.stats.coverage() == 0) continue;
    const double gap = std::abs(h - entropy(spec.stats));
    if (gap > theta_u && gap > v.gap) {
      v.uniform = false;
      v.witness = s;
      v.gap = gap;
    }
  }
  return v;
}

double merit(const Rule& r, const MeritWeights& w, double kappa) {
  const double n = static_cast<double>(r.stats.coverage());
  const double efficacy = n > 0 ? 1.0 - entropy(r.stats) : 0.0;
  const double confidence = n / (n + kappa);
  const double simplicity = 1.0 / (1.0 + static_cast<double>(r.condition.complexity()));
  const double interest = std::clamp(emer(r.stats), 0.0, 1.0);
  return w.entropy * efficacy + w.confidence * confidence + w.cosmetic * simplicity + w.emer * interest;
}

std::vector<int> invoke(const Rulebase& db, const std::vector<int>& covering, const std::string& label, std::size_t k,
                        const MeritConfig& cfg) {
  std::set<int> candidates(covering.begin(), covering.end());
  for (const auto& [id, r] : db.rules())
    if (r.label == label) candidates.insert(id);
  std::vector<std::pair<double, int>> ranked;
  for (int id : candidates) {
    const Rule& r = db.get(id);
    if (!r.retired()) ranked.emplace_back(-merit(r, cfg.weights, cfg.kappa), id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

std::vector<int> invoke(const Rulebase& db, const Episode& ep, std::size_t k, const Schema& schema,
                        const MeritConfig& cfg) {
  std::vector<int> covering;
  for (const auto& [id, r] : db.rules())
    if (!r.retired() && kernels::guarded_covers(r.guarded(), ep, schema)) covering.push_back(id);
  return invoke(db, covering, ep.label, k, cfg);
}

}  // namespace episodic
