#include "episodic/kernels.hpp"

#include <atomic>

#include "episodic/match.hpp"

namespace episodic::kernels {

namespace {
// Below this many work items the fork/join overhead dominates.
constexpr std::ptrdiff_t kParallelThreshold = 64;
}  // namespace

bool guarded_covers(const Guarded& g, const Episode& ep, const Schema& schema) {
  if (!covers(*g.condition, ep, schema)) return false;
  if (g.exceptions)
    for (const auto& ex : *g.exceptions)
      if (covers(ex, ep, schema)) return false;
  return true;
}

std::vector<char> cover_mask_serial(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema) {
  std::vector<char> mask(eps.size(), 0);
  for (std::size_t i = 0; i < eps.size(); ++i) mask[i] = covers(cond, *eps[i], schema) ? 1 : 0;
  return mask;
}

std::vector<char> cover_mask(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema) {
  const auto n = static_cast<std::ptrdiff_t>(eps.size());
  std::vector<char> mask(eps.size(), 0);
#pragma omp parallel for schedule(dynamic, 8) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) mask[i] = covers(cond, *eps[i], schema) ? 1 : 0;
  return mask;
}

bool any_covered_serial(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema) {
  for (const auto* ep : eps)
    if (covers(cond, *ep, schema)) return true;
  return false;
}

bool any_covered(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema) {
  const auto n = static_cast<std::ptrdiff_t>(eps.size());
  if (n < kParallelThreshold) return any_covered_serial(cond, eps, schema);
  std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (found.load(std::memory_order_relaxed)) continue;
    if (covers(cond, *eps[i], schema)) found.store(true, std::memory_order_relaxed);
  }
  return found.load();
}

CoverCounts count_coverage_serial(const Guarded& g, std::span<const Episode* const> eps, const std::string& label,
                                  const Schema& schema) {
  CoverCounts out;
  for (const auto* ep : eps)
    if (guarded_covers(g, *ep, schema)) (ep->label == label ? out.pos : out.neg)++;
  return out;
}

CoverCounts count_coverage(const Guarded& g, std::span<const Episode* const> eps, const std::string& label,
                           const Schema& schema) {
  const auto n = static_cast<std::ptrdiff_t>(eps.size());
  std::size_t pos = 0, neg = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : pos, neg) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!guarded_covers(g, *eps[i], schema)) continue;
    if (eps[i]->label == label)
      ++pos;
    else
      ++neg;
  }
  return {pos, neg};
}

std::vector<char> rules_covering_serial(std::span<const Guarded> rules, const Episode& ep, const Schema& schema) {
  std::vector<char> mask(rules.size(), 0);
  for (std::size_t i = 0; i < rules.size(); ++i) mask[i] = guarded_covers(rules[i], ep, schema) ? 1 : 0;
  return mask;
}

std::vector<char> rules_covering(std::span<const Guarded> rules, const Episode& ep, const Schema& schema) {
  const auto n = static_cast<std::ptrdiff_t>(rules.size());
  std::vector<char> mask(rules.size(), 0);
#pragma omp parallel for schedule(dynamic, 4) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) mask[i] = guarded_covers(rules[i], ep, schema) ? 1 : 0;
  return mask;
}

}  // namespace episodic::kernels
