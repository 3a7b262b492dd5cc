#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/event.hpp"
#include "episodic/schema.hpp"

// Data-parallel coverage kernels. Each OpenMP kernel has a serial twin kept
// as the reference the tests and the benchmark compare against. Results are
// independent of thread scheduling.
namespace episodic::kernels {

/// A condition masked by its exception list.
struct Guarded {
  const RuleCondition* condition = nullptr;
  const std::vector<RuleCondition>* exceptions = nullptr;
};

bool guarded_covers(const Guarded& g, const Episode& ep, const Schema& schema);

// One flag per episode: does `cond` cover it?
std::vector<char> cover_mask_serial(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema);
std::vector<char> cover_mask(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema);

bool any_covered_serial(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema);
bool any_covered(const RuleCondition& cond, std::span<const Episode* const> eps, const Schema& schema);

struct CoverCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;

  bool operator==(const CoverCounts&) const = default;
};

// Positives are episodes labelled `label`.
CoverCounts count_coverage_serial(const Guarded& g, std::span<const Episode* const> eps, const std::string& label,
                                  const Schema& schema);
CoverCounts count_coverage(const Guarded& g, std::span<const Episode* const> eps, const std::string& label,
                           const Schema& schema);

// One flag per rule: does it cover `ep`?
std::vector<char> rules_covering_serial(std::span<const Guarded> rules, const Episode& ep, const Schema& schema);
std::vector<char> rules_covering(std::span<const Guarded> rules, const Episode& ep, const Schema& schema);

}  // namespace episodic::kernels
