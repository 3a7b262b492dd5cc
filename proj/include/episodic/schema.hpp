#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "episodic/event.hpp"
#include "episodic/label_tree.hpp"

namespace episodic {

enum class DomainKind { Nominal, Linear, Structured, Relation };

struct AttributeDomain {
  std::string name;
  DomainKind kind = DomainKind::Nominal;
  std::vector<std::string> values;  // nominal, in declaration order
  Tick lo = 0, hi = 0;              // linear
  LabelTree hierarchy;              // structured
  int arity = 2;                    // relation

  bool operator==(const AttributeDomain&) const = default;
};

/// Attribute and relation vocabulary plus an optional calendar hierarchy for
/// temporal marks. Matching consults it for structured values and labels.
class Schema {
 public:
  void add(AttributeDomain domain);
  const AttributeDomain* find(const std::string& name) const;
  const std::map<std::string, AttributeDomain>& domains() const { return domains_; }

  // IsA test for structured values; falls back to equality when the
  // attribute is unknown or unstructured.
  bool value_isa(const std::string& attr, const std::string& value, const std::string& node) const;

  TemporalHierarchy calendar;

  // Throws SchemaViolation naming the offending token.
  void check(const Atom& atom) const;
  void check(const Episode& ep) const;

  // An empty schema accepts anything; loaded schemas are strict.
  bool strict() const { return !domains_.empty(); }

  // Lines: `nominal <name> v...`, `linear <name> lo hi`, `structured <name>`
  // followed by `edge child parent` lines, `relation <name> [arity]`, and
  // optionally `calendar <path>` (relative to the schema file).
  static Schema parse(std::istream& in, const std::string& base_dir = ".");
  static Schema load(const std::string& path);

 private:
  std::map<std::string, AttributeDomain> domains_;
};

}  // namespace episodic
