#include "episodic/label_tree.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "episodic/error.hpp"

namespace episodic {

void LabelTree::add_node(const std::string& label) { parent_.emplace(label, ""); }

void LabelTree::add_edge(const std::string& child, const std::string& parent) {
  add_node(parent);
  auto it = parent_.find(child);
  if (it != parent_.end() && !it->second.empty() && it->second != parent)
    throw Error(ErrorCode::IllegalParameter, "label '" + child + "' already has parent '" + it->second + "'");
  if (is_ancestor_or_self(child, parent))
    throw Error(ErrorCode::IllegalParameter, "edge " + child + " -> " + parent + " creates a cycle");
  parent_[child] = parent;
}

std::optional<std::string> LabelTree::parent(const std::string& label) const {
  auto it = parent_.find(label);
  if (it == parent_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::string LabelTree::ancestor(const std::string& label, int levels) const {
  std::string cur = label;
  for (int i = 0; i < levels; ++i) {
    auto up = parent(cur);
    if (!up) break;
    cur = *up;
  }
  return cur;
}

bool LabelTree::is_ancestor_or_self(const std::string& ancestor, const std::string& label) const {
  std::string cur = label;
  for (std::size_t guard = 0; guard <= parent_.size(); ++guard) {
    if (cur == ancestor) return true;
    auto up = parent(cur);
    if (!up) return false;
    cur = *up;
  }
  return false;
}

int LabelTree::depth(const std::string& label) const {
  int d = 0;
  std::string cur = label;
  while (auto up = parent(cur)) {
    cur = *up;
    ++d;
  }
  return d;
}

std::vector<std::string> LabelTree::children(const std::string& label) const {
  std::vector<std::string> out;
  for (const auto& [child, parent] : parent_)
    if (parent == label) out.push_back(child);
  return out;
}

std::vector<std::string> LabelTree::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, _] : parent_) out.push_back(label);
  return out;
}

void TemporalHierarchy::add_leaf(const std::string& label, Tick lo, Tick hi) {
  if (lo >= hi) throw Error(ErrorCode::IllegalParameter, "leaf '" + label + "' has an empty range");
  if (leaves_.count(label)) throw Error(ErrorCode::IllegalParameter, "duplicate leaf '" + label + "'");
  tree_.add_node(label);
  leaves_[label] = {lo, hi - 1};
}

void TemporalHierarchy::add_edge(const std::string& child, const std::string& parent) {
  if (leaves_.count(parent))
    throw Error(ErrorCode::IllegalParameter, "leaf '" + parent + "' cannot have children");
  tree_.add_edge(child, parent);
}

void TemporalHierarchy::validate() const {
  std::vector<Interval> ranges;
  for (const auto& [_, iv] : leaves_) ranges.push_back(iv);
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i)
    if (ranges[i].lo <= ranges[i - 1].hi)
      throw Error(ErrorCode::IllegalParameter, "temporal hierarchy leaf ranges overlap");
  for (const auto& label : tree_.labels())
    if (!leaves_.count(label) && tree_.children(label).empty())
      throw Error(ErrorCode::IllegalParameter, "label '" + label + "' has neither children nor a range");
}

std::optional<std::string> TemporalHierarchy::leaf_for(Tick tick) const {
  std::optional<std::string> found;
  for (const auto& [label, iv] : leaves_) {
    if (!iv.contains(tick)) continue;
    if (found) return std::nullopt;
    found = label;
  }
  return found;
}

std::vector<Interval> TemporalHierarchy::coverage(const std::string& label) const {
  std::vector<Interval> ranges;
  for (const auto& [leaf, iv] : leaves_)
    if (tree_.is_ancestor_or_self(label, leaf)) ranges.push_back(iv);
  std::sort(ranges.begin(), ranges.end());
  std::vector<Interval> merged;
  for (const auto& iv : ranges) {
    if (!merged.empty() && iv.lo <= saturating_add(merged.back().hi, 1))
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  return merged;
}

bool TemporalHierarchy::covers(const std::string& label, Tick tick) const {
  for (const auto& iv : coverage(label))
    if (iv.contains(tick)) return true;
  return false;
}

bool TemporalHierarchy::covers(const std::string& label, const Interval& iv) const {
  if (iv.empty()) return true;
  for (const auto& part : coverage(label))
    if (part.contains(iv)) return true;
  return false;
}

Interval TemporalHierarchy::hull(const std::string& label) const {
  Interval out{1, 0};
  for (const auto& iv : coverage(label)) out = out.hull(iv);
  return out;
}

TemporalHierarchy TemporalHierarchy::parse(std::istream& in) {
  TemporalHierarchy h;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) continue;
    try {
      if (kind == "leaf") {
        std::string label, lo_text, hi_text;
        if (!(ss >> label >> lo_text >> hi_text)) throw ParseError(lineno, "expected 'leaf <label> <lo> <hi>'");
        auto lo = parse_bound(lo_text), hi = parse_bound(hi_text);
        if (!lo || !hi || *lo == kNegInf || *hi == kPosInf) throw ParseError(lineno, "bad leaf range");
        h.add_leaf(label, *lo, *hi);
      } else if (kind == "edge") {
        std::string child, parent;
        if (!(ss >> child >> parent)) throw ParseError(lineno, "expected 'edge <child> <parent>'");
        h.add_edge(child, parent);
      } else {
        throw ParseError(lineno, "unknown record '" + kind + "'");
      }
      std::string extra;
      if (ss >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  h.validate();
  return h;
}

TemporalHierarchy TemporalHierarchy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse(in);
}

}  // namespace episodic
