#include "episodic/interval.hpp"

#include <algorithm>
#include <charconv>

#include "episodic/error.hpp"

namespace episodic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnresolvedMark: return "UnresolvedMark";
    case ErrorCode::DescriptionMismatch: return "DescriptionMismatch";
    case ErrorCode::GapExceedsTolerance: return "GapExceedsTolerance";
    case ErrorCode::DegenerateOrder: return "DegenerateOrder";
    case ErrorCode::TargetNotFound: return "TargetNotFound";
    case ErrorCode::IllegalParameter: return "IllegalParameter";
    case ErrorCode::SeedCoversNegative: return "SeedCoversNegative";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NonMonotoneInterval: return "NonMonotoneInterval";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Tick saturating_neg(Tick a) {
  if (a == kNegInf) return kPosInf;
  if (a == kPosInf) return kNegInf;
  return -a;
}

Tick saturating_add(Tick a, Tick b) {
  // Mixed infinities only arise from empty intervals; callers never rely on them.
  if (a == kPosInf || b == kPosInf) return (a == kNegInf || b == kNegInf) ? 0 : kPosInf;
  if (a == kNegInf || b == kNegInf) return kNegInf;
  Tick out;
  if (__builtin_add_overflow(a, b, &out)) return a > 0 ? kPosInf : kNegInf;
  if (out == kNegInf) return kNegInf + 1;
  return out;
}

Interval Interval::intersect(const Interval& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }

Interval Interval::hull(const Interval& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  return {std::min(lo, o.lo), std::max(hi, o.hi)};
}

Interval Interval::negate() const { return {saturating_neg(hi), saturating_neg(lo)}; }

Interval Interval::plus(const Interval& o) const {
  if (empty() || o.empty()) return {1, 0};
  Tick l = (lo == kNegInf || o.lo == kNegInf) ? kNegInf : saturating_add(lo, o.lo);
  Tick h = (hi == kPosInf || o.hi == kPosInf) ? kPosInf : saturating_add(hi, o.hi);
  return {l, h};
}

std::string bound_to_string(Tick v) {
  if (v == kNegInf) return "-inf";
  if (v == kPosInf) return "+inf";
  return std::to_string(v);
}

std::optional<Tick> parse_bound(std::string_view text) {
  if (text == "-inf") return kNegInf;
  if (text == "+inf" || text == "inf") return kPosInf;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  Tick v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  if (v == kNegInf || v == kPosInf) return std::nullopt;
  return v;
}

std::string to_string(const Interval& iv) {
  return "[" + bound_to_string(iv.lo) + "," + bound_to_string(iv.hi) + "]";
}

}  // namespace episodic
