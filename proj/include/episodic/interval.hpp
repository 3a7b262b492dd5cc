#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace episodic {

using Tick = std::int64_t;

// Sentinels standing for -inf / +inf. All arithmetic below saturates on them.
inline constexpr Tick kNegInf = std::numeric_limits<Tick>::min();
inline constexpr Tick kPosInf = std::numeric_limits<Tick>::max();

Tick saturating_add(Tick a, Tick b);
Tick saturating_neg(Tick a);

/// Closed integer interval [lo, hi]; either bound may be infinite.
struct Interval {
  Tick lo = kNegInf;
  Tick hi = kPosInf;

  static constexpr Interval point(Tick v) { return {v, v}; }
  static constexpr Interval all() { return {kNegInf, kPosInf}; }
  static constexpr Interval at_least(Tick v) { return {v, kPosInf}; }
  static constexpr Interval at_most(Tick v) { return {kNegInf, v}; }

  bool empty() const { return lo > hi; }
  bool unbounded() const { return lo == kNegInf && hi == kPosInf; }
  bool is_point() const { return lo == hi && lo != kNegInf && lo != kPosInf; }
  bool contains(Tick v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return o.empty() || (lo <= o.lo && o.hi <= hi); }

  Interval intersect(const Interval& o) const;
  Interval hull(const Interval& o) const;
  Interval negate() const;
  Interval plus(const Interval& o) const;
  Interval minus(const Interval& o) const { return plus(o.negate()); }

  auto operator<=>(const Interval&) const = default;
};

std::string bound_to_string(Tick v);
std::optional<Tick> parse_bound(std::string_view text);

// "[lo,hi]" with -inf/+inf spelled out.
std::string to_string(const Interval& iv);

}  // namespace episodic
