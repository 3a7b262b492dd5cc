#include <doctest.h>

#include <random>

#include "episodic/match.hpp"
#include "episodic/refinement.hpp"
#include "episodic/subsumption.hpp"
#include "support.hpp"

using namespace episodic;
using namespace testing;

namespace {

using Area = Locator::Area;

std::vector<const Episode*> ptrs(const std::vector<Episode>& eps) {
  std::vector<const Episode*> out;
  for (const auto& e : eps) out.push_back(&e);
  return out;
}

}  // namespace

TEST_CASE("widening T1=5 to [1,+inf) reads as T1>0") {
  Schema schema;
  auto c = parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(1,2) in [5,5]]");
  auto out = apply_operator({OpKind::WidenTemporalInterval, {Area::Temporal, -1, 0}, Interval::at_least(1)}, c, schema);
  CHECK(to_string(out) == "{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(1,2) in [1,+inf]]");
  CHECK(is_more_general(out, c, schema) == Generality::MoreGeneral);
}

TEST_CASE("widening twice equals widening once to the wider bound") {
  Schema schema;
  auto c = parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(1,2) in [5,5]]");
  RefinementOp narrow{OpKind::WidenTemporalInterval, {Area::Temporal, -1, 0}, Interval{3, 7}};
  RefinementOp wide{OpKind::WidenTemporalInterval, {Area::Temporal, -1, 0}, Interval{1, 9}};
  CHECK(apply_operator(wide, apply_operator(narrow, c, schema), schema) == apply_operator(wide, c, schema));
  CHECK(apply_operator(wide, apply_operator(wide, c, schema), schema) == apply_operator(wide, c, schema));
}

TEST_CASE("dropping the last selector leaves a vacuous pattern") {
  Schema schema;
  Episode any{"a", {ev({flag("zzz")}, 0, 1)}, "c"};
  auto out = apply_operator({OpKind::DropSelector, {Area::PatternSelector, 0, 0}}, parse_condition("{d1}@[TS1,TF1]"), schema);
  REQUIRE(out.patterns.size() == 1);
  CHECK(out.patterns[0].vacuous());
  CHECK(covers(out, any, schema));
}

TEST_CASE("closing the gap between {d1,1,3} and {d1,6,9}") {
  Schema schema;
  RefinementOp op{OpKind::CloseTemporalGap, {Area::PatternPair, 0, 1}};
  op.value = 3;
  auto out = apply_operator(op, parse_condition("{d1}@[1,3] & {d1}@[6,9]"), schema);
  REQUIRE(out.patterns.size() == 1);
  CHECK(out.patterns[0].start->range == Interval::point(1));
  CHECK(out.patterns[0].finish->range == Interval::point(9));
  CHECK(to_string(out) == "{d1}@[1,9]~3");
  // the merged pattern accepts a chain of d1 events with gaps up to 3
  Episode chain{"a", {ev({flag("d1")}, 1, 3), ev({flag("d1")}, 5, 6), ev({flag("d1")}, 8, 9)}, "c"};
  Episode broken{"b", {ev({flag("d1")}, 1, 3), ev({flag("d1")}, 8, 9)}, "c"};
  CHECK(covers(out, chain, schema));
  CHECK_FALSE(covers(out, broken, schema));
}

TEST_CASE("operator errors") {
  Schema schema = rich_schema();
  auto c = parse_condition("{state(m1)=run & level(X) in [2,4]}@[1,3] & {alarm}@[TS2,TF2] & [T1(1,2) in [0,2]]");
  auto code = [&](RefinementOp op) { return code_of([&] { apply_operator(op, c, schema); }); };
  CHECK(code({OpKind::DropSelector, {Area::PatternSelector, 0, 9}}) == ErrorCode::TargetNotFound);
  CHECK(code({OpKind::DropSelector, {Area::PatternSelector, 5, 0}}) == ErrorCode::TargetNotFound);
  CHECK(code({OpKind::DropTemporalConstraint, {Area::Temporal, -1, 3}}) == ErrorCode::TargetNotFound);
  CHECK(code({OpKind::WidenInterval, {Area::PatternSelector, 0, 0}, Interval{5, 1}}) == ErrorCode::IllegalParameter);
  CHECK(code({OpKind::WidenTemporalInterval, {Area::Temporal, -1, 0}, Interval{5, 1}}) == ErrorCode::IllegalParameter);
  CHECK(code({OpKind::ClimbHierarchy, {Area::PatternSelector, 0, 1}, {}, 1}) == ErrorCode::IllegalParameter);
  CHECK(code({OpKind::TemporalVariablize, {Area::Pattern, 1}}) == ErrorCode::IllegalParameter);
  RefinementOp lift{OpKind::ConstantToVariable, {}};
  lift.term = "m7";
  CHECK(code(lift) == ErrorCode::TargetNotFound);
  RefinementOp gap{OpKind::CloseTemporalGap, {Area::PatternPair, 0, 1}};
  CHECK(code(gap) == ErrorCode::DescriptionMismatch);
  CHECK(code_of([&] { apply_operator(gap, parse_condition("{d1}@[1,3] & {d1}@[9,12]"), Schema{}); }) ==
        ErrorCode::GapExceedsTolerance);
  CHECK(code_of([&] { apply_operator(gap, parse_condition("{d1}@[5,9] & {d1}@[1,3]"), Schema{}); }) ==
        ErrorCode::DegenerateOrder);
}

TEST_CASE("climb and constant lifting") {
  Schema schema = rich_schema();
  auto c = parse_condition("{shape(m1) isa oval & state(m1)=run}@[TS1,TF1]");
  auto up = apply_operator({OpKind::ClimbHierarchy, {Area::PatternSelector, 0, 0}, {}, 1}, c, schema);
  CHECK(to_string(up).find("isa round") != std::string::npos);
  RefinementOp lift{OpKind::ConstantToVariable, {}};
  lift.term = "m1";
  auto lifted = apply_operator(lift, c, schema);
  CHECK(lifted.variables() == std::vector<std::string>{"M1"});
  CHECK(to_string(lifted).find("m1") == std::string::npos);
  auto root = parse_condition("{shape(X) isa any}@[TS1,TF1]");
  CHECK(code_of([&] { apply_operator({OpKind::ClimbHierarchy, {Area::PatternSelector, 0, 0}, {}, 1}, root, schema); }) ==
        ErrorCode::IllegalParameter);
}

TEST_CASE("temporal variablize keeps the implied constraints") {
  Schema schema;
  auto c = parse_condition("{d1}@[1,3] & {d2}@[6,9]");
  auto out = apply_operator({OpKind::TemporalVariablize, {Area::Pattern, 0}}, c, schema);
  CHECK_FALSE(out.patterns[0].start);
  CHECK_FALSE(out.patterns[0].finish);
  Episode ok{"a", {ev({flag("d1")}, 1, 3), ev({flag("d2")}, 6, 9)}, "c"};
  Episode shifted{"b", {ev({flag("d1")}, 2, 4), ev({flag("d2")}, 6, 9)}, "c"};
  CHECK(covers(out, ok, schema));
  CHECK_FALSE(covers(c, shifted, schema));
  CHECK(covers(is_more_general(out, c, schema) == Generality::MoreGeneral ? out : c, ok, schema));
}

TEST_CASE("enumeration on a nominal fixture") {
  // k = 3 selectors, m = 1 temporal constraint, no hierarchies.
  Schema schema = machine_schema();
  auto c = parse_condition("{state(X)=run & temp(X)=high}@[TS1,TF1] & {d9}@[TS2,TF2] & [T1(1,2) in [2,4]]");
  std::vector<Episode> eps = {{"a", {ev({flag("d9")}, 0, 1), ev({flag("d9")}, 3, 4)}, "c"},
                              {"b", {ev({flag("d9")}, 0, 1), ev({flag("d9")}, 6, 7)}, "c"}};
  ValueLattice lattice{std::span<const Episode>(eps)};
  auto gens = enumerate_generalizations(c, lattice, schema);
  std::size_t drops = 0, widens = 0;
  for (const auto& [op, out] : gens) {
    drops += op.kind == OpKind::DropSelector || op.kind == OpKind::DropTemporalConstraint;
    widens += op.kind == OpKind::WidenTemporalInterval;
    CHECK(is_more_general(out, c, schema) == Generality::MoreGeneral);
  }
  CHECK(drops == 4);
  CHECK(widens == 2);
  CHECK(gens.size() == 6);
  // each bound steps to the next observed T1 value: 6 above, the largest one below 2
  const auto& t1 = lattice.temporal(TAttr::T1);
  CHECK(t1.count(3));
  CHECK(t1.count(6));
  CHECK(gens[4].second.temporals[0].range == Interval{ValueLattice::step_down(t1, 2), 4});
  CHECK(gens[5].second.temporals[0].range == Interval{2, 6});
  // order is deterministic
  auto again = enumerate_generalizations(c, lattice, schema);
  REQUIRE(again.size() == gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) CHECK(again[i].first == gens[i].first);
}

TEST_CASE("enumeration of the empty condition is empty") {
  CHECK(enumerate_generalizations(RuleCondition{}, ValueLattice{}, Schema{}).empty());
}

TEST_CASE("every enumerated generalization is at least as general") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(12);
  std::vector<Episode> sample;
  for (int i = 0; i < 60; ++i) sample.push_back(random_episode(rng));
  ValueLattice lattice{std::span<const Episode>(sample)};
  for (int i = 0; i < 100; ++i) {
    auto c = i % 2 ? random_condition(rng) : msc_rule(sample[i % sample.size()]);
    for (const auto& [op, out] : enumerate_generalizations(c, lattice, schema)) {
      INFO(to_string(op), " on ", to_string(c));
      auto g = is_more_general(out, c, schema);
      REQUIRE((g == Generality::MoreGeneral || g == Generality::Equal));
      for (const auto& ep : sample)
        if (covers(c, ep, schema)) REQUIRE(covers(out, ep, schema));
    }
  }
}

TEST_CASE("lattice steps") {
  std::set<Tick> v{1, 4, 8};
  CHECK(ValueLattice::step_down(v, 4) == 1);
  CHECK(ValueLattice::step_down(v, 1) == kNegInf);
  CHECK(ValueLattice::step_up(v, 4) == 8);
  CHECK(ValueLattice::step_up(v, 8) == kPosInf);
  CHECK(ValueLattice::step_up(v, kPosInf) == kPosInf);
}

TEST_CASE("extend_against keeps the discriminating selector") {
  Schema schema = machine_schema();
  std::vector<Episode> pos = {
      {"p1", {ev({nominal("state", "m1", "run"), nominal("temp", "m1", "high")}, 0, 3), ev({flag("d2")}, 5, 8)}, "c"},
      {"p2", {ev({nominal("state", "m1", "run"), nominal("temp", "m1", "low")}, 2, 4), ev({flag("d2")}, 4, 9)}, "c"}};
  std::vector<Episode> neg = {
      {"n1", {ev({nominal("state", "m1", "idle"), nominal("temp", "m1", "high")}, 0, 3), ev({flag("d2")}, 5, 8)}, "d"},
      {"n2", {ev({nominal("state", "m2", "warmup"), nominal("temp", "m2", "high")}, 1, 2), ev({flag("d2")}, 3, 4)}, "d"}};
  std::vector<Episode> all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  ValueLattice lattice{std::span<const Episode>(all)};
  auto P = ptrs(pos), N = ptrs(neg);
  auto out = extend_against(msc_rule(pos[0]), P, N, schema, lattice);
  INFO(to_string(out));
  CHECK(to_string(out).find("state(") != std::string::npos);
  CHECK(to_string(out).find("temp(") == std::string::npos);
  CHECK(out.temporals.empty());
  for (const auto& n : neg) CHECK_FALSE(covers(out, n, schema));
  for (const auto& p : pos) CHECK(covers(out, p, schema));
}

TEST_CASE("extend_against without negatives reaches the vacuous condition") {
  Schema schema = machine_schema();
  Episode ep{"p", {ev({nominal("state", "m1", "run")}, 0, 3), ev({flag("d2")}, 5, 8)}, "c"};
  std::vector<const Episode*> P{&ep}, N;
  ValueLattice lattice;
  lattice.observe(ep);
  CHECK(extend_against(msc_rule(ep), P, N, schema, lattice).empty());
}

TEST_CASE("extend_against returns a blocked seed unchanged") {
  Schema schema;
  Episode p{"p", {ev({flag("d1")}, 0, 1)}, "c"};
  Episode n{"n", {ev({flag("d2")}, 0, 1)}, "d"};
  std::vector<const Episode*> P{&p}, N{&n};
  ValueLattice lattice;
  auto seed = parse_condition("{d1}@[TS1,TF1]");
  CHECK(extend_against(seed, P, N, schema, lattice) == seed);
  CHECK(code_of([&] { extend_against(parse_condition("{d2}@[TS1,TF1]"), P, N, schema, lattice); }) ==
        ErrorCode::SeedCoversNegative);
}

TEST_CASE("extend_against never covers a negative") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(13);
  int runs = 0;
  for (int i = 0; i < 150; ++i) {
    std::vector<Episode> pos, neg;
    for (int k = 0; k < 4; ++k) pos.push_back(random_episode(rng));
    for (int k = 0; k < 8; ++k) neg.push_back(random_episode(rng));
    std::vector<Episode> all = pos;
    all.insert(all.end(), neg.begin(), neg.end());
    ValueLattice lattice{std::span<const Episode>(all)};
    auto P = ptrs(pos), N = ptrs(neg);
    auto seed = msc_rule(pos[0]);
    bool dirty = false;
    for (const auto& n : neg) dirty = dirty || covers(seed, n, schema);
    if (dirty) continue;
    ++runs;
    auto out = extend_against(seed, P, N, schema, lattice);
    for (const auto& n : neg) REQUIRE_FALSE(covers(out, n, schema));
    REQUIRE(covers(out, pos[0], schema));
    for (const auto& p : pos)
      if (covers(seed, p, schema)) REQUIRE(covers(out, p, schema));
  }
  CHECK(runs > 50);
}

TEST_CASE("operator names round trip") {
  for (int k = 0; k <= static_cast<int>(OpKind::DropPattern); ++k) {
    auto kind = static_cast<OpKind>(k);
    CHECK(parse_op_kind(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_op_kind("Nope"));
}
