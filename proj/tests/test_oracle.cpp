#include <doctest.h>

#include <random>
#include <sstream>

#include "episodic/match.hpp"
#include "episodic/merit.hpp"
#include "episodic/oracle.hpp"
#include "support.hpp"

using namespace episodic;
using namespace testing;

namespace {

SpaceBounds bounds_from(const std::string& text) {
  std::istringstream in(text);
  return SpaceBounds::parse(in);
}

}  // namespace

TEST_CASE("one pattern over a two-valued attribute gives three conditions") {
  Schema schema = schema_from("nominal state idle run\n");
  auto space = enumerate_rule_space(bounds_from("max_patterns = 1\nmax_selectors = 1\nmax_temporals = 0\n"), schema,
                                    ValueLattice{});
  REQUIRE(space.size() == 3);
  CHECK(to_string(space[0]) == "true");
  CHECK(to_string(space[1]) == "{state(X)=idle}@[TS1,TF1]");
  CHECK(to_string(space[2]) == "{state(X)=run}@[TS1,TF1]");
}

TEST_CASE("space size matches the closed form") {
  // Slots a (2 values) and b (3 values), two selectors per pattern:
  // non-empty selector sets = 2 + 3 + 2*3 = 11, so 1 + 11 + 11^2 conditions.
  Schema schema = schema_from("nominal a x y\nnominal b p q r\n");
  auto one = enumerate_rule_space(bounds_from("max_patterns = 1\nmax_selectors = 2\nmax_temporals = 0\n"), schema, {});
  auto two = enumerate_rule_space(bounds_from("max_patterns = 2\nmax_selectors = 2\nmax_temporals = 0\n"), schema, {});
  CHECK(one.size() == 12);
  CHECK(two.size() == 133);
  std::size_t visited = 0;
  for_each_condition(bounds_from("max_patterns = 2\nmax_selectors = 2\nmax_temporals = 0\n"), schema, {},
                     [&](const RuleCondition&) { ++visited; });
  CHECK(visited == 133);
}

TEST_CASE("vacuous patterns appear only under a temporal constraint") {
  Schema schema;
  std::vector<Episode> eps = {{"a", {ev({flag("d")}, 0, 2), ev({flag("d")}, 3, 4)}, "c"},
                              {"b", {ev({flag("d")}, 0, 1), ev({flag("d")}, 7, 9)}, "c"}};
  ValueLattice lattice{std::span<const Episode>(eps)};
  const auto& t1 = lattice.temporal(TAttr::T1);
  // T1 observed over both orders of each pair
  CHECK(t1.count(3));
  CHECK(t1.count(-3));
  CHECK(t1.count(7));
  CHECK(t1.count(-7));
  auto space = enumerate_rule_space(bounds_from("max_patterns = 2\nmax_temporals = 1\nt_attributes = T1\n"), schema, lattice);
  CHECK(space.size() == 1 + 2 * t1.size());
  for (std::size_t i = 1; i < space.size(); ++i) {
    CHECK(space[i].patterns.size() == 2);
    CHECK(space[i].temporals.size() == 1);
  }
}

TEST_CASE("separable data yields the separating selector") {
  Schema schema = machine_schema();
  std::vector<Episode> eps;
  for (int i = 0; i < 12; ++i) {
    const std::string state = i % 3 == 0 ? "run" : i % 3 == 1 ? "idle" : "warmup";
    eps.push_back({"e" + std::to_string(i), {ev({nominal("state", "m1", state)}, i, i + 2)}, state == "run" ? "hot" : "cold"});
  }
  auto best = best_rule_bruteforce_serial(eps, "hot", SpaceBounds{}, schema);
  CHECK(best.entropy == 0.0);
  CHECK(best.pos == 4);
  CHECK(best.neg == 0);
  CHECK(to_string(best.condition) == "{state(X)=run}@[TS1,TF1]");
  CHECK(best.examined > 0);
}

TEST_CASE("a single class is covered by the empty condition") {
  Schema schema = machine_schema();
  std::mt19937_64 rng(31);
  std::vector<Episode> eps;
  for (int i = 0; i < 10; ++i)
    eps.push_back({"e" + std::to_string(i), {ev({nominal("state", "m1", i % 2 ? "run" : "idle")}, i, i + 1)}, "c"});
  auto best = best_rule_bruteforce_serial(eps, "c", SpaceBounds{}, schema);
  CHECK(best.condition.empty());
  CHECK(best.pos == 10);
  auto none = best_rule_bruteforce_serial(eps, "absent", SpaceBounds{}, schema);
  CHECK(none.pos == 0);
  CHECK(none.entropy == 1.0);
}

TEST_CASE("oracle result is never beaten by any condition in the space") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(32);
  std::vector<Episode> eps;
  for (int i = 0; i < 25; ++i) eps.push_back(random_episode(rng, 2, 2, 8, "e" + std::to_string(i)));
  SpaceBounds bounds;
  bounds.attributes = {"state", "level"};
  auto best = best_rule_bruteforce_serial(eps, "pos", bounds, schema);
  ValueLattice lattice{std::span<const Episode>(eps)};
  std::size_t n = 0;
  for_each_condition(bounds, schema, lattice, [&](const RuleCondition& c) {
    ++n;
    std::size_t pos = 0, neg = 0;
    for (const auto& e : eps)
      if (covers(c, e, schema)) ++(e.label == "pos" ? pos : neg);
    if (pos == 0 || neg > pos) return;
    CHECK(entropy(pos, neg) >= best.entropy);
  });
  CHECK(n == best.examined);
}

TEST_CASE("parallel and serial oracles agree") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(33);
  for (int round = 0; round < 5; ++round) {
    std::vector<Episode> eps;
    for (int i = 0; i < 30; ++i) eps.push_back(random_episode(rng, 2, 2, 8, "e" + std::to_string(i)));
    SpaceBounds bounds;
    bounds.attributes = {"state", "shape"};
    auto a = best_rule_bruteforce_serial(eps, "pos", bounds, schema);
    auto b = best_rule_bruteforce(eps, "pos", bounds, schema);
    CHECK(a.condition == b.condition);
    CHECK(a.entropy == b.entropy);
    CHECK(a.pos == b.pos);
    CHECK(a.examined == b.examined);
  }
}

TEST_CASE("bounds files") {
  auto b = bounds_from("max_patterns = 3\nmax_selectors = 2 # two\nt_attributes = T1, T5\nattributes = state\n");
  CHECK(b.max_patterns == 3);
  CHECK(b.max_selectors_per_pattern == 2);
  CHECK(b.allowed_t_attributes == std::set<TAttr>{TAttr::T1, TAttr::T5});
  CHECK(b.attributes == std::vector<std::string>{"state"});
  CHECK(code_of([] { bounds_from("max_patterns = -1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { bounds_from("t_attributes = T7\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { bounds_from("colour = red\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { bounds_from("max_patterns\n"); }) == ErrorCode::ConfigError);
  SpaceBounds unknown;
  unknown.attributes = {"nope"};
  CHECK(code_of([&] { enumerate_rule_space(unknown, machine_schema(), {}); }) == ErrorCode::ConfigError);
}
