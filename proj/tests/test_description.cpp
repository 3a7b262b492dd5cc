#include <doctest.h>

#include <algorithm>
#include <random>

#include "episodic/match.hpp"
#include "episodic/subsumption.hpp"
#include "support.hpp"

using namespace episodic;
using namespace testing;

TEST_CASE("shared variable binds one object across patterns") {
  Schema schema = machine_schema();
  auto cond = parse_condition("{state(X)=run}@[TS1,TF1] & {temp(X)=high}@[TS2,TF2] & [T1(1,2) in [3,3]]");
  Episode same{"a", {ev({nominal("state", "m1", "run")}, 0, 5), ev({nominal("temp", "m1", "high")}, 3, 9)}, "c"};
  Episode split{"b", {ev({nominal("state", "m1", "run")}, 0, 5), ev({nominal("temp", "m2", "high")}, 3, 9)}, "c"};
  Episode late{"c", {ev({nominal("state", "m1", "run")}, 0, 5), ev({nominal("temp", "m1", "high")}, 4, 9)}, "c"};
  CHECK(covers(cond, same, schema));
  CHECK_FALSE(covers(cond, split, schema));
  CHECK_FALSE(covers(cond, late, schema));
  auto b = first_match(cond, same, schema);
  REQUIRE(b);
  CHECK(b->objects.at("X") == "m1");
}

TEST_CASE("patterns map injectively onto events") {
  Schema schema;
  Episode one{"a", {ev({flag("d1")}, 0, 2)}, "c"};
  Episode two{"b", {ev({flag("d1")}, 0, 2), ev({flag("d1")}, 4, 5)}, "c"};
  auto cond = parse_condition("{d1}@[TS1,TF1] & {d1}@[TS2,TF2]");
  CHECK_FALSE(covers(cond, one, schema));
  CHECK(covers(cond, two, schema));
}

TEST_CASE("distinct variables may bind the same object") {
  Schema schema = rich_schema();
  Episode ep{"a", {ev({{"near", {"m1", "m1"}, {}}}, 0, 1)}, "c"};
  CHECK(covers(parse_condition("{near(X,Y)}@[TS1,TF1]"), ep, schema));
}

TEST_CASE("structured values match through isa") {
  Schema schema = rich_schema();
  Episode ep{"a", {ev({nominal("shape", "m1", "oval")}, 0, 1)}, "c"};
  CHECK(covers(parse_condition("{shape(X) isa round}@[TS1,TF1]"), ep, schema));
  CHECK(covers(parse_condition("{shape(X) isa any}@[TS1,TF1]"), ep, schema));
  CHECK_FALSE(covers(parse_condition("{shape(X) isa angular}@[TS1,TF1]"), ep, schema));
}

TEST_CASE("linear ranges and absolute marks") {
  Schema schema = rich_schema();
  Episode ep{"a", {ev({linear("level", "m1", 4)}, 2, 6)}, "c"};
  CHECK(covers(parse_condition("{level(X) in [3,5]}@[TS1,TF1]"), ep, schema));
  CHECK_FALSE(covers(parse_condition("{level(X) in [5,9]}@[TS1,TF1]"), ep, schema));
  CHECK(covers(parse_condition("{level(X) in [3,5]}@[2,6]"), ep, schema));
  CHECK_FALSE(covers(parse_condition("{level(X) in [3,5]}@[3,6]"), ep, schema));
  CHECK(covers(parse_condition("{}@[TS1,TF1] & [T5(1) in [4,4]]"), ep, schema));
}

TEST_CASE("empty condition covers every episode") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) CHECK(covers(RuleCondition{}, random_episode(rng), schema));
}

TEST_CASE("coverage is invariant under event order") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto ep = random_episode(rng, 4);
    auto cond = random_condition(rng);
    const bool before = covers(cond, ep, schema);
    std::shuffle(ep.events.begin(), ep.events.end(), rng);
    REQUIRE(covers(cond, ep, schema) == before);
  }
}

TEST_CASE("matcher agrees with exhaustive enumeration") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(6);
  int hits = 0;
  for (int i = 0; i < 1500; ++i) {
    auto ep = random_episode(rng, 3);
    auto cond = random_condition(rng);
    const bool want = brute_covers(cond, ep, schema);
    hits += want;
    INFO(to_string(cond));
    REQUIRE(covers(cond, ep, schema) == want);
  }
  CHECK(hits > 100);
}

TEST_CASE("msc covers its own episode and nothing more general") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto ep = random_episode(rng, 3);
    auto msc = msc_rule(ep);
    REQUIRE(msc.patterns.size() == ep.events.size());
    REQUIRE(covers(msc, ep, schema));
    CHECK(is_more_general(RuleCondition{}, msc, schema) == Generality::MoreGeneral);
  }
}

TEST_CASE("generality comparisons") {
  Schema schema;
  auto a = parse_condition("{d1}@[TS1,TF1]");
  auto b = parse_condition("{d1 & d2}@[TS1,TF1]");
  auto c = parse_condition("{d2}@[TS1,TF1]");
  CHECK(is_more_general(a, b, schema) == Generality::MoreGeneral);
  CHECK(is_more_general(b, a, schema) == Generality::MoreSpecific);
  CHECK(is_more_general(a, a, schema) == Generality::Equal);
  CHECK(is_more_general(a, c, schema) == Generality::Incomparable);

  auto wide = parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(1,2) in [1,+inf]]");
  auto tight = parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(1,2) in [5,5]]");
  CHECK(is_more_general(wide, tight, schema) == Generality::MoreGeneral);

  Schema rich = rich_schema();
  CHECK(is_more_general(parse_condition("{shape(X) isa round}@[TS1,TF1]"),
                        parse_condition("{shape(X) isa oval}@[TS1,TF1]"), rich) == Generality::MoreGeneral);
  CHECK(is_more_general(parse_condition("{level(X) in [0,9]}@[TS1,TF1]"),
                        parse_condition("{level(X) in [2,3]}@[TS1,TF1]"), rich) == Generality::MoreGeneral);
}

TEST_CASE("subsumption is sound over random episodes") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(8);
  std::vector<Episode> episodes;
  for (int i = 0; i < 500; ++i) episodes.push_back(random_episode(rng, 3));
  int related = 0;
  for (int i = 0; i < 400; ++i) {
    auto g = random_condition(rng), s = random_condition(rng);
    if (!subsumes(g, s, schema)) continue;
    ++related;
    for (const auto& ep : episodes)
      if (covers(s, ep, schema)) REQUIRE(covers(g, ep, schema));
  }
  CHECK(related > 10);
}

TEST_CASE("canonical text round trips") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    auto c = random_condition(rng);
    const auto text = to_string(c);
    INFO(text);
    auto back = parse_condition(text);
    REQUIRE(back == c);
    REQUIRE(to_string(back) == text);
  }
  CHECK(to_string(RuleCondition{}) == "true");
  CHECK(parse_condition("  {d1}@[TS1,TF1]&{d2}@[TS2,TF2]  ") == parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2]"));
  auto rule = parse_rule_text("{d1}@[TS1,TF1] => fault");
  CHECK(rule.label == "fault");
}

TEST_CASE("malformed conditions are parse errors") {
  for (const char* bad : {"{d1", "{d1}@[1,", "[T9(1,2) in [1,2]]", "{d1}@[TS1,TF1] & [T1(1,3) in [0,1]]", "{d1} &"})
    CHECK_MESSAGE(code_of([&] { parse_condition(bad); }) == ErrorCode::ParseError, bad);
  CHECK(code_of([&] { parse_rule_text("{d1}@[TS1,TF1]"); }) == ErrorCode::ParseError);
}

TEST_CASE("normalization orients pairwise constraints") {
  auto c = parse_condition("{d1}@[TS1,TF1] & {d2}@[TS2,TF2] & [T1(2,1) in [-5,-3]]");
  REQUIRE(c.temporals.size() == 1);
  CHECK(c.temporals[0].first == 0);
  CHECK(c.temporals[0].second == 1);
  CHECK(c.temporals[0].range == Interval{3, 5});
}
