#include <doctest.h>

#include "episodic/merit.hpp"
#include "support.hpp"

using namespace episodic;
using namespace testing;

// Reference values computed independently in Python (math.log2).

TEST_CASE("entropy reference values") {
  CHECK(entropy(4, 0) == 0.0);
  CHECK(entropy(0, 4) == 0.0);
  CHECK(entropy(0, 0) == 0.0);
  CHECK(entropy(2, 2) == 1.0);
  CHECK(entropy(3, 1) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(entropy(25, 1) == doctest::Approx(0.23519338181924143).epsilon(1e-12));
  CHECK(entropy(7, 3) == doctest::Approx(entropy(3, 7)));
}

TEST_CASE("emer reference values") {
  CHECK(emer({3, 1}) == doctest::Approx(0.08935002957177052).epsilon(1e-12));
  CHECK(emer({2, 2}) == doctest::Approx(0.02904940554533142).epsilon(1e-12));
  for (std::size_t k = 0; k <= 50; ++k) CHECK(emer({k, 0}) == 0.0);
}

TEST_CASE("instance delta reference values") {
  CHECK(instance_delta(RuleStats{3, 1}, false) == doctest::Approx(0.15967246999553575).epsilon(1e-12));
  CHECK(instance_delta(RuleStats{3, 1}, true) == doctest::Approx(-0.08935002957177052).epsilon(1e-12));
  CHECK(instance_delta(RuleStats{2, 2}, true) == doctest::Approx(-0.02904940554533142).epsilon(1e-12));
  CHECK(instance_delta(RuleStats{19, 1}, false) == doctest::Approx(0.16731938207098856).epsilon(1e-12));
}

TEST_CASE("merit reference value and monotonicity") {
  Rule r;
  r.condition = parse_condition("{d1 & d2}@[TS1,TF1] & {d3}@[TS2,TF2] & [T1(1,2) in [0,4]]");
  REQUIRE(r.condition.complexity() == 4);
  r.stats = {3, 1};
  CHECK(merit(r, {}, 5.0) == doctest::Approx(0.20124546337985721).epsilon(1e-12));
  r.stats = {1, 3};
  CHECK(merit(r, {}, 5.0) == doctest::Approx(0.20124546337985721).epsilon(1e-12));
  r.condition = RuleCondition{};
  r.stats = {0, 0};
  CHECK(merit(r, {}, 5.0) == doctest::Approx(0.1));
  double prev = -1;
  for (std::size_t p = 0; p < 40; ++p) {
    r.stats = {p, 0};
    double m = merit(r, {}, 5.0);
    CHECK(m >= prev);
    CHECK(m <= 1.0);
    prev = m;
  }
}

TEST_CASE("merit weights must be a distribution") {
  CHECK_NOTHROW(MeritWeights{}.validate());
  CHECK(code_of([] { MeritWeights{0.5, 0.5, 0.5, 0.0}.validate(); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { MeritWeights{-0.1, 0.5, 0.2, 0.4}.validate(); }) == ErrorCode::ConfigError);
}

namespace {

struct RoleFixture {
  Schema schema;
  Rulebase db;
  int add(RuleStats stats, const std::string& label = "c") {
    Rule r;
    r.condition = parse_condition("{d1}@[TS1,TF1]");
    r.label = label;
    r.stats = stats;
    return db.insert_rule(r, schema);
  }
  InstanceRole role(const std::string& label) {
    Episode ep{"e", {ev({flag("d1")}, 0, 1)}, label};
    return classify_instance_role(db, ep, schema, MeritConfig{});
  }
};

}  // namespace

TEST_CASE("instance roles") {
  {
    RoleFixture f;
    f.add({19, 1});
    CHECK(f.role("d").role == Role::Spurious);  // +0.167 on a rule with 20 instances
    CHECK(f.role("c").role == Role::Neutral);
  }
  {
    RoleFixture f;
    f.add({25, 1});
    CHECK(f.role("d").role == Role::Neutral);  // +0.146 stays under the spurious threshold
  }
  {
    RoleFixture f;
    int id = f.add({2, 0});
    auto r = f.role("d");
    CHECK(r.role == Role::Evidence);
    CHECK(r.rule == id);
    CHECK(r.max_delta == doctest::Approx(0.9182958340544896));
  }
  {
    RoleFixture f;
    f.add({100, 0});
    CHECK(f.role("c").role == Role::Commonplace);
  }
  {
    RoleFixture f;
    f.add({3, 1});
    CHECK(f.role("d").role == Role::Neutral);
  }
  {
    RoleFixture f;
    CHECK(f.role("c").role == Role::Neutral);  // nothing covers it
  }
  {
    // spurious wins over evidence from another rule
    RoleFixture f;
    f.add({19, 1});
    f.add({2, 0});
    CHECK(f.role("d").role == Role::Spurious);
  }
}

TEST_CASE("uniformness") {
  Schema schema;
  Rulebase db;
  auto add = [&](const std::string& cond, RuleStats s) {
    Rule r;
    r.condition = parse_condition(cond);
    r.label = "c";
    r.stats = s;
    return db.insert_rule(r, schema);
  };
  int top = add("{d1}@[TS1,TF1]", {3, 1});
  int mid = add("{d1 & d2}@[TS1,TF1]", {3, 1});
  int low = add("{d1 & d2 & d3}@[TS1,TF1]", {4, 0});
  add("{d1 & d9}@[TS1,TF1]", {0, 0});  // no coverage: not a witness
  auto v = uniformness(db, top, 0.3);
  CHECK_FALSE(v.uniform);
  CHECK(v.witness == low);
  CHECK(v.gap == doctest::Approx(0.8112781244591328));
  CHECK(uniformness(db, top, 0.9).uniform);
  CHECK(uniformness(db, low, 0.3).uniform);
  CHECK_FALSE(uniformness(db, mid, 0.3).uniform);
}

TEST_CASE("invocation order") {
  Schema schema;
  Rulebase db;
  auto add = [&](const std::string& cond, const std::string& label, RuleStats s) {
    Rule r;
    r.condition = parse_condition(cond);
    r.label = label;
    r.stats = s;
    return db.insert_rule(r, schema);
  };
  int weak = add("{d1}@[TS1,TF1]", "c", {1, 1});       // covers
  int strong = add("{d2}@[TS1,TF1]", "c", {10, 0});    // same class, does not cover
  int foreign = add("{d1 & d5}@[TS1,TF1]", "d", {5, 0}); // covers, other class
  int twin = add("{d3}@[TS1,TF1]", "c", {10, 0});      // ties with strong
  add("{d4}@[TS1,TF1]", "d", {10, 0});                 // other class, no cover
  Episode ep{"e", {ev({flag("d1"), flag("d5")}, 0, 1)}, "c"};
  auto got = invoke(db, ep, 5, schema, MeritConfig{});
  CHECK(got == std::vector<int>{strong, twin, foreign, weak});
  CHECK(invoke(db, ep, 2, schema, MeritConfig{}) == std::vector<int>{strong, twin});
  db.set_status(strong, RuleStatus::Retired);
  CHECK(invoke(db, ep, 2, schema, MeritConfig{}) == std::vector<int>{twin, foreign});
}
