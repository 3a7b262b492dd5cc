#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "episodic/io.hpp"
#include "episodic/label_tree.hpp"
#include "episodic/match.hpp"
#include "episodic/synth.hpp"
#include "support.hpp"

using namespace episodic;
using namespace testing;

namespace {

std::vector<Episode> parse(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  return parse_episodes(in, schema);
}

const char* kSample =
    "# two episodes\n"
    "episode e1 fault\n"
    "  state(m1)=warmup, near(m1,m2) @ [0,5]\n"
    "  temp(m1)=high @ [3:noon,9]\n"
    "\n"
    "episode e2 normal\n"
    "  alarm @ [2,2]\n";

Schema io_schema() {
  Schema s = schema_from("nominal state idle warmup run\nnominal temp low high\nlinear level 0 9\nrelation near 2\nrelation alarm 0\n");
  std::istringstream cal("leaf morning 0 3\nleaf noon 3 6\nedge morning day\nedge noon day\n");
  s.calendar = TemporalHierarchy::parse(cal);
  return s;
}

}  // namespace

TEST_CASE("episode files parse into events") {
  auto eps = parse(kSample, io_schema());
  REQUIRE(eps.size() == 2);
  CHECK(eps[0].id == "e1");
  CHECK(eps[0].label == "fault");
  REQUIRE(eps[0].events.size() == 2);
  CHECK(eps[0].events[0].description.atoms.size() == 2);
  CHECK(eps[0].events[1].start.tick == 3);
  CHECK(eps[0].events[1].start.calendar_tag == "noon");
  CHECK(eps[0].events[1].tf() == 9);
  CHECK(eps[1].events[0].ts() == 2);
  CHECK(covers(parse_condition("{state(X)=warmup & near(X,Y)}@[TS1,TF1]"), eps[0], io_schema()));
}

TEST_CASE("episode files round trip") {
  Schema schema = io_schema();
  auto eps = parse(kSample, schema);
  std::ostringstream out;
  write_episodes(out, eps);
  auto back = parse(out.str(), schema);
  CHECK(back == eps);
  std::ostringstream again;
  write_episodes(again, back);
  CHECK(again.str() == out.str());

  auto path = (std::filesystem::temp_directory_path() / "episodic_io_test.ep").string();
  save_episodes(path, eps);
  CHECK(load_episodes(path, schema) == eps);
  std::filesystem::remove(path);
  CHECK(code_of([&] { load_episodes(path, schema); }) == ErrorCode::IoError);
}

TEST_CASE("random episodes round trip") {
  Schema schema = rich_schema();
  std::mt19937_64 rng(51);
  std::vector<Episode> eps;
  for (int i = 0; i < 100; ++i) eps.push_back(random_episode(rng, 3, 3, 20, "r" + std::to_string(i)));
  std::ostringstream out;
  write_episodes(out, eps);
  CHECK(parse(out.str(), schema) == eps);
}

TEST_CASE("linear values parse as integers") {
  auto eps = parse("episode e c\n  level(m1)=7 @ [0,1]\n", io_schema());
  CHECK(std::get<Tick>(eps[0].events[0].description.atoms[0].value) == 7);
  CHECK(code_of([] { parse("episode e c\n  level(m1)=high @ [0,1]\n", io_schema()); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("malformed episode files") {
  Schema schema = io_schema();
  auto code = [&](const std::string& text) { return code_of([&] { parse(text, schema); }); };
  CHECK(code("episode e c\n  alarm @ [5,2]\n") == ErrorCode::NonMonotoneInterval);
  CHECK(code("episode e c\n  alarm @ [1,2]\nepisode e c\n  alarm @ [1,2]\n") == ErrorCode::DuplicateId);
  CHECK(code("  alarm @ [1,2]\n") == ErrorCode::ParseError);
  CHECK(code("episode e\n") == ErrorCode::ParseError);
  CHECK(code("episode e c\n") == ErrorCode::ParseError);
  CHECK(code("episode e c\n  alarm @ [1,\n") == ErrorCode::ParseError);
  CHECK(code("episode e c\n  state(m1)=boiling @ [1,2]\n") == ErrorCode::SchemaViolation);
  CHECK(code("episode e c\n  colour(m1)=red @ [1,2]\n") == ErrorCode::SchemaViolation);
  try {
    parse("episode e c\n  alarm @ [1,2]\n  alarm [3,4]\n", schema);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("synthetic data is deterministic and satisfies the ground truth") {
  Schema schema = machine_schema();
  auto cfg = fault_domain(60, 11, 0.0);
  auto a = generate_synthetic(cfg, schema);
  auto b = generate_synthetic(cfg, schema);
  CHECK(a.episodes == b.episodes);
  CHECK(a.episodes.size() == 60);
  CHECK(a.relabeled.empty());
  const auto& truth = cfg.rules.front();
  std::size_t faults = 0;
  for (const auto& ep : a.episodes) {
    CHECK(covers(truth.condition, ep, schema) == (ep.label == "fault"));
    faults += ep.label == "fault";
    for (std::size_t i = 1; i < ep.events.size(); ++i)
      CHECK(std::pair(ep.events[i - 1].ts(), ep.events[i - 1].tf()) <= std::pair(ep.events[i].ts(), ep.events[i].tf()));
  }
  CHECK(faults == 30);  // classes alternate
  cfg.rng_seed = 12;
  CHECK(generate_synthetic(cfg, schema).episodes != a.episodes);
}

TEST_CASE("noise relabels only what it reports") {
  Schema schema = machine_schema();
  auto clean = generate_synthetic(fault_domain(200, 13, 0.0), schema);
  auto noisy = generate_synthetic(fault_domain(200, 13, 1.0), schema);
  REQUIRE(clean.episodes.size() == noisy.episodes.size());
  std::size_t changed = 0;
  for (std::size_t i = 0; i < clean.episodes.size(); ++i) {
    const bool differs = clean.episodes[i].label != noisy.episodes[i].label;
    changed += differs;
    CHECK(differs == static_cast<bool>(noisy.relabeled.count(noisy.episodes[i].id)));
    CHECK(clean.episodes[i].events == noisy.episodes[i].events);
  }
  // uniform relabeling over two classes changes about half
  CHECK(changed > 70);
  CHECK(changed < 130);
}

TEST_CASE("synth config files") {
  auto dir = std::filesystem::temp_directory_path() / "episodic_synth_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.schema") << "nominal state idle run\n";
    std::ofstream(dir / "x.synth") << "schema = m.schema\nrule = {state(X)=run}@[TS1,TF1] => hot\n"
                                      "default_class = cold\nepisodes = 12\nnoise_rate = 0.1\n";
  }
  auto cfg = SynthConfig::load((dir / "x.synth").string());
  CHECK(cfg.rules.size() == 1);
  CHECK(cfg.rules[0].label == "hot");
  CHECK(cfg.episodes == 12);
  CHECK(cfg.noise_rate == 0.1);
  CHECK(std::filesystem::path(cfg.schema_path) == dir / "m.schema");
  std::filesystem::remove_all(dir);

  auto bad = [](const std::string& text) {
    return code_of([&] {
      std::istringstream in(text);
      SynthConfig::parse(in).validate();
    });
  };
  CHECK(bad("episodes = many\n") == ErrorCode::ConfigError);
  CHECK(bad("noise_rate = 1.5\n") == ErrorCode::ConfigError);
  CHECK(bad("flavour = 3\n") == ErrorCode::ConfigError);
  CHECK(bad("rule = {d1 => c\n") == ErrorCode::ConfigError);
}

TEST_CASE("atomic writes replace the whole file") {
  auto path = (std::filesystem::temp_directory_path() / "episodic_atomic.txt").string();
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "second\n");
  std::filesystem::remove(path);
  CHECK(code_of([] { write_file_atomic("/nonexistent-dir/x/y.txt", "z"); }) == ErrorCode::IoError);
}
