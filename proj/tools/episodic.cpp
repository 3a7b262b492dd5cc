#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "episodic/config.hpp"
#include "episodic/engine.hpp"
#include "episodic/error.hpp"
#include "episodic/io.hpp"
#include "episodic/merit.hpp"
#include "episodic/oracle.hpp"
#include "episodic/rulebase.hpp"
#include "episodic/synth.hpp"

using namespace episodic;

namespace {

Schema load_schema(const std::string& path) { return path.empty() ? Schema{} : Schema::load(path); }

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

int cmd_train(const std::string& schema_path, const std::string& episodes_path, const std::string& config_path,
              const std::string& out_path, const std::string& resume_path, bool quiet) {
  Schema schema = load_schema(schema_path);
  EngineConfig cfg = config_path.empty() ? EngineConfig{} : EngineConfig::load(config_path);
  auto episodes = load_episodes(episodes_path, schema);
  Engine engine = resume_path.empty() ? Engine(schema, cfg) : Engine(schema, cfg, Rulebase::load(resume_path));
  std::vector<IncrementReport> reports;
  auto summary = engine.run(episodes, &reports);
  if (!quiet)
    for (const auto& r : reports) {
      std::cout << to_string(r) << '\n';
      if (r.role.role == Role::Spurious)
        std::cout << "  verify: episode " << r.episode << " damages rule " << *r.role.rule
                  << " (delta " << fixed(r.role.max_delta) << "); check or delete it\n";
    }
  engine.rulebase().save(out_path);
  std::cout << "consumed " << summary.consumed << " of " << episodes.size() << " episodes; "
            << engine.rulebase().size() << " rules; " << (summary.satisfied ? "satisfied" : "not satisfied") << '\n';
  return 0;
}

int cmd_classify(const std::string& schema_path, const std::string& rb_path, const std::string& episodes_path) {
  Schema schema = load_schema(schema_path);
  Rulebase db = Rulebase::load(rb_path);
  for (const auto& ep : load_episodes(episodes_path, schema)) {
    std::vector<int> matching;
    const Rule* best = nullptr;
    auto confidence = [](const Rule& r) {
      return r.stats.coverage() ? static_cast<double>(r.stats.pos) / static_cast<double>(r.stats.coverage()) : 0.0;
    };
    for (const auto& [id, r] : db.rules()) {
      if (r.status != RuleStatus::Active && r.status != RuleStatus::Final) continue;
      if (!kernels::guarded_covers(r.guarded(), ep, schema)) continue;
      matching.push_back(id);
      if (!best || confidence(r) > confidence(*best) ||
          (confidence(r) == confidence(*best) && r.stats.coverage() > best->stats.coverage()))
        best = &r;
    }
    std::cout << ep.id << " predicted=" << (best ? best->label : "abstain") << " rules=";
    for (std::size_t i = 0; i < matching.size(); ++i) std::cout << (i ? "," : "") << matching[i];
    if (matching.empty()) std::cout << '-';
    std::cout << '\n';
  }
  return 0;
}

void print_rule(const Rulebase& db, const Rule& r, double theta_u) {
  auto verdict = uniformness(db, r.id, theta_u);
  std::cout << "rule " << r.id << " [" << to_string(r.status) << "] " << rule_text(r) << '\n'
            << "  stats pos=" << r.stats.pos << " neg=" << r.stats.neg << " entropy=" << fixed(entropy(r.stats))
            << " emer=" << fixed(emer(r.stats)) << '\n'
            << "  uniformness " << (verdict.uniform ? "Uniform" : "NonUniform");
  if (verdict.witness) std::cout << " witness=" << *verdict.witness << " gap=" << fixed(verdict.gap);
  std::cout << '\n';
  for (const auto& ex : r.exceptions) std::cout << "  except " << to_string(ex) << '\n';
  for (const auto& e : db.edges())
    if (e.general == r.id || e.specific == r.id)
      std::cout << "  edge " << e.general << " -> " << e.specific << " (" << e.witness << ")\n";
}

int cmd_inspect(const std::string& rb_path, int rule_id, double theta_u) {
  Rulebase db = Rulebase::load(rb_path);
  if (rule_id > 0) {
    print_rule(db, db.get(rule_id), theta_u);
    return 0;
  }
  for (const auto& [id, r] : db.rules()) print_rule(db, r, theta_u);
  return 0;
}

int cmd_gen(const std::string& synth_path, const std::string& out_path, const std::string& schema_override) {
  SynthConfig cfg = SynthConfig::load(synth_path);
  const std::string schema_path = schema_override.empty() ? cfg.schema_path : schema_override;
  Schema schema = load_schema(schema_path);
  auto result = generate_synthetic(cfg, schema);
  save_episodes(out_path, result.episodes);
  std::cout << "wrote " << result.episodes.size() << " episodes (" << result.relabeled.size() << " relabeled by noise)\n";
  return 0;
}

int cmd_oracle(const std::string& schema_path, const std::string& episodes_path, const std::string& label,
               const std::string& bounds_path) {
  Schema schema = load_schema(schema_path);
  auto episodes = load_episodes(episodes_path, schema);
  SpaceBounds bounds = bounds_path.empty() ? SpaceBounds{} : SpaceBounds::load(bounds_path);
  auto best = best_rule_bruteforce(episodes, label, bounds, schema);
  if (best.pos == 0) {
    std::cout << "no condition covers a '" << label << "' episode within bounds (" << best.examined << " examined)\n";
    return 0;
  }
  std::cout << to_string(best.condition) << " => " << label << '\n'
            << "entropy=" << fixed(best.entropy) << " pos=" << best.pos << " neg=" << best.neg
            << " examined=" << best.examined << '\n';
  return 0;
}

int cmd_stats(const std::string& rb_path) {
  Rulebase db = Rulebase::load(rb_path);
  std::map<RuleStatus, std::size_t> by_status;
  std::array<std::size_t, 5> histogram{};  // [0,0.2) ... [0.8,1]
  for (const auto& [id, r] : db.rules()) {
    ++by_status[r.status];
    if (r.retired()) continue;
    auto bin = std::min<std::size_t>(4, static_cast<std::size_t>(entropy(r.stats) * 5));
    ++histogram[bin];
  }
  std::cout << "rules " << db.size() << '\n';
  for (auto s : {RuleStatus::Active, RuleStatus::Probabilistic, RuleStatus::Final, RuleStatus::Retired})
    std::cout << "  " << to_string(s) << ' ' << by_status[s] << '\n';
  std::cout << "edges " << db.edges().size() << '\n' << "entropy histogram (live rules)\n";
  for (std::size_t i = 0; i < histogram.size(); ++i)
    std::cout << "  [" << fixed(i * 0.2, 1) << ',' << fixed((i + 1) * 0.2, 1) << (i == 4 ? "]" : ")") << ' '
              << histogram[i] << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental learner of temporal classification rules from episodes"};
  app.require_subcommand(1);

  std::string schema, episodes, config, out, resume, rulebase, synth, label, bounds;
  bool quiet = false;
  int rule_id = 0;
  double theta_u = MeritConfig{}.theta_u;

  auto* train = app.add_subcommand("train", "Run the incremental loop over an episode file");
  train->add_option("--schema", schema, "Schema file")->required();
  train->add_option("--episodes", episodes, "Episode file")->required();
  train->add_option("--config", config, "Engine config (key=value)");
  train->add_option("--out", out, "Rulebase to write")->required();
  train->add_option("--resume", resume, "Rulebase to continue from");
  train->add_flag("--quiet", quiet, "Only print the summary");

  auto* classify = app.add_subcommand("classify", "Classify episodes with a rulebase");
  classify->add_option("--schema", schema, "Schema file")->required();
  classify->add_option("--rulebase", rulebase, "Rulebase file")->required();
  classify->add_option("--episodes", episodes, "Episode file")->required();

  auto* inspect = app.add_subcommand("inspect", "Show rules, stats and DAG edges");
  inspect->add_option("--rulebase", rulebase, "Rulebase file")->required();
  inspect->add_option("--rule", rule_id, "Only this rule id");
  inspect->add_option("--theta-u", theta_u, "Uniformness threshold in bits");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic episode corpus");
  gen->add_option("--synth-config", synth, "Synthetic corpus config")->required();
  gen->add_option("--out", out, "Episode file to write")->required();
  gen->add_option("--schema", schema, "Schema file (overrides the config's)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force the best rule in a bounded space");
  oracle->add_option("--schema", schema, "Schema file")->required();
  oracle->add_option("--episodes", episodes, "Episode file")->required();
  oracle->add_option("--class", label, "Target class")->required();
  oracle->add_option("--bounds", bounds, "Space bounds (key=value)");

  auto* stats = app.add_subcommand("stats", "Rulebase summary");
  stats->add_option("--rulebase", rulebase, "Rulebase file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (train->parsed()) return cmd_train(schema, episodes, config, out, resume, quiet);
    if (classify->parsed()) return cmd_classify(schema, rulebase, episodes);
    if (inspect->parsed()) return cmd_inspect(rulebase, rule_id, theta_u);
    if (gen->parsed()) return cmd_gen(synth, out, schema);
    if (oracle->parsed()) return cmd_oracle(schema, episodes, label, bounds);
    if (stats->parsed()) return cmd_stats(rulebase);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
