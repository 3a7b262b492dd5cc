#include "episodic/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "episodic/error.hpp"
#include "episodic/match.hpp"

namespace episodic {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

class Sampler {
 public:
  Sampler(const SynthConfig& cfg, const Schema& schema) : cfg_(cfg), rng_(cfg.rng_seed) {
    for (const auto& [name, d] : schema.domains())
      if (d.kind != DomainKind::Relation || d.arity > 0) domains_.push_back(&d);
    if (domains_.empty()) throw Error(ErrorCode::ConfigError, "schema declares no attributes to sample");
  }

  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  Tick tick(Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  std::string object() { return "m" + std::to_string(1 + index(cfg_.objects)); }

  Atom atom() {
    const AttributeDomain& d = *domains_[index(domains_.size())];
    Atom a{d.name, {object()}, {}};
    switch (d.kind) {
      case DomainKind::Nominal: a.value = d.values[index(d.values.size())]; break;
      case DomainKind::Linear: a.value = tick(d.lo, d.hi); break;
      case DomainKind::Structured: {
        auto labels = d.hierarchy.labels();
        std::vector<std::string> leaves;
        for (const auto& l : labels)
          if (d.hierarchy.children(l).empty()) leaves.push_back(l);
        a.value = leaves[index(leaves.size())];
        break;
      }
      case DomainKind::Relation:
        while (static_cast<int>(a.args.size()) < d.arity) a.args.push_back(object());
        a.args.resize(d.arity);
        break;
    }
    return a;
  }

  Episode episode(std::string id) {
    Episode ep{std::move(id), {}, {}};
    const std::size_t n = cfg_.events_per_episode + cfg_.distractors;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Atom> atoms;
      for (std::size_t k = 0; k < cfg_.atoms_per_event; ++k) atoms.push_back(atom());
      Event e;
      e.description = EventDescription(std::move(atoms));
      e.start.tick = tick(0, cfg_.max_tick);
      e.finish.tick = e.start.tick + tick(0, cfg_.max_duration);
      ep.events.push_back(std::move(e));
    }
    std::sort(ep.events.begin(), ep.events.end(),
              [](const Event& a, const Event& b) { return std::pair(a.ts(), a.tf()) < std::pair(b.ts(), b.tf()); });
    return ep;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<const AttributeDomain*> domains_;
};

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigError, why); };
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) fail("noise_rate must lie in [0,1]");
  if (rules.empty() && default_class.empty()) fail("no ground-truth rules and no default class");
  if (events_per_episode + distractors == 0) fail("episodes need at least one event");
  if (atoms_per_event == 0) fail("atoms_per_event must be >= 1");
  if (objects == 0) fail("objects must be >= 1");
  if (max_tick < 0 || max_duration < 0) fail("max_tick and max_duration must be >= 0");
}

SynthConfig SynthConfig::parse(std::istream& in, const std::string& base_dir) {
  SynthConfig c;
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& why) -> void {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": " + why);
  };
  auto count = [&](const std::string& v) -> long long {
    try {
      std::size_t used = 0;
      long long n = std::stoll(v, &used);
      if (used == v.size() && n >= 0) return n;
    } catch (const std::exception&) {
    }
    bad("expected a non-negative integer, got '" + v + "'");
    return 0;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad("expected key = value");
    auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "rule") {
      try {
        auto parsed = parse_rule_text(value);
        c.rules.push_back({std::move(parsed.condition), std::move(parsed.label)});
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (key == "schema") {
      c.schema_path = (std::filesystem::path(base_dir) / value).string();
    } else if (key == "default_class") {
      c.default_class = value;
    } else if (key == "episodes") {
      c.episodes = count(value);
    } else if (key == "noise_rate") {
      try {
        std::size_t used = 0;
        c.noise_rate = std::stod(value, &used);
        if (used != value.size()) bad("bad noise_rate");
      } catch (const std::logic_error&) {
        bad("bad noise_rate '" + value + "'");
      }
    } else if (key == "events_per_episode") {
      c.events_per_episode = count(value);
    } else if (key == "distractors") {
      c.distractors = count(value);
    } else if (key == "atoms_per_event") {
      c.atoms_per_event = count(value);
    } else if (key == "objects") {
      c.objects = count(value);
    } else if (key == "max_tick") {
      c.max_tick = count(value);
    } else if (key == "max_duration") {
      c.max_duration = count(value);
    } else if (key == "rng_seed") {
      c.rng_seed = static_cast<std::uint64_t>(count(value));
    } else if (key == "max_attempts") {
      c.max_attempts = count(value);
    } else {
      bad("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

SynthConfig SynthConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse(in, std::filesystem::path(path).parent_path().string());
}

SynthResult generate_synthetic(const SynthConfig& cfg, const Schema& schema) {
  cfg.validate();
  std::vector<std::string> classes;
  for (const auto& r : cfg.rules)
    if (std::find(classes.begin(), classes.end(), r.label) == classes.end()) classes.push_back(r.label);
  if (!cfg.default_class.empty() && std::find(classes.begin(), classes.end(), cfg.default_class) == classes.end())
    classes.push_back(cfg.default_class);

  Sampler sampler(cfg, schema);
  SynthResult out;
  for (std::size_t i = 0; i < cfg.episodes; ++i) {
    const std::string& target = classes[i % classes.size()];
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < cfg.max_attempts && !accepted; ++attempt) {
      Episode ep = sampler.episode("e" + std::to_string(i + 1));
      std::set<std::string> labels;
      for (const auto& r : cfg.rules)
        if (covers(r.condition, ep, schema)) labels.insert(r.label);
      std::string label;
      if (labels.size() == 1)
        label = *labels.begin();
      else if (labels.empty())
        label = cfg.default_class;
      if (label != target) continue;
      ep.label = label;
      out.episodes.push_back(std::move(ep));
      accepted = true;
    }
    if (!accepted)
      throw Error(ErrorCode::ConfigError, "could not sample an episode of class '" + target + "' within " +
                                              std::to_string(cfg.max_attempts) + " attempts");
  }
  for (auto& ep : out.episodes) {
    if (sampler.unit() >= cfg.noise_rate) continue;
    const std::string& fresh = classes[sampler.index(classes.size())];
    if (fresh != ep.label) out.relabeled.insert(ep.id);
    ep.label = fresh;
  }
  return out;
}

}  // namespace episodic
