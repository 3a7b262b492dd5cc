#include "episodic/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>

#include "episodic/error.hpp"

namespace episodic {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::size_t line, const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": '" + key + "': " + why);
}

double to_double(std::size_t line, const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  bad(line, key, "expected a number, got '" + v + "'");
}

long long to_int(std::size_t line, const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(line, key, "expected an integer, got '" + v + "'");
  return out;
}

std::size_t to_count(std::size_t line, const std::string& key, const std::string& v) {
  long long n = to_int(line, key, v);
  if (n < 0) bad(line, key, "must be non-negative");
  return static_cast<std::size_t>(n);
}

bool to_bool(std::size_t line, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad(line, key, "expected a boolean, got '" + v + "'");
}

}  // namespace

const Satisfaction& EngineConfig::satisfaction_for(const std::string& label) const {
  auto it = class_satisfaction.find(label);
  return it == class_satisfaction.end() ? satisfaction : it->second;
}

void EngineConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigError, why); };
  merit.weights.validate();
  if (few_limit < 1) fail("few_limit must be >= 1");
  if (!(moderate_fraction > 0 && moderate_fraction < 1)) fail("moderate_fraction must lie in (0,1)");
  if (beam_width < 1) fail("beam_width must be >= 1");
  if (merit.invoke_k < 1) fail("invoke_k must be >= 1");
  if (gap_tolerance < 0) fail("gap_tolerance must be >= 0");
  if (assoc_window < 0) fail("assoc_window must be >= 0");
  if (merit.kappa <= 0) fail("kappa must be positive");
  if (gen_max_patterns < 1) fail("gen_max_patterns must be >= 1");
}

EngineConfig EngineConfig::parse(std::istream& in) {
  EngineConfig c;
  using Setter = std::function<void(std::size_t, const std::string&, const std::string&)>;
  auto real = [](double& field) -> Setter {
    return [&field](std::size_t l, const std::string& k, const std::string& v) { field = to_double(l, k, v); };
  };
  auto count = [](std::size_t& field) -> Setter {
    return [&field](std::size_t l, const std::string& k, const std::string& v) { field = to_count(l, k, v); };
  };
  auto tick = [](Tick& field) -> Setter {
    return [&field](std::size_t l, const std::string& k, const std::string& v) { field = to_int(l, k, v); };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](std::size_t l, const std::string& k, const std::string& v) { field = to_bool(l, k, v); };
  };
  const std::map<std::string, Setter> setters = {
      {"theta_u", real(c.merit.theta_u)},
      {"theta_evid", real(c.merit.theta_evid)},
      {"theta_spur", real(c.merit.theta_spur)},
      {"n_conf", count(c.merit.n_conf)},
      {"theta_common", real(c.merit.theta_common)},
      {"kappa", real(c.merit.kappa)},
      {"invoke_k", count(c.merit.invoke_k)},
      {"w_entropy", real(c.merit.weights.entropy)},
      {"w_conf", real(c.merit.weights.confidence)},
      {"w_cosmetic", real(c.merit.weights.cosmetic)},
      {"w_emer", real(c.merit.weights.emer)},
      {"gap_tolerance", tick(c.gap_tolerance)},
      {"few_limit", count(c.few_limit)},
      {"moderate_fraction", real(c.moderate_fraction)},
      {"theta_og", real(c.theta_og)},
      {"eps_eq", real(c.eps_eq)},
      {"beam_width", count(c.beam_width)},
      {"assoc_window", tick(c.assoc_window)},
      {"assoc_min_count", count(c.assoc_min_count)},
      {"retention_window", count(c.retention_window)},
      {"max_entropy", real(c.satisfaction.max_entropy)},
      {"min_coverage", count(c.satisfaction.min_coverage)},
      {"quarantine_spurious", flag(c.quarantine_spurious)},
      {"stop_when_satisfied", flag(c.stop_when_satisfied)},
      {"gen_max_patterns", count(c.gen_max_patterns)},
      {"rng_seed",
       [&c](std::size_t l, const std::string& k, const std::string& v) {
         c.rng_seed = static_cast<std::uint64_t>(to_count(l, k, v));
       }},
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad(lineno, line, "expected key = value");
    auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.rfind("satisfaction.", 0) == 0) {
      auto comma = value.find(',');
      if (comma == std::string::npos) bad(lineno, key, "expected <max_entropy>,<min_coverage>");
      c.class_satisfaction[key.substr(13)] = {to_double(lineno, key, trim(value.substr(0, comma))),
                                              to_count(lineno, key, trim(value.substr(comma + 1)))};
      continue;
    }
    auto it = setters.find(key);
    if (it == setters.end()) bad(lineno, key, "unknown key");
    it->second(lineno, key, value);
  }
  c.validate();
  return c;
}

EngineConfig EngineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse(in);
}

}  // namespace episodic
