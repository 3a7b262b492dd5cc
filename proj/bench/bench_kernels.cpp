// Serial vs OpenMP timings for the coverage kernels and the oracle scan.
// Usage: bench_kernels [episodes] [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "episodic/condition.hpp"
#include "episodic/kernels.hpp"
#include "episodic/match.hpp"
#include "episodic/oracle.hpp"
#include "episodic/schema.hpp"
#include "episodic/synth.hpp"

using namespace episodic;

namespace {

template <typename Fn>
double best_ms(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

  std::istringstream schema_text(
      "nominal state idle warmup run\nnominal temp low high\nlinear level 0 9\n");
  Schema schema = Schema::parse(schema_text);
  std::istringstream synth_text(
      "rule = {state(X)=run}@[TS1,TF1] & {temp(X)=high}@[TS2,TF2] & [T2(1,2) in [1,+inf]] => fault\n"
      "default_class = normal\nevents_per_episode = 4\natoms_per_event = 2\nobjects = 2\n"
      "max_tick = 30\nmax_duration = 6\nnoise_rate = 0.05\n");
  SynthConfig cfg = SynthConfig::parse(synth_text);
  cfg.episodes = n;
  cfg.rng_seed = 99;
  auto data = generate_synthetic(cfg, schema).episodes;
  std::vector<const Episode*> eps;
  for (const auto& e : data) eps.push_back(&e);

  auto cond = parse_condition("{state(X)=run}@[TS1,TF1] & {temp(Y)=high}@[TS2,TF2] & [T1(1,2) in [0,+inf]]");
  std::vector<RuleCondition> exc = {parse_condition("{level(X) in [0,2]}@[TS1,TF1]")};
  kernels::Guarded guard{&cond, &exc};

  std::vector<RuleCondition> rules;
  std::vector<std::vector<RuleCondition>> none(200);
  std::mt19937_64 rng(5);
  const char* states[] = {"idle", "warmup", "run"};
  for (int i = 0; i < 200; ++i) {
    std::string text = std::string("{state(X)=") + states[rng() % 3] + "}@[TS1,TF1] & {temp(X)=" +
                       (rng() % 2 ? "high" : "low") + "}@[TS2,TF2] & [T2(1,2) in [" + std::to_string(rng() % 5) + ",+inf]]";
    rules.push_back(parse_condition(text));
  }
  std::vector<kernels::Guarded> guards;
  for (int i = 0; i < 200; ++i) guards.push_back({&rules[i], &none[i]});

  std::printf("episodes %zu, threads %d, best of %d\n", data.size(), omp_get_max_threads(), repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
  std::fflush(stdout);

  std::vector<char> ms, mp;
  double s = best_ms(repeats, [&] { ms = kernels::cover_mask_serial(cond, eps, schema); });
  double p = best_ms(repeats, [&] { mp = kernels::cover_mask(cond, eps, schema); });
  row("cover_mask", s, p, ms == mp);

  kernels::CoverCounts cs, cp;
  s = best_ms(repeats, [&] { cs = kernels::count_coverage_serial(guard, eps, "fault", schema); });
  p = best_ms(repeats, [&] { cp = kernels::count_coverage(guard, eps, "fault", schema); });
  row("count_coverage", s, p, cs == cp);

  const std::size_t probe = std::min<std::size_t>(data.size(), 200);
  std::vector<std::vector<char>> rs(probe), rp(probe);
  s = best_ms(repeats, [&] {
    for (std::size_t i = 0; i < probe; ++i) rs[i] = kernels::rules_covering_serial(guards, data[i], schema);
  });
  p = best_ms(repeats, [&] {
    for (std::size_t i = 0; i < probe; ++i) rp[i] = kernels::rules_covering(guards, data[i], schema);
  });
  row("rules_covering x200", s, p, rs == rp);

  std::vector<Episode> sample(data.begin(), data.begin() + std::min<std::size_t>(data.size(), 300));
  SpaceBounds bounds;
  bounds.attributes = {"state", "temp"};
  bounds.allowed_t_attributes = {TAttr::T2};
  OracleResult os, op;
  s = best_ms(1, [&] { os = best_rule_bruteforce_serial(sample, "fault", bounds, schema); });
  p = best_ms(1, [&] { op = best_rule_bruteforce(sample, "fault", bounds, schema); });
  row("oracle scan", s, p, os.condition == op.condition && os.entropy == op.entropy);
  std::printf("oracle examined %zu conditions; best %s (H=%.4f)\n", os.examined, to_string(os.condition).c_str(),
              os.entropy);
  return ms == mp && cs == cp && rs == rp && os.condition == op.condition ? 0 : 1;
}
