// End-to-end checks for the guarantees this project advertises.  Each
// criterion prints one [PASS]/[FAIL] line (plus indented evidence); the exit
// code is 0 only if every requested criterion passed.
//
//   rumorsim_acceptance            all criteria
//   rumorsim_acceptance 4 11       just those two

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rumor/analytics.hpp"
#include "rumor/experiment.hpp"
#include "rumor/multirumor.hpp"
#include "rumor/protocols.hpp"
#include "rumor/scenarios.hpp"
#include "test_support.hpp"

using namespace rumor;
namespace fs = std::filesystem;

namespace {

void print_assertion(const AssertionResult& a) {
  std::printf("    [%s] %s: %s\n", a.passed ? "ok" : "!!", a.name.c_str(),
              a.detail.c_str());
}

// Runs a preset and reports the assertions whose names start with any given
// prefix (all of them when no prefix is given).
bool scenario_criterion(const std::string& name,
                        const std::vector<std::string>& prefixes = {}) {
  const ScenarioReport rep = run_scenario(name, {});
  bool ok = true;
  for (const AssertionResult& a : rep.assertions) {
    bool selected = prefixes.empty();
    for (const std::string& p : prefixes)
      selected = selected || a.name.rfind(p, 0) == 0;
    if (!selected) continue;
    print_assertion(a);
    ok = ok && a.passed;
  }
  return ok;
}

bool crit_message_optimality() { return scenario_criterion("message-optimality"); }
bool crit_pull_le_push() {
  return scenario_criterion("lemma-sweeps", {"pull-"});
}
bool crit_growth_cap() {
  return scenario_criterion("lemma-sweeps", {"informed-"});
}
bool crit_rounds_scaling() { return scenario_criterion("pull-rounds-scaling"); }
bool crit_endgame() { return scenario_criterion("endgame"); }
bool crit_failure_robustness() {
  return scenario_criterion("failure-robustness");
}
bool crit_pushpull_overhead() { return scenario_criterion("pushpull-overhead"); }
bool crit_baselines() {
  const bool blowup = scenario_criterion("baseline-blowup");
  const bool push = scenario_criterion("push-messages");
  return blowup && push;
}
bool crit_multirumor() { return scenario_criterion("multirumor-bits"); }

// ---- criterion 4: one-round recurrences vs simulation and enumeration ----

bool crit_recurrences() {
  bool ok = true;

  // (a) exhaustive enumeration, n <= 6: the closed forms must be exact
  uint64_t enum_checks = 0;
  double enum_worst = 0.0;
  const auto rel_gap = [](double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (uint64_t n = 2; n <= 6; ++n) {
    for (uint64_t u = 0; u <= n; ++u) {
      for (uint32_t f = 1; f <= 3; ++f) {
        enum_worst = std::max(
            enum_worst, rel_gap(expected_uninformed_pull_wr(u, n, f),
                                rumortest::enum_pull_wr(u, n, f)));
        ++enum_checks;
        if (f <= n - 1) {
          enum_worst = std::max(
              enum_worst, rel_gap(expected_uninformed_pull_wor(u, n, f),
                                  rumortest::enum_pull_wor(u, n, f)));
          ++enum_checks;
        }
        if (f * (n - u) <= 8) {
          enum_worst = std::max(
              enum_worst, rel_gap(expected_uninformed_push(u, n, f),
                                  rumortest::enum_push_wr(u, n, f)));
          ++enum_checks;
        }
      }
    }
  }
  const bool enum_ok = enum_worst <= 1e-12;
  std::printf("    [%s] enumeration n<=6: %llu comparisons, worst relative "
              "gap %.3g\n",
              enum_ok ? "ok" : "!!",
              static_cast<unsigned long long>(enum_checks), enum_worst);
  ok = ok && enum_ok;

  // (b) 50 sampled states, 100000 one-round replays per engine, each mean
  // within 3 standard errors of its recurrence
  RngStream sampler(20240816);
  const uint64_t kTrials = 100000;
  uint32_t states_ok = 0;
  double worst_sigma = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double ln_n = std::log(100.0) +
                        sampler.next_unit() * std::log(10000.0 / 100.0);
    const auto n = static_cast<uint32_t>(std::lround(std::exp(ln_n)));
    const double ln_u = sampler.next_unit() * std::log(double(n - 1));
    auto u = static_cast<uint64_t>(std::lround(std::exp(ln_u)));
    if (u < 1) u = 1;
    if (u > n - 1) u = n - 1;
    const auto f = static_cast<uint32_t>(1 + sampler.next_below(4));

    ProtocolConfig cfg;
    cfg.n = n;
    cfg.f_in = cfg.f_out = f;
    const FailurePlan none;
    bool state_ok = true;

    const auto check_one = [&](SamplingMode mode, double expected, auto fn,
                               uint64_t trial_tag) {
      cfg.sampling = mode;
      NetworkState st = rumortest::prefix_state(n, n - u);
      const auto mc = rumortest::one_round_uninformed(
          st, cfg, none, TrialRng(trial_tag), kTrials, fn);
      // The sample standard error collapses to 0 when the expectation is so
      // small that no replay ever left a process uninformed.  Survival
      // indicators are independent (pull) or negatively associated (push),
      // so Var <= mean and sqrt(expected/T) is a sound floor.
      const double se = std::max(
          mc.std_err, std::sqrt(std::max(expected, 0.0) / double(kTrials)));
      const double sigmas = se > 0 ? std::abs(mc.mean - expected) / se : 0.0;
      worst_sigma = std::max(worst_sigma, sigmas);
      if (std::abs(mc.mean - expected) > 3.0 * se) {
        std::printf("    [!!] n=%u u=%llu f=%u: mean %.6f vs %.6f "
                    "(%.2f standard errors)\n",
                    n, static_cast<unsigned long long>(u), f, mc.mean,
                    expected, sigmas);
        state_ok = false;
      }
    };

    check_one(SamplingMode::kWithReplacement,
              expected_uninformed_pull_wr(u, n, f), pull_round,
              1000 + uint64_t(s));
    check_one(SamplingMode::kWithoutReplacement,
              expected_uninformed_pull_wor(u, n, f), pull_round,
              2000 + uint64_t(s));
    check_one(SamplingMode::kWithReplacement,
              expected_uninformed_push(u, n, f), push_round,
              3000 + uint64_t(s));
    if (state_ok) ++states_ok;
    ok = ok && state_ok;
  }
  std::printf("    [%s] simulation: %u/50 sampled states within 3 standard "
              "errors on all three recurrences (worst %.2f)\n",
              states_ok == 50 ? "ok" : "!!", states_ok, worst_sigma);
  return ok;
}

// ---- criterion 11: byte-identical outputs ----

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing " + p.string() + ">";
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool crit_determinism() {
  const fs::path root =
      fs::temp_directory_path() /
      ("rumorsim_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  bool ok = true;

  ExperimentSpec single = spec_from_kv({{"scenario", "det-single"},
                                        {"protocol", "regular-pull"},
                                        {"n", "4096"},
                                        {"trials", "50"},
                                        {"gamma", "0.2"},
                                        {"seed", "99"}});
  ExperimentSpec multi = spec_from_kv({{"scenario", "det-multi"},
                                       {"protocol", "regular-push-then-pull"},
                                       {"n", "2048"},
                                       {"trials", "20"},
                                       {"rumor_bits", "128"},
                                       {"seed", "7"}});
  multi.rumors = {make_rumor_spec(multi.cfg, 0, 0, 128),
                  make_rumor_spec(multi.cfg, 1, 4, 128)};

  const auto emit_pair = [&](const char* tag, const ExperimentSpec& spec,
                             unsigned w1, unsigned w2) {
    const fs::path a = root / (std::string(tag) + "_a");
    const fs::path b = root / (std::string(tag) + "_b");
    emit_outputs(a.string(), {run_experiment(spec, w1)});
    emit_outputs(b.string(), {run_experiment(spec, w2)});
    for (const char* file :
         {"summary.csv", "trajectory.csv", "summary.json"}) {
      const bool same = slurp(a / file) == slurp(b / file);
      std::printf("    [%s] %s %s identical across %u vs %u workers\n",
                  same ? "ok" : "!!", tag, file, w1, w2);
      ok = ok && same;
    }
  };
  emit_pair("single-rumor", single, 1, 4);
  emit_pair("multi-rumor", multi, 1, 3);

  // and a plain repeat at the same worker count
  const fs::path c = root / "repeat_a";
  const fs::path d = root / "repeat_b";
  emit_outputs(c.string(), {run_experiment(single, 2)});
  emit_outputs(d.string(), {run_experiment(single, 2)});
  const bool same = slurp(c / "summary.csv") == slurp(d / "summary.csv");
  std::printf("    [%s] repeat run summary identical\n", same ? "ok" : "!!");
  ok = ok && same;

  fs::remove_all(root);
  return ok;
}

struct Criterion {
  int id;
  const char* label;
  bool (*fn)();
};

constexpr Criterion kCriteria[] = {
    {1, "single-rumor pull completes with exactly n-1 messages",
     crit_message_optimality},
    {2, "expected pull progress never beats push", crit_pull_le_push},
    {3, "per-round informed growth respects the (f+1)x cap", crit_growth_cap},
    {4, "one-round recurrences match simulation and enumeration",
     crit_recurrences},
    {5, "pull round counts scale with log n inside the prediction band",
     crit_rounds_scaling},
    {6, "runs seeded with n/ln n knowers finish in log-log rounds",
     crit_endgame},
    {7, "heavy crashes and call failures still finish fast with ~n messages",
     crit_failure_robustness},
    {8, "push-then-pull at the tuned switch keeps messages near n",
     crit_pushpull_overhead},
    {9, "impolite push-pull pays a growing per-process message premium",
     crit_baselines},
    {10, "concurrent rumors stay inside their per-rumor budgets",
     crit_multirumor},
    {11, "equal seeds give byte-identical outputs at any worker count",
     crit_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > 11) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1..11)\n",
                   argv[i]);
      return 2;
    }
    wanted.push_back(id);
  }
  if (wanted.empty())
    for (const Criterion& c : kCriteria) wanted.push_back(c.id);

  bool all_ok = true;
  for (const int id : wanted) {
    const Criterion& c = kCriteria[id - 1];
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      std::printf("    [!!] threw: %s\n", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %02d: %s (%.1fs)\n", ok ? "PASS" : "FAIL",
                c.id, c.label, secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
