#include "rumor/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "rumor/analytics.hpp"

namespace rumor {
namespace {

bool has_key(const KvPairs& kv, const std::string& a,
             const std::string& b = "") {
  for (const auto& [key, value] : kv)
    if (key == a || (!b.empty() && key == b)) return true;
  return false;
}

ExperimentSpec base_spec(const char* scenario, Protocol p, uint32_t n,
                         uint32_t trials) {
  ExperimentSpec spec;
  spec.scenario = scenario;
  spec.cfg.protocol = p;
  spec.cfg.n = n;
  spec.trials = trials;
  return spec;
}

ExperimentResult run_sub(ExperimentSpec spec, const KvPairs& ov,
                         unsigned workers, ScenarioReport& rep,
                         const std::string& label) {
  apply_kv(spec, ov);
  spec.validate();
  ExperimentResult res = run_experiment(spec, workers);
  rep.run_labels.push_back(label);
  rep.runs.push_back(res);
  return res;
}

// "within +-50% of the midpoint" over a sweep collapses to max <= 3 * min
bool stable_within_half(const std::vector<double>& values) {
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi <= 3.0 * lo;
}

std::string join(const std::vector<double>& values) {
  std::ostringstream out;
  for (size_t i = 0; i < values.size(); ++i)
    out << (i ? " " : "") << format_double(values[i]);
  return out.str();
}

// every completed trial used exactly n-1 messages and none timed out
AssertionResult exact_message_check(const std::string& name,
                                    const ExperimentResult& res) {
  const uint64_t want = uint64_t(res.spec.cfg.n) - 1;
  uint64_t bad = 0;
  for (const TrialReport& tr : res.trial_reports)
    if (!tr.completed || tr.rumor_messages != want) ++bad;
  std::ostringstream d;
  d << bad << "/" << res.spec.trials << " trials missed the exact " << want
    << "-message optimum; success_rate "
    << format_double(res.agg.success_rate);
  return {name, bad == 0 && res.agg.success_rate == 1.0, d.str()};
}

void scenario_message_optimality(const KvPairs& ov, unsigned workers,
                                 ScenarioReport& rep) {
  for (uint32_t n : {1000u, 10000u}) {
    ExperimentSpec spec =
        base_spec("message-optimality", Protocol::kRegularPull, n, 100);
    spec.cfg.f_in = 1;
    ExperimentResult res =
        run_sub(spec, ov, workers, rep, "n" + std::to_string(n));
    rep.assertions.push_back(exact_message_check(
        "messages-exactly-n-minus-1-at-n" + std::to_string(res.spec.cfg.n),
        res));
  }
}

void scenario_pull_rounds_scaling(const KvPairs& ov, unsigned workers,
                                  ScenarioReport& rep) {
  for (uint32_t f : {1u, 3u}) {
    std::vector<double> ratios;
    for (uint32_t n : {256u, 1024u, 4096u, 16384u, 65536u}) {
      ExperimentSpec spec =
          base_spec("pull-rounds-scaling", Protocol::kRegularPull, n, 200);
      spec.cfg.f_in = f;
      const std::string label =
          "f" + std::to_string(f) + "_n" + std::to_string(n);
      ExperimentResult res = run_sub(spec, ov, workers, rep, label);
      const double ratio =
          res.agg.rounds.median / fanout_log(res.spec.cfg.f_in,
                                             double(res.spec.cfg.n));
      ratios.push_back(ratio);
      std::ostringstream d;
      d << "median " << format_double(res.agg.rounds.median) << " rounds, "
        << format_double(ratio) << "x the log base-" << f + 1 << " term";
      rep.assertions.push_back(
          {"rounds-ratio-band-" + label, ratio >= 1.0 && ratio <= 8.0,
           d.str()});
    }
    rep.assertions.push_back({"rounds-ratio-stability-f" + std::to_string(f),
                              stable_within_half(ratios),
                              "ratios across the n-sweep: " + join(ratios)});
  }
}

void scenario_endgame(const KvPairs& ov, unsigned workers,
                      ScenarioReport& rep) {
  for (uint32_t n : {4096u, 65536u}) {
    ExperimentSpec full =
        base_spec("endgame", Protocol::kRegularPull, n, 200);
    full.cfg.f_in = 1;
    ExperimentResult full_res =
        run_sub(full, ov, workers, rep, "full_n" + std::to_string(n));

    ExperimentSpec late = full;
    if (!has_key(ov, "initial_informed")) {
      // apply overrides first so a swept n still gets a matching start
      ExperimentSpec probe = full;
      apply_kv(probe, ov);
      late.initial_informed = static_cast<uint32_t>(
          std::ceil(probe.cfg.n / std::log(double(probe.cfg.n))));
    }
    ExperimentResult late_res =
        run_sub(late, ov, workers, rep, "endgame_n" + std::to_string(n));

    const double nn = double(late_res.spec.cfg.n);
    const double bound = 8.0 * std::log2(std::log(nn)) + 10.0;
    const double med_late = late_res.agg.rounds.median;
    const double med_full = full_res.agg.rounds.median;
    std::ostringstream d1;
    d1 << format_double(late_res.spec.initial_informed)
       << " pre-informed; median " << format_double(med_late)
       << " rounds vs bound " << format_double(bound);
    rep.assertions.push_back({"endgame-rounds-bound-n" + std::to_string(n),
                              med_late <= bound, d1.str()});
    std::ostringstream d2;
    d2 << "endgame median " << format_double(med_late) << ", full-run median "
       << format_double(med_full);
    rep.assertions.push_back({"endgame-at-most-half-full-n" + std::to_string(n),
                              med_late <= med_full / 2.0, d2.str()});
  }
}

void scenario_failure_robustness(const KvPairs& ov, unsigned workers,
                                 ScenarioReport& rep) {
  ExperimentSpec spec =
      base_spec("failure-robustness", Protocol::kRegularPull, 10000, 200);
  spec.cfg.f_in = 1;
  spec.epsilon = 0.5;  // preset default: half the processes crash at round 0
  spec.delta = 0.5;    // preset default: every call fails with probability 1/2
  apply_kv(spec, ov);
  if (!has_key(ov, "rounds"))
    spec.cfg.round_budget =
        static_cast<uint32_t>(8.0 * std::log2(double(spec.cfg.n)) + 40.0);
  spec.validate();
  ExperimentResult res = run_experiment(spec, workers);
  rep.run_labels.push_back("n" + std::to_string(spec.cfg.n));
  rep.runs.push_back(res);

  std::ostringstream d1;
  d1 << "success_rate " << format_double(res.agg.success_rate) << " within "
     << spec.cfg.round_budget << " rounds";
  rep.assertions.push_back({"good-processes-informed-in-time",
                            res.agg.success_rate >= 0.99, d1.str()});
  std::ostringstream d2;
  d2 << "max messages over trials " << res.agg.messages.max << " vs n = "
     << spec.cfg.n;
  rep.assertions.push_back({"messages-at-most-n-under-failures",
                            res.agg.messages.max <= spec.cfg.n, d2.str()});
}

void scenario_pushpull_overhead(const KvPairs& ov, unsigned workers,
                                ScenarioReport& rep) {
  for (uint32_t n : {4096u, 65536u}) {
    ExperimentSpec spec = base_spec("pushpull-overhead",
                                    Protocol::kRegularPushThenPull, n, 100);
    spec.cfg.f_in = 1;
    spec.cfg.f_out = 1;
    ExperimentResult res =
        run_sub(spec, ov, workers, rep, "n" + std::to_string(n));

    const double nn = double(res.spec.cfg.n);
    bool all_complete = true;
    double overhead_sum = 0.0;
    for (const TrialReport& tr : res.trial_reports) {
      all_complete = all_complete && tr.completed;
      overhead_sum += double(tr.rumor_messages) - (nn - 1.0);
    }
    const double overhead_mean = overhead_sum / res.spec.trials;
    const double bound = 10.0 * nn / std::pow(std::log(nn), 2.0);
    std::ostringstream d1;
    d1 << "mean overhead " << format_double(overhead_mean) << " vs bound "
       << format_double(bound) << " (10n/ln^2 n)"
       << (all_complete ? "" : "; some trials timed out");
    rep.assertions.push_back(
        {"ptp-overhead-bound-n" + std::to_string(n),
         all_complete && overhead_mean <= bound, d1.str()});
    std::ostringstream d2;
    d2 << "max total messages " << res.agg.messages.max << " vs 1.2n = "
       << format_double(1.2 * nn);
    rep.assertions.push_back({"ptp-messages-within-1.2n-n" + std::to_string(n),
                              double(res.agg.messages.max) <= 1.2 * nn,
                              d2.str()});
  }
}

void scenario_baseline_blowup(const KvPairs& ov, unsigned workers,
                              ScenarioReport& rep) {
  std::vector<double> per_process;  // polite mean overhead / n, sweep order
  bool polite_all_complete = true;
  for (uint32_t n : {1024u, 4096u, 16384u}) {
    ExperimentSpec spec =
        base_spec("baseline-blowup", Protocol::kPolitePushPull, n, 400);
    ExperimentResult res =
        run_sub(spec, ov, workers, rep, "polite_n" + std::to_string(n));
    polite_all_complete =
        polite_all_complete && res.agg.success_rate == 1.0;
    const double nn = double(res.spec.cfg.n);
    per_process.push_back((res.agg.messages.mean - (nn - 1.0)) / nn);
  }
  const bool growing = per_process[0] < per_process[1] &&
                       per_process[1] < per_process[2];
  rep.assertions.push_back(
      {"polite-overhead-per-process-grows", polite_all_complete && growing,
       "mean overhead per process across the n-sweep: " + join(per_process)});

  for (uint32_t n : {1024u, 4096u, 16384u}) {
    ExperimentSpec spec =
        base_spec("baseline-blowup", Protocol::kRegularPull, n, 100);
    spec.cfg.f_in = 1;
    ExperimentResult res =
        run_sub(spec, ov, workers, rep, "pull_n" + std::to_string(n));
    rep.assertions.push_back(exact_message_check(
        "pull-overhead-zero-at-n" + std::to_string(res.spec.cfg.n), res));
  }
}

void scenario_push_messages(const KvPairs& ov, unsigned workers,
                            ScenarioReport& rep) {
  std::vector<double> ratios;
  for (uint32_t n : {1024u, 4096u, 16384u}) {
    ExperimentSpec spec =
        base_spec("push-messages", Protocol::kRegularPush, n, 200);
    spec.cfg.f_out = 1;
    ExperimentResult res =
        run_sub(spec, ov, workers, rep, "n" + std::to_string(n));
    const double nn = double(res.spec.cfg.n);
    const double ratio = res.agg.messages.mean / (nn * std::log(nn));
    ratios.push_back(ratio);
    std::ostringstream d;
    d << "mean messages " << format_double(res.agg.messages.mean) << " = "
      << format_double(ratio) << " * n ln n";
    rep.assertions.push_back({"push-messages-band-n" + std::to_string(n),
                              ratio >= 0.2 && ratio <= 3.0, d.str()});
  }
  rep.assertions.push_back({"push-messages-ratio-stability",
                            stable_within_half(ratios),
                            "ratios across the n-sweep: " + join(ratios)});
}

void scenario_multirumor_bits(const KvPairs& ov, unsigned workers,
                              ScenarioReport& rep) {
  ExperimentSpec spec = base_spec("multirumor-bits",
                                  Protocol::kRegularPushThenPull, 10000, 50);
  spec.cfg.f_in = 1;
  spec.cfg.f_out = 1;
  spec.cfg.rumor_size_bits = 512;
  apply_kv(spec, ov);
  if (spec.rumors.empty() && spec.rumor_schedule_file.empty()) {
    // three concurrent rumors from distinct origins, phases from the config
    for (uint32_t origin : {0u, 1u, 2u})
      spec.rumors.push_back(
          make_rumor_spec(spec.cfg, origin, 0, spec.cfg.rumor_size_bits));
  }
  spec.validate();
  ExperimentResult res = run_experiment(spec, workers);
  rep.run_labels.push_back("n" + std::to_string(spec.cfg.n));
  rep.runs.push_back(res);

  const double nn = double(spec.cfg.n);
  const double bits_cap = 1.2 * nn * spec.cfg.rumor_size_bits;
  uint64_t max_msgs = 0, max_bits = 0, duplicates = 0;
  for (const auto& trial : res.per_rumor) {
    for (const RumorTally& tally : trial) {
      max_msgs = std::max(max_msgs, tally.messages);
      max_bits = std::max(max_bits, tally.total_bits());
      duplicates += tally.duplicate_pull_deliveries;
    }
  }
  std::ostringstream d1;
  d1 << "max per-rumor messages " << max_msgs << " vs 1.1n = "
     << format_double(1.1 * nn);
  rep.assertions.push_back(
      {"per-rumor-messages-within-1.1n", double(max_msgs) <= 1.1 * nn,
       d1.str()});
  std::ostringstream d2;
  d2 << "max per-rumor bits " << max_bits << " vs 1.2*n*b = "
     << format_double(bits_cap);
  rep.assertions.push_back({"per-rumor-bits-within-1.2nb",
                            double(max_bits) <= bits_cap, d2.str()});
  std::ostringstream d3;
  d3 << duplicates << " duplicate pull deliveries across "
     << res.per_rumor.size() << " trials";
  rep.assertions.push_back(
      {"no-duplicate-pull-deliveries", duplicates == 0, d3.str()});
}

void scenario_lemma_sweeps(const KvPairs& ov, unsigned workers,
                           ScenarioReport& rep) {
  (void)ov;
  (void)workers;

  // one-round pull never beats push in expectation
  bool pull_le_push = true;
  std::string witness = "none";
  for (uint64_t n = 2; n <= 200 && pull_le_push; ++n) {
    for (uint32_t f = 1; f <= 5; ++f) {
      const PullPushCheck check = check_pull_le_push(n, f);
      if (!check.holds) {
        pull_le_push = false;
        std::ostringstream w;
        w << "n=" << n << " f=" << f << " u=" << check.witness_u << " pull "
          << format_double(check.pull_value) << " > push "
          << format_double(check.push_value);
        witness = w.str();
        break;
      }
    }
  }
  rep.assertions.push_back({"pull-expectation-at-most-push",
                            pull_le_push,
                            "n up to 200, fanouts 1..5; first violation: " +
                                witness});

  // boundary case u = n-1, f = 1: the two sides agree algebraically
  double worst_gap = 0.0;
  for (uint64_t n = 2; n <= 200; ++n) {
    const double pull = expected_uninformed_pull_wr(n - 1, n, 1);
    const double push = expected_uninformed_push(n - 1, n, 1);
    const double scale = std::max({1.0, pull, push});
    worst_gap = std::max(worst_gap, std::abs(pull - push) / scale);
  }
  rep.assertions.push_back(
      {"pull-equals-push-at-boundary", worst_gap <= 1e-12,
       "worst relative gap at u=n-1, f=1: " + format_double(worst_gap)});

  // informed count can at most (f_in + 1)-fold per round
  bool capped = true;
  std::string cap_witness = "none";
  for (uint64_t n = 2; n <= 200 && capped; ++n) {
    for (uint32_t f = 1; f <= std::min<uint64_t>(5, n - 1) && capped; ++f) {
      for (uint64_t i = 0; i <= n; ++i) {
        const double expected =
            double(n) - expected_uninformed_pull_wor(n - i, n, f);
        const double cap = informed_growth_bound(i, f);
        if (expected > cap * (1.0 + 1e-12) + 1e-12) {
          capped = false;
          std::ostringstream w;
          w << "n=" << n << " f=" << f << " i=" << i << " expected "
            << format_double(expected) << " > cap " << format_double(cap);
          cap_witness = w.str();
          break;
        }
      }
    }
  }
  rep.assertions.push_back({"informed-growth-capped", capped,
                            "n up to 200, fanouts 1..5; first violation: " +
                                cap_witness});
}

using Runner = void (*)(const KvPairs&, unsigned, ScenarioReport&);

struct ScenarioEntry {
  const char* name;
  Runner run;
};

constexpr ScenarioEntry kScenarios[] = {
    {"pull-rounds-scaling", scenario_pull_rounds_scaling},
    {"message-optimality", scenario_message_optimality},
    {"endgame", scenario_endgame},
    {"failure-robustness", scenario_failure_robustness},
    {"pushpull-overhead", scenario_pushpull_overhead},
    {"baseline-blowup", scenario_baseline_blowup},
    {"push-messages", scenario_push_messages},
    {"multirumor-bits", scenario_multirumor_bits},
    {"lemma-sweeps", scenario_lemma_sweeps},
};

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const ScenarioEntry& entry : kScenarios) out.push_back(entry.name);
    return out;
  }();
  return names;
}

bool is_scenario(const std::string& name) {
  for (const ScenarioEntry& entry : kScenarios)
    if (name == entry.name) return true;
  return false;
}

ScenarioReport run_scenario(const std::string& name, const KvPairs& overrides,
                            unsigned workers) {
  for (const ScenarioEntry& entry : kScenarios) {
    if (name != entry.name) continue;
    ScenarioReport rep;
    rep.name = name;
    entry.run(overrides, workers, rep);
    return rep;
  }
  std::string known;
  for (const ScenarioEntry& entry : kScenarios) {
    if (!known.empty()) known += ", ";
    known += entry.name;
  }
  throw ConfigError("unknown scenario '" + name + "' (available: " + known +
                    ")");
}

}  // namespace rumor
