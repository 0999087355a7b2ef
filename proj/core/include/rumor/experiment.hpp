#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rumor/config.hpp"
#include "rumor/metrics.hpp"
#include "rumor/multirumor.hpp"

// Monte Carlo orchestration: one flat experiment description, deterministic
// per-trial seeding, a worker pool whose scheduling cannot change outputs,
// and CSV/JSON emission.

namespace rumor {

struct ExperimentSpec {
  std::string scenario = "adhoc";  // label echoed into every output row
  ProtocolConfig cfg;
  StopRule stop = StopRule::kUntilComplete;
  uint32_t trials = 1;
  uint32_t origin = 0;
  uint32_t initial_informed = 1;  // informed before round 0 (origin + lowest ids)
  double epsilon = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  // Explicit crash rounds; when empty and epsilon > 0 a fresh worst-case
  // round-0 crash set is drawn per trial.
  std::string crash_schedule_file;
  // Either of these switches the runs to the concurrent-rumor engine.
  std::string rumor_schedule_file;
  std::vector<RumorSpec> rumors;
  std::string out_dir;  // optional; emission stays caller-driven

  bool multi_rumor() const {
    return !rumors.empty() || !rumor_schedule_file.empty();
  }
  void validate() const;
};

// Flat key=value configuration.  Files hold one pair per line ('#' starts a
// comment); overrides arrive as "key=value" strings.  apply_kv applies pairs
// in order, so later pairs win; unknown keys throw ConfigError.
using KvPairs = std::vector<std::pair<std::string, std::string>>;
KvPairs load_kv_file(const std::string& path);
KvPairs parse_kv_args(const std::vector<std::string>& args);
void apply_kv(ExperimentSpec& spec, const KvPairs& pairs);
ExperimentSpec spec_from_kv(const KvPairs& pairs);

// seed for trial i under a master seed; distinct for i = 0..2^32-1
uint64_t trial_seed(uint64_t master_seed, uint32_t index);

// flag > 0 wins, then RUMORSIM_WORKERS, then machine parallelism
unsigned resolve_workers(unsigned flag);

struct ExperimentResult {
  ExperimentSpec spec;
  AggregateReport agg;
  std::vector<TrialReport> trial_reports;          // trial order
  RumorSchedule schedule;                          // multi-rumor runs only
  std::vector<std::vector<RumorTally>> per_rumor;  // [trial][rumor]
};

// Runs spec.trials independent trials (seed_i = master xor mix(i)) and
// aggregates.  Results are identical for any worker count because every
// trial writes its own slot and aggregation is order-independent.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                unsigned workers = 0);

// ---- emission ----

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::string format_double(double v);  // %.12g
std::string summary_csv_header();
std::string summary_csv_row(const ExperimentSpec& spec,
                            const AggregateReport& agg);
std::string sanitize_label(const std::string& label);

// Writes dir/summary.csv (header + one row per result), dir/summary.json
// (row mirror plus assertion outcomes when any), and one trajectory table
// per result: dir/trajectory.csv for a single unlabeled result, else
// dir/trajectory_<label>.csv.  Any failure removes every file this call
// created before rethrowing.
void emit_outputs(const std::string& dir,
                  const std::vector<ExperimentResult>& results,
                  const std::vector<std::string>& labels = {},
                  const std::vector<AssertionResult>& assertions = {});

}  // namespace rumor
