#include "rumor/experiment.hpp"

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rumor/failures.hpp"
#include "rumor/network_state.hpp"
#include "rumor/protocols.hpp"
#include "rumor/rng.hpp"

namespace fs = std::filesystem;

namespace rumor {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0' ||
      value.find('-') != std::string::npos)
    throw ConfigError("config key '" + key + "': '" + value +
                      "' is not a non-negative integer");
  return v;
}

uint32_t parse_u32(const std::string& key, const std::string& value) {
  const uint64_t v = parse_u64(key, value);
  if (v > 0xffffffffull)
    throw ConfigError("config key '" + key + "': value too large");
  return static_cast<uint32_t>(v);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': '" + value +
                      "' is not a number");
  return v;
}

// "auto" or a round count
uint32_t parse_rounds(const std::string& key, const std::string& value) {
  if (value == "auto") return kAutoRounds;
  return parse_u32(key, value);
}

void require_unit_range(const std::string& key, double v) {
  if (!(v >= 0.0 && v < 1.0))
    throw ConfigError("config key '" + key + "' must lie in [0, 1)");
}

}  // namespace

void ExperimentSpec::validate() const {
  cfg.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (origin >= cfg.n) throw ConfigError("origin must be < n");
  if (initial_informed < 1 || initial_informed > cfg.n)
    throw ConfigError("initial_informed must lie in [1, n]");
  require_unit_range("eps", epsilon);
  require_unit_range("delta", delta);
  require_unit_range("gamma", gamma);
  if (!rumors.empty() && !rumor_schedule_file.empty())
    throw ConfigError("give either inline rumors or rumor_schedule, not both");
  if (multi_rumor() && initial_informed != 1)
    throw ConfigError("initial_informed applies to single-rumor runs only");
  if (scenario.find_first_of(",\n\"") != std::string::npos)
    throw ConfigError("scenario label must be CSV-safe (no commas or quotes)");
}

KvPairs load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  KvPairs pairs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos || trim(body.substr(0, eq)).empty())
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    pairs.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return pairs;
}

KvPairs parse_kv_args(const std::vector<std::string>& args) {
  KvPairs pairs;
  for (const std::string& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || trim(arg.substr(0, eq)).empty())
      throw ConfigError("override '" + arg + "': expected key=value");
    pairs.emplace_back(trim(arg.substr(0, eq)), trim(arg.substr(eq + 1)));
  }
  return pairs;
}

void apply_kv(ExperimentSpec& spec, const KvPairs& pairs) {
  for (const auto& [key, value] : pairs) {
    if (key == "scenario") {
      spec.scenario = value;
    } else if (key == "protocol") {
      spec.cfg.protocol = protocol_from_string(value);
    } else if (key == "n") {
      spec.cfg.n = parse_u32(key, value);
    } else if (key == "f_in") {
      spec.cfg.f_in = parse_u32(key, value);
    } else if (key == "f_out") {
      spec.cfg.f_out = parse_u32(key, value);
    } else if (key == "sampling") {
      spec.cfg.sampling = sampling_from_string(value);
    } else if (key == "rounds") {
      spec.cfg.round_budget = parse_rounds(key, value);
    } else if (key == "switch_round") {
      spec.cfg.switch_round = parse_rounds(key, value);
    } else if (key == "seed") {
      spec.cfg.seed = parse_u64(key, value);
    } else if (key == "rumor_bits") {
      spec.cfg.rumor_size_bits = parse_u32(key, value);
    } else if (key == "stop") {
      spec.stop = stop_rule_from_string(value);
    } else if (key == "trials") {
      spec.trials = parse_u32(key, value);
    } else if (key == "origin") {
      spec.origin = parse_u32(key, value);
    } else if (key == "initial_informed") {
      spec.initial_informed = parse_u32(key, value);
    } else if (key == "eps" || key == "epsilon") {
      spec.epsilon = parse_double(key, value);
    } else if (key == "delta") {
      spec.delta = parse_double(key, value);
    } else if (key == "gamma") {
      spec.gamma = parse_double(key, value);
    } else if (key == "crash_schedule") {
      spec.crash_schedule_file = value;
    } else if (key == "rumor_schedule") {
      spec.rumor_schedule_file = value;
    } else if (key == "out") {
      spec.out_dir = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

ExperimentSpec spec_from_kv(const KvPairs& pairs) {
  ExperimentSpec spec;
  apply_kv(spec, pairs);
  spec.validate();
  return spec;
}

uint64_t trial_seed(uint64_t master_seed, uint32_t index) {
  return master_seed ^ mix64((uint64_t(index) + 1) * kGolden);
}

unsigned resolve_workers(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RUMORSIM_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0 || v > 4096)
      throw ConfigError("RUMORSIM_WORKERS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
  spec.validate();
  ExperimentResult result;
  result.spec = spec;

  FailurePlan base_plan;
  base_plan.epsilon = spec.epsilon;
  base_plan.delta = spec.delta;
  base_plan.gamma = spec.gamma;
  if (!spec.crash_schedule_file.empty()) {
    // validated once; the same schedule then applies to every trial
    auto unused = TrialRng(spec.cfg.seed).plan_stream();
    FailurePlan loaded = make_adversarial_plan(
        spec.cfg.n, spec.epsilon, spec.origin, CrashMode::kExplicitSchedule,
        unused, load_crash_schedule(spec.crash_schedule_file));
    base_plan.crash_schedule = std::move(loaded.crash_schedule);
  }
  const bool fresh_crashes =
      spec.crash_schedule_file.empty() && spec.epsilon > 0.0;

  if (spec.multi_rumor()) {
    result.schedule =
        spec.rumors.empty()
            ? load_rumor_schedule(spec.rumor_schedule_file, spec.cfg)
            : RumorSchedule(spec.rumors);
    result.per_rumor.resize(spec.trials);
  }
  result.trial_reports.resize(spec.trials);

  auto run_one = [&](uint32_t i) {
    const uint64_t seed = trial_seed(spec.cfg.seed, i);
    FailurePlan plan = base_plan;
    if (fresh_crashes) {
      auto picker = TrialRng(seed).plan_stream();
      FailurePlan drawn =
          make_adversarial_plan(spec.cfg.n, spec.epsilon, spec.origin,
                                CrashMode::kWorstCaseRoundZero, picker);
      plan.crash_schedule = std::move(drawn.crash_schedule);
    }
    if (spec.multi_rumor()) {
      MultiRumorTrialReport mr = run_multirumor_trial(
          spec.cfg, result.schedule, plan, spec.stop, seed);
      result.trial_reports[i] = std::move(mr.totals);
      result.per_rumor[i] = std::move(mr.per_rumor);
    } else {
      NetworkState state = init_state(spec.cfg.n, spec.origin);
      for (uint32_t pid = 0, have = 1; have < spec.initial_informed; ++pid)
        if (pid != spec.origin && state.mark_informed(pid)) ++have;
      result.trial_reports[i] =
          run_trial(spec.cfg, plan, spec.stop, seed, std::move(state));
    }
  };

  const unsigned pool =
      std::min<unsigned>(resolve_workers(workers), spec.trials);
  if (pool <= 1) {
    for (uint32_t i = 0; i < spec.trials; ++i) run_one(i);
  } else {
    std::atomic<uint32_t> next{0};
    std::vector<std::exception_ptr> errors(spec.trials);
    auto drain = [&] {
      for (uint32_t i = next.fetch_add(1); i < spec.trials;
           i = next.fetch_add(1)) {
        try {
          run_one(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned w = 0; w < pool; ++w) threads.emplace_back(drain);
    for (std::thread& t : threads) t.join();
    // rethrow by trial index so failures are scheduling-independent too
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  result.agg = aggregate(result.trial_reports);
  return result;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string summary_csv_header() {
  return "scenario,protocol,n,f_in,f_out,sampling,eps,delta,gamma,trials,"
         "success_rate,rounds_mean,rounds_median,rounds_p99,msgs_mean,"
         "msgs_median,bits_mean,seed";
}

std::string summary_csv_row(const ExperimentSpec& spec,
                            const AggregateReport& agg) {
  std::ostringstream row;
  row << spec.scenario << ',' << to_string(spec.cfg.protocol) << ','
      << spec.cfg.n << ',' << spec.cfg.f_in << ',' << spec.cfg.f_out << ','
      << to_string(spec.cfg.sampling) << ',' << format_double(spec.epsilon)
      << ',' << format_double(spec.delta) << ',' << format_double(spec.gamma)
      << ',' << spec.trials << ',' << format_double(agg.success_rate) << ','
      << format_double(agg.rounds.mean) << ','
      << format_double(agg.rounds.median) << ','
      << format_double(agg.rounds.p99) << ','
      << format_double(agg.messages.mean) << ','
      << format_double(agg.messages.median) << ','
      << format_double(agg.bits_mean) << ',' << spec.cfg.seed;
  return row.str();
}

std::string sanitize_label(const std::string& label) {
  std::string safe = label;
  for (char& c : safe) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return safe;
}

namespace {

nlohmann::json summary_json_row(const ExperimentSpec& spec,
                                const AggregateReport& agg) {
  return nlohmann::json{{"scenario", spec.scenario},
                        {"protocol", to_string(spec.cfg.protocol)},
                        {"n", spec.cfg.n},
                        {"f_in", spec.cfg.f_in},
                        {"f_out", spec.cfg.f_out},
                        {"sampling", to_string(spec.cfg.sampling)},
                        {"eps", spec.epsilon},
                        {"delta", spec.delta},
                        {"gamma", spec.gamma},
                        {"trials", spec.trials},
                        {"success_rate", agg.success_rate},
                        {"rounds_mean", agg.rounds.mean},
                        {"rounds_median", agg.rounds.median},
                        {"rounds_p99", agg.rounds.p99},
                        {"msgs_mean", agg.messages.mean},
                        {"msgs_median", agg.messages.median},
                        {"bits_mean", agg.bits_mean},
                        {"seed", spec.cfg.seed}};
}

}  // namespace

void emit_outputs(const std::string& dir,
                  const std::vector<ExperimentResult>& results,
                  const std::vector<std::string>& labels,
                  const std::vector<AssertionResult>& assertions) {
  if (!labels.empty() && labels.size() != results.size())
    throw ConfigError("emit_outputs: one label per result expected");
  fs::create_directories(dir);

  std::vector<fs::path> created;
  auto open = [&](const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    created.push_back(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
  };
  auto close = [](std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed on '" + path.string() + "'");
  };

  try {
    {
      const fs::path path = fs::path(dir) / "summary.csv";
      std::ofstream out = open(path);
      out << summary_csv_header() << '\n';
      for (const ExperimentResult& r : results)
        out << summary_csv_row(r.spec, r.agg) << '\n';
      close(out, path);
    }
    for (size_t i = 0; i < results.size(); ++i) {
      std::string name = "trajectory.csv";
      if (!labels.empty())
        name = "trajectory_" + sanitize_label(labels[i]) + ".csv";
      else if (results.size() > 1)
        name = "trajectory_run" + std::to_string(i) + ".csv";
      const fs::path path = fs::path(dir) / name;
      std::ofstream out = open(path);
      out << "round,u_mean,u_p10,u_p90\n";
      const AggregateReport& agg = results[i].agg;
      for (size_t r = 0; r < agg.u_mean.size(); ++r)
        out << r << ',' << format_double(agg.u_mean[r]) << ','
            << format_double(agg.u_p10[r]) << ','
            << format_double(agg.u_p90[r]) << '\n';
      close(out, path);
    }
    {
      nlohmann::json doc;
      doc["rows"] = nlohmann::json::array();
      for (const ExperimentResult& r : results)
        doc["rows"].push_back(summary_json_row(r.spec, r.agg));
      if (!assertions.empty()) {
        bool all = true;
        doc["assertions"] = nlohmann::json::array();
        for (const AssertionResult& a : assertions) {
          doc["assertions"].push_back(
              {{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
          all = all && a.passed;
        }
        doc["passed"] = all;
      }
      const fs::path path = fs::path(dir) / "summary.json";
      std::ofstream out = open(path);
      out << doc.dump(2) << '\n';
      close(out, path);
    }
  } catch (...) {
    // no partial result sets on disk
    for (const fs::path& path : created) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
}

}  // namespace rumor
