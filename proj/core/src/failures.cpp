#include "rumor/failures.hpp"

#include <fstream>
#include <sstream>

#include "rumor/sampling.hpp"

namespace rumor {

FailurePlan make_adversarial_plan(uint32_t n, double epsilon, uint32_t origin,
                                  CrashMode mode, RngStream rng,
                                  std::vector<CrashEntry> schedule) {
  if (n < 2) throw ConfigError("failure plan: n must be at least 2");
  if (origin >= n) throw ConfigError("failure plan: origin out of range");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw ConfigError("failure plan: epsilon must lie in [0, 1)");

  FailurePlan plan;
  plan.epsilon = epsilon;
  const uint64_t budget = crash_budget(n, epsilon);

  if (mode == CrashMode::kWorstCaseRoundZero) {
    if (!schedule.empty())
      throw ConfigError("failure plan: worst-case mode takes no schedule");
    if (budget > 0) {
      // distinct picks excluding the origin; all fail before round 0
      std::vector<uint32_t> victims;
      sample_peers(rng, n, static_cast<uint32_t>(budget),
                   SamplingMode::kWithoutReplacement, origin, victims);
      for (uint32_t pid : victims) plan.crash_schedule.emplace(pid, 0);
    }
    return plan;
  }

  if (schedule.size() > budget)
    throw ConfigError("failure plan: schedule has " +
                      std::to_string(schedule.size()) +
                      " entries but floor(epsilon*n) allows only " +
                      std::to_string(budget));
  for (const CrashEntry& e : schedule) {
    if (e.pid >= n)
      throw ConfigError("failure plan: process id " + std::to_string(e.pid) +
                        " out of range");
    if (e.pid == origin)
      throw ConfigError("failure plan: the origin cannot crash");
    if (!plan.crash_schedule.emplace(e.pid, e.fail_round).second)
      throw ConfigError("failure plan: duplicate entry for process " +
                        std::to_string(e.pid));
  }
  return plan;
}

std::vector<CrashEntry> parse_crash_schedule(std::istream& in,
                                             const std::string& source_name) {
  std::vector<CrashEntry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    uint64_t pid, fail_round;
    if (!(fields >> pid)) continue;  // blank or comment-only line
    std::string trailing;
    if (!(fields >> fail_round) || (fields >> trailing)) {
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": expected 'pid fail_round'");
    }
    entries.push_back({static_cast<uint32_t>(pid),
                       static_cast<uint32_t>(fail_round)});
  }
  return entries;
}

std::vector<CrashEntry> load_crash_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open crash schedule '" + path + "'");
  return parse_crash_schedule(in, path);
}

void apply_crashes(NetworkState& state, const FailurePlan& plan) {
  if (!plan.has_crashes()) return;
  const uint32_t now = state.round();
  for (const auto& [pid, fail_round] : plan.crash_schedule) {
    if (fail_round <= now) state.mark_failed(pid);
  }
}

}  // namespace rumor
