#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "rumor/network_state.hpp"
#include "rumor/rng.hpp"

namespace rumor {

struct CrashEntry {
  uint32_t pid = 0;
  uint32_t fail_round = 0;  // the round at whose start pid stops participating
};

// Immutable once built; safe to share across concurrent trials.
// Crashed processes send nothing and inform no one from their fail round on.
// Calls TO a crashed process still consume the caller's fanout slot but
// elicit no reply or infection.
struct FailurePlan {
  double epsilon = 0.0;  // adversarial crash budget, floor(epsilon*n) processes
  double delta = 0.0;    // P(a placed call fails), one coin per call
  double gamma = 0.0;    // P(a rumor-bearing message is dropped), one coin per message
  std::unordered_map<uint32_t, uint32_t> crash_schedule;  // pid -> fail round

  bool has_crashes() const { return !crash_schedule.empty(); }
};

enum class CrashMode {
  kWorstCaseRoundZero,  // adversary spends the whole budget before round 0
  kExplicitSchedule,    // caller-provided (pid, fail_round) list
};

inline uint64_t crash_budget(uint32_t n, double epsilon) {
  // tiny nudge so exact products like 0.7*10 do not floor to 6
  return static_cast<uint64_t>(epsilon * n + 1e-9);
}

// Worst-case mode picks floor(epsilon*n) distinct non-origin processes with
// the given stream and crashes them all at round 0 (crashing earliest hurts
// dissemination most).  Explicit mode validates `schedule` instead: ids in
// range, no duplicates, never the origin, at most floor(epsilon*n) entries.
// delta/gamma are left at 0; set them on the returned plan.
FailurePlan make_adversarial_plan(uint32_t n, double epsilon, uint32_t origin,
                                  CrashMode mode, RngStream rng,
                                  std::vector<CrashEntry> schedule = {});

// One "pid fail_round" pair per line; blank lines and '#' comments allowed.
std::vector<CrashEntry> parse_crash_schedule(std::istream& in,
                                             const std::string& source_name);
std::vector<CrashEntry> load_crash_schedule(const std::string& path);

// One coin per placed call.
inline bool call_succeeds(RngStream& rng, double delta) {
  return !rng.next_bernoulli(delta);
}

// One coin per rumor-bearing message; dropped messages still count as sent.
inline bool message_delivered(RngStream& rng, double gamma) {
  return !rng.next_bernoulli(gamma);
}

// Flip the failed flag for every schedule entry due at or before the current
// round.  Round engines call this first, so a fail round of r means the
// process never acts in round r.
void apply_crashes(NetworkState& state, const FailurePlan& plan);

}  // namespace rumor
