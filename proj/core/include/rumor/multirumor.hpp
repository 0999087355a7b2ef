#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rumor/config.hpp"
#include "rumor/failures.hpp"
#include "rumor/metrics.hpp"
#include "rumor/protocols.hpp"
#include "rumor/rng.hpp"

// Concurrent age-stamped rumors.  Each rumor runs its own push-then-pull
// schedule: holders push it while its age is below push_phase_len, processes
// pull for it from then on, and at age >= lifetime it retires and is never
// transmitted again.  Pull requests carry the ids of all active rumors the
// requester knows; a contacted process replies only with pull-phase rumors
// missing from that list, so nobody is served a rumor it already holds.
//
// Bit accounting: a message carrying a rumor costs size_bits plus an id/age
// header of ceil(log2 n) + ceil(log2 lifetime) bits; every transmitted pull
// request additionally costs one header per rumor named in its known-list,
// charged to the rumor named.

namespace rumor {

struct RumorId {
  uint32_t origin = 0;
  uint32_t creation_round = 0;
  auto operator<=>(const RumorId&) const = default;
};

struct RumorSpec {
  RumorId id;
  uint32_t size_bits = 1;
  uint32_t push_phase_len = 0;
  uint32_t lifetime = 1;  // active rounds; retires at age >= lifetime
};

// Smallest width that can index x distinct values (0 for x = 1).
uint32_t ceil_log2(uint64_t x);

uint64_t rumor_header_bits(const RumorSpec& spec, uint32_t n);
uint64_t rumor_message_bits(const RumorSpec& spec, uint32_t n);

// Fills phase defaults from the config: push_phase_len at the
// overhead-optimal switch round, lifetime long enough to cover it plus the
// default pull budget.
RumorSpec make_rumor_spec(const ProtocolConfig& cfg, uint32_t origin,
                          uint32_t creation_round, uint32_t size_bits);

class RumorSchedule {
 public:
  RumorSchedule() = default;
  explicit RumorSchedule(std::vector<RumorSpec> rumors);

  const std::vector<RumorSpec>& rumors() const { return rumors_; }
  size_t size() const { return rumors_.size(); }
  bool empty() const { return rumors_.empty(); }
  // First round by which every scheduled rumor has retired.
  uint32_t horizon() const;

 private:
  std::vector<RumorSpec> rumors_;
};

// One "origin creation_round size_bits" triple per line; '#' comments and
// blank lines allowed.  Phase lengths come from make_rumor_spec.
RumorSchedule parse_rumor_schedule(std::istream& in,
                                   const std::string& source_name,
                                   const ProtocolConfig& cfg);
RumorSchedule load_rumor_schedule(const std::string& path,
                                  const ProtocolConfig& cfg);

struct RumorTally {
  uint64_t messages = 0;       // rumor-bearing sends, drops included
  uint64_t rumor_bits = 0;     // messages * (size_bits + header)
  uint64_t control_bits = 0;   // known-list entries naming this rumor
  uint64_t pull_deliveries = 0;
  uint64_t duplicate_pull_deliveries = 0;  // possible only when f_in >= 2
  uint64_t known_by = 0;       // processes holding it when the run ended

  uint64_t total_bits() const { return rumor_bits + control_bits; }
};

// Knowledge matrix for n processes x R rumors plus the staging buffer that
// gives rounds their snapshot semantics.  Rounds must be driven in order
// starting at 0 (creations are seeded when their round arrives).
class MultiRumorState {
 public:
  MultiRumorState(uint32_t n, uint32_t rumor_count);

  uint32_t n() const { return n_; }
  uint32_t rumor_count() const { return rumor_count_; }
  uint32_t round() const { return round_; }

  bool knows(uint32_t pid, uint32_t ridx) const;
  // kUnknown when pid never learned ridx.
  static constexpr uint32_t kUnknown = 0xffffffffu;
  uint32_t learned_round(uint32_t pid, uint32_t ridx) const;
  bool failed(uint32_t pid) const { return failed_[pid] != 0; }

  // processes missing at least one scheduled rumor (failed ones included)
  uint64_t missing_any_count() const { return missing_any_; }
  // completion: every non-failed process knows every scheduled rumor
  bool all_good_know_all() const { return good_missing_any_ == 0; }
  uint64_t known_count(uint32_t ridx) const { return known_count_[ridx]; }

 private:
  friend struct MultiRumorEngine;

  void seed(uint32_t pid, uint32_t ridx);       // immediate (round start)
  bool stage_learn(uint32_t pid, uint32_t ridx);  // false if already staged
  bool staged(uint32_t pid, uint32_t ridx) const;
  void commit_round();  // staged -> known, then advance the round counter
  void mark_failed(uint32_t pid);
  void learn_now(uint32_t pid, uint32_t ridx);

  const uint64_t* row(uint32_t pid) const { return &known_[size_t(pid) * words_]; }

  uint32_t n_ = 0;
  uint32_t rumor_count_ = 0;
  uint32_t words_ = 0;
  uint32_t round_ = 0;
  uint64_t missing_any_ = 0;
  uint64_t good_missing_any_ = 0;
  std::vector<uint64_t> known_;
  std::vector<uint64_t> staged_;
  std::vector<std::pair<uint32_t, uint32_t>> staged_list_;
  std::vector<uint32_t> learned_;
  std::vector<uint32_t> missing_count_;
  std::vector<uint64_t> known_count_;
  std::vector<uint8_t> failed_;
};

struct MultiRumorRoundOutcome {
  uint64_t new_learns = 0;
  uint64_t requests_sent = 0;
  uint64_t rumor_messages = 0;
  std::vector<RumorTally> per_rumor;  // this round only, schedule order
};

// One synchronous round over the multi-rumor state.  Reads knowledge as of
// the round start, applies crashes due this round first, seeds rumors whose
// creation round arrived (a crashed origin never seeds), and commits new
// knowledge at the end.  Fanouts, sampling mode and failure knobs come from
// cfg/plan exactly as in the single-rumor engines, and randomness labels
// reuse the push/pull purposes with the rumor index as slot, so a
// one-rumor schedule replays the single-rumor engine draw for draw.
MultiRumorRoundOutcome multirumor_round(MultiRumorState& state,
                                        const RumorSchedule& schedule,
                                        const ProtocolConfig& cfg,
                                        const FailurePlan& plan,
                                        const TrialRng& rng);

struct MultiRumorTrialReport {
  TrialReport totals;                 // aggregate view across rumors
  std::vector<RumorTally> per_rumor;  // schedule order
};

// Runs rounds from 0 until every non-failed process knows every scheduled
// rumor (until-complete), every rumor has retired, or the round budget is
// hit, whichever comes first.  An auto budget means the schedule horizon.
MultiRumorTrialReport run_multirumor_trial(const ProtocolConfig& cfg,
                                           const RumorSchedule& schedule,
                                           const FailurePlan& plan,
                                           StopRule stop, uint64_t trial_seed);

std::map<RumorId, RumorTally> per_rumor_bit_report(
    const MultiRumorTrialReport& report, const RumorSchedule& schedule);

}  // namespace rumor
