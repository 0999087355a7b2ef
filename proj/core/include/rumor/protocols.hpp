#pragma once

#include <cstdint>

#include "rumor/config.hpp"
#include "rumor/failures.hpp"
#include "rumor/metrics.hpp"
#include "rumor/network_state.hpp"
#include "rumor/rng.hpp"

namespace rumor {

// Labels for the independent randomness streams a trial consumes.  Round
// engines address draws by (round, process, purpose, slot); the slot carries
// the rumor index in multi-rumor runs and stays 0 in single-rumor runs, so a
// degenerate one-rumor schedule consumes exactly the draws the single-rumor
// engine would.
enum class Draw : uint64_t {
  kPullTargets = 1,
  kPullCallFail,
  kPullReplyDrop,
  kPushTargets,
  kPushCallFail,
  kPushDrop,
  kPoliteTarget,
  kPoliteCallFail,
  kPoliteDrop,
  kCrashPick,
};

class TrialRng {
 public:
  explicit TrialRng(uint64_t trial_seed) : root_(trial_seed) {}

  RngStream stream(uint32_t round, uint32_t process, Draw purpose,
                   uint32_t slot = 0) const {
    return root_.derive(round)
        .derive((static_cast<uint64_t>(process) << 32) | slot)
        .derive(static_cast<uint64_t>(purpose));
  }

  // Stream for pre-round-0 decisions (adversarial crash selection).
  RngStream plan_stream() const {
    return root_.derive(static_cast<uint64_t>(Draw::kCrashPick));
  }

 private:
  RngStream root_;
};

struct RoundOutcome {
  uint64_t new_informed = 0;
  uint64_t rumor_messages = 0;  // every rumor-bearing send, drops included
  uint64_t requests_sent = 0;   // pull requests / polite calls placed
};

// One synchronous round each.  All three: read informedness as of the round
// start (snapshot semantics), mark crashes due this round before acting,
// apply new informedness at the end, then advance the round counter.
//
// pull: every non-failed uninformed process sends exactly f_in requests.  A
// reply is sent iff the call succeeds (delta) and the target is non-failed
// and informed; each reply sent counts one rumor message even if dropped
// (gamma).  The requester is informed iff at least one reply is delivered.
RoundOutcome pull_round(NetworkState& state, const ProtocolConfig& cfg,
                        const FailurePlan& plan, const TrialRng& rng);

// push: every non-failed process informed at round start sends the rumor to
// f_out sampled peers.  Every send counts one rumor message, even to self,
// to failed or already-informed targets, on failed calls, or when dropped.
RoundOutcome push_round(NetworkState& state, const ProtocolConfig& cfg,
                        const FailurePlan& plan, const TrialRng& rng);

// polite push-pull: every non-failed process places one call.  On a call
// that does not fail, each side holding the rumor at round start transmits
// it unconditionally (one rumor message per direction held); a transmission
// informs the other side iff it is non-failed and the message is not
// dropped.  A self-call (possible with replacement) transmits at most once.
RoundOutcome polite_pushpull_round(NetworkState& state,
                                   const ProtocolConfig& cfg,
                                   const FailurePlan& plan,
                                   const TrialRng& rng);

// Overhead-optimal push phase length: floor(log_{f_out+1} n -
// log_{f_out+1} ln n), clamped at 0.  Throws for n < 3.
uint32_t switch_round_for_overhead(uint32_t n, uint32_t f_out);

// Generous until-complete budgets: ceil(8 * log_{f_in+1} n) + 20 for pull,
// analogous padded base terms for the other protocols.
uint32_t default_round_budget(Protocol p, uint32_t n, uint32_t f_in,
                              uint32_t f_out);

// Resolve kAutoRounds sentinels against the config.
uint32_t effective_round_budget(const ProtocolConfig& cfg);
uint32_t effective_switch_round(const ProtocolConfig& cfg);

// Run one seeded trial from the canonical start (origin 0 informed) or from
// a caller-built state (pre-informed prefixes, staged crash flags, ...).
// Fixed-budget runs exactly the budget; until-complete stops as soon as
// every non-failed process is informed.  The report is a pure function of
// (cfg, plan, stop, seed, start state).
TrialReport run_trial(const ProtocolConfig& cfg, const FailurePlan& plan,
                      StopRule stop, uint64_t trial_seed);
TrialReport run_trial(const ProtocolConfig& cfg, const FailurePlan& plan,
                      StopRule stop, uint64_t trial_seed, NetworkState state);

}  // namespace rumor
