#include "rumor/protocols.hpp"

#include <cmath>

#include "rumor/analytics.hpp"
#include "rumor/sampling.hpp"

namespace rumor {
namespace {

// Collected ids may repeat (several senders can hit one target); counting
// through mark_informed keeps new_informed exact.
uint64_t apply_marks(NetworkState& state, const std::vector<uint32_t>& ids) {
  uint64_t fresh = 0;
  for (uint32_t pid : ids)
    if (state.mark_informed(pid)) ++fresh;
  return fresh;
}

}  // namespace

RoundOutcome pull_round(NetworkState& state, const ProtocolConfig& cfg,
                        const FailurePlan& plan, const TrialRng& rng) {
  apply_crashes(state, plan);
  const uint32_t r = state.round();
  // No coin is ever drawn from a stream whose knob is off, so skipping the
  // derivation is invisible to every other draw; it just saves hashing.
  const bool flaky_calls = plan.delta > 0.0;
  const bool lossy_msgs = plan.gamma > 0.0;
  RoundOutcome out;
  std::vector<uint32_t> targets;
  std::vector<uint32_t> newly;

  for (uint32_t p : state.uninformed_ids()) {
    if (state.failed(p)) continue;
    auto pick = rng.stream(r, p, Draw::kPullTargets);
    sample_peers(pick, cfg.n, cfg.f_in, cfg.sampling, p, targets);
    out.requests_sent += cfg.f_in;
    auto call_coin =
        flaky_calls ? rng.stream(r, p, Draw::kPullCallFail) : RngStream(0);
    auto drop_coin =
        lossy_msgs ? rng.stream(r, p, Draw::kPullReplyDrop) : RngStream(0);
    bool informed_now = false;
    for (uint32_t t : targets) {
      if (!call_succeeds(call_coin, plan.delta)) continue;
      // a failed callee consumes the call but never replies
      if (state.failed(t) || !state.informed(t)) continue;
      ++out.rumor_messages;  // reply sent; counted even if dropped below
      if (!message_delivered(drop_coin, plan.gamma)) continue;
      informed_now = true;
    }
    if (informed_now) newly.push_back(p);
  }

  out.new_informed = apply_marks(state, newly);
  state.advance_round();
  return out;
}

RoundOutcome push_round(NetworkState& state, const ProtocolConfig& cfg,
                        const FailurePlan& plan, const TrialRng& rng) {
  apply_crashes(state, plan);
  const uint32_t r = state.round();
  RoundOutcome out;
  std::vector<uint32_t> targets;
  std::vector<uint32_t> newly;

  const bool flaky_calls = plan.delta > 0.0;
  const bool lossy_msgs = plan.gamma > 0.0;
  for (uint32_t p : state.informed_ids()) {
    if (state.failed(p)) continue;
    auto pick = rng.stream(r, p, Draw::kPushTargets);
    sample_peers(pick, cfg.n, cfg.f_out, cfg.sampling, p, targets);
    auto call_coin =
        flaky_calls ? rng.stream(r, p, Draw::kPushCallFail) : RngStream(0);
    auto drop_coin =
        lossy_msgs ? rng.stream(r, p, Draw::kPushDrop) : RngStream(0);
    for (uint32_t t : targets) {
      ++out.rumor_messages;  // the sender pays for every send
      if (!call_succeeds(call_coin, plan.delta)) continue;
      if (!message_delivered(drop_coin, plan.gamma)) continue;
      if (state.failed(t) || state.informed(t)) continue;
      newly.push_back(t);
    }
  }

  out.new_informed = apply_marks(state, newly);
  state.advance_round();
  return out;
}

RoundOutcome polite_pushpull_round(NetworkState& state,
                                   const ProtocolConfig& cfg,
                                   const FailurePlan& plan,
                                   const TrialRng& rng) {
  apply_crashes(state, plan);
  const uint32_t r = state.round();
  const uint32_t n = state.n();
  RoundOutcome out;
  std::vector<uint32_t> target;
  std::vector<uint32_t> newly;

  const bool flaky_calls = plan.delta > 0.0;
  const bool lossy_msgs = plan.gamma > 0.0;
  for (uint32_t p = 0; p < n; ++p) {
    if (state.failed(p)) continue;
    auto pick = rng.stream(r, p, Draw::kPoliteTarget);
    sample_peers(pick, n, 1, cfg.sampling, p, target);
    const uint32_t t = target[0];
    ++out.requests_sent;  // each call doubles as an implicit request
    auto call_coin =
        flaky_calls ? rng.stream(r, p, Draw::kPoliteCallFail) : RngStream(0);
    if (!call_succeeds(call_coin, plan.delta)) continue;

    auto drop_coin =
        lossy_msgs ? rng.stream(r, p, Draw::kPoliteDrop) : RngStream(0);
    // caller -> callee; transmitted whenever held, even to a failed or
    // already-informed callee
    if (state.informed(p)) {
      ++out.rumor_messages;
      if (message_delivered(drop_coin, plan.gamma) && t != p &&
          !state.failed(t) && !state.informed(t)) {
        newly.push_back(t);
      }
    }
    // callee -> caller; a failed callee sends nothing, a self-call has
    // already transmitted above
    if (t != p && !state.failed(t) && state.informed(t)) {
      ++out.rumor_messages;
      if (message_delivered(drop_coin, plan.gamma) && !state.informed(p)) {
        newly.push_back(p);
      }
    }
  }

  out.new_informed = apply_marks(state, newly);
  state.advance_round();
  return out;
}

uint32_t switch_round_for_overhead(uint32_t n, uint32_t f_out) {
  if (n < 3)
    throw ConfigError("switch_round_for_overhead: n must be at least 3");
  if (f_out < 1)
    throw ConfigError("switch_round_for_overhead: f_out must be at least 1");
  const double ln_n = std::log(static_cast<double>(n));
  const double rounds =
      (ln_n - std::log(ln_n)) / std::log(static_cast<double>(f_out) + 1.0);
  if (rounds <= 0.0) return 0;
  return static_cast<uint32_t>(rounds);  // floor
}

uint32_t default_round_budget(Protocol p, uint32_t n, uint32_t f_in,
                              uint32_t f_out) {
  if (n < 2) throw ConfigError("default_round_budget: n must be at least 2");
  const auto padded = [](double base) {
    // ceil with a nudge so exact powers (log2 of 2^k) do not round up
    return static_cast<uint32_t>(std::ceil(8.0 * base - 1e-9)) + 20;
  };
  const auto dn = static_cast<double>(n);
  switch (p) {
    case Protocol::kRegularPull:
      return padded(fanout_log(f_in, dn));
    case Protocol::kRegularPush:
      return padded(fanout_log(f_out, dn) + std::log(dn) / f_out);
    case Protocol::kRegularPushThenPull:
      return (n >= 3 ? switch_round_for_overhead(n, f_out) : 0) +
             padded(fanout_log(f_in, dn));
    case Protocol::kPolitePushPull:
      return padded(std::log(dn));
  }
  throw ConfigError("default_round_budget: unknown protocol");
}

uint32_t effective_round_budget(const ProtocolConfig& cfg) {
  if (cfg.round_budget != kAutoRounds) return cfg.round_budget;
  return default_round_budget(cfg.protocol, cfg.n, cfg.f_in, cfg.f_out);
}

uint32_t effective_switch_round(const ProtocolConfig& cfg) {
  if (cfg.switch_round != kAutoRounds) return cfg.switch_round;
  if (cfg.protocol != Protocol::kRegularPushThenPull) return 0;
  return switch_round_for_overhead(cfg.n, cfg.f_out);
}

TrialReport run_trial(const ProtocolConfig& cfg, const FailurePlan& plan,
                      StopRule stop, uint64_t trial_seed) {
  return run_trial(cfg, plan, stop, trial_seed, init_state(cfg.n, 0));
}

TrialReport run_trial(const ProtocolConfig& cfg, const FailurePlan& plan,
                      StopRule stop, uint64_t trial_seed,
                      NetworkState state) {
  cfg.validate();
  if (state.n() != cfg.n)
    throw ConfigError("run_trial: state size does not match config");
  const uint32_t budget = effective_round_budget(cfg);
  const uint32_t switch_round = effective_switch_round(cfg);
  if (cfg.protocol == Protocol::kRegularPushThenPull && switch_round > budget)
    throw ConfigError("run_trial: switch_round must be <= round_budget");
  const TrialRng rng(trial_seed);

  // Crashes due at round 0 happen before anything else; a run whose only
  // good process is the origin is complete after zero rounds.
  apply_crashes(state, plan);

  TrialReport report;
  report.seed = trial_seed;
  report.trajectory.push_back(state.uninformed_count());

  while (state.round() < budget) {
    if (stop == StopRule::kUntilComplete && state.all_good_informed()) break;
    RoundOutcome round;
    switch (cfg.protocol) {
      case Protocol::kRegularPull:
        round = pull_round(state, cfg, plan, rng);
        break;
      case Protocol::kRegularPush:
        round = push_round(state, cfg, plan, rng);
        break;
      case Protocol::kRegularPushThenPull:
        round = state.round() < switch_round
                    ? push_round(state, cfg, plan, rng)
                    : pull_round(state, cfg, plan, rng);
        break;
      case Protocol::kPolitePushPull:
        round = polite_pushpull_round(state, cfg, plan, rng);
        break;
    }
    report.rumor_messages += round.rumor_messages;
    report.requests_sent += round.requests_sent;
    report.trajectory.push_back(state.uninformed_count());
  }

  report.rounds = state.round();
  report.completed = state.all_good_informed();
  report.rumor_bits = report.rumor_messages * cfg.rumor_size_bits;
  report.control_bits = 0;  // single-rumor requests carry no id lists
  return report;
}

}  // namespace rumor
