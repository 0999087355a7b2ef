#include "rumor/multirumor.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "rumor/sampling.hpp"

namespace rumor {

uint32_t ceil_log2(uint64_t x) {
  if (x == 0) throw ConfigError("ceil_log2: x must be at least 1");
  return static_cast<uint32_t>(std::bit_width(x - 1));
}

uint64_t rumor_header_bits(const RumorSpec& spec, uint32_t n) {
  return ceil_log2(n) + ceil_log2(spec.lifetime);
}

uint64_t rumor_message_bits(const RumorSpec& spec, uint32_t n) {
  return spec.size_bits + rumor_header_bits(spec, n);
}

RumorSpec make_rumor_spec(const ProtocolConfig& cfg, uint32_t origin,
                          uint32_t creation_round, uint32_t size_bits) {
  if (origin >= cfg.n) throw ConfigError("rumor origin out of range");
  if (size_bits < 1) throw ConfigError("rumor size_bits must be at least 1");
  RumorSpec spec;
  spec.id = {origin, creation_round};
  spec.size_bits = size_bits;
  spec.push_phase_len =
      cfg.n >= 3 ? switch_round_for_overhead(cfg.n, cfg.f_out) : 0;
  spec.lifetime =
      spec.push_phase_len +
      default_round_budget(Protocol::kRegularPull, cfg.n, cfg.f_in, cfg.f_out);
  return spec;
}

RumorSchedule::RumorSchedule(std::vector<RumorSpec> rumors)
    : rumors_(std::move(rumors)) {
  for (size_t i = 0; i < rumors_.size(); ++i) {
    const RumorSpec& spec = rumors_[i];
    if (spec.size_bits < 1)
      throw ConfigError("rumor schedule: size_bits must be at least 1");
    if (spec.lifetime < 1)
      throw ConfigError("rumor schedule: lifetime must be at least 1");
    if (spec.push_phase_len > spec.lifetime)
      throw ConfigError("rumor schedule: push_phase_len must be <= lifetime");
    for (size_t j = 0; j < i; ++j) {
      if (rumors_[j].id == spec.id)
        throw ConfigError(
            "rumor schedule: duplicate rumor id (origin " +
            std::to_string(spec.id.origin) + ", creation round " +
            std::to_string(spec.id.creation_round) + ")");
    }
  }
}

uint32_t RumorSchedule::horizon() const {
  uint32_t last = 0;
  for (const RumorSpec& spec : rumors_) {
    const uint32_t retire = spec.id.creation_round + spec.lifetime;
    if (retire > last) last = retire;
  }
  return last;
}

RumorSchedule parse_rumor_schedule(std::istream& in,
                                   const std::string& source_name,
                                   const ProtocolConfig& cfg) {
  std::vector<RumorSpec> specs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    uint64_t origin, creation, bits;
    if (!(fields >> origin)) continue;
    std::string trailing;
    if (!(fields >> creation >> bits) || (fields >> trailing)) {
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": expected 'origin creation_round size_bits'");
    }
    specs.push_back(make_rumor_spec(cfg, static_cast<uint32_t>(origin),
                                    static_cast<uint32_t>(creation),
                                    static_cast<uint32_t>(bits)));
  }
  return RumorSchedule(std::move(specs));
}

RumorSchedule load_rumor_schedule(const std::string& path,
                                  const ProtocolConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rumor schedule '" + path + "'");
  return parse_rumor_schedule(in, path, cfg);
}

MultiRumorState::MultiRumorState(uint32_t n, uint32_t rumor_count)
    : n_(n),
      rumor_count_(rumor_count),
      words_((rumor_count + 63) / 64),
      known_(size_t(n) * ((rumor_count + 63) / 64), 0),
      staged_(size_t(n) * ((rumor_count + 63) / 64), 0),
      learned_(size_t(n) * rumor_count, kUnknown),
      missing_count_(n, rumor_count),
      known_count_(rumor_count, 0),
      failed_(n, 0) {
  if (n < 2) throw ConfigError("MultiRumorState: n must be at least 2");
  missing_any_ = rumor_count > 0 ? n : 0;
  good_missing_any_ = missing_any_;
}

bool MultiRumorState::knows(uint32_t pid, uint32_t ridx) const {
  return (known_[size_t(pid) * words_ + ridx / 64] >> (ridx % 64)) & 1u;
}

uint32_t MultiRumorState::learned_round(uint32_t pid, uint32_t ridx) const {
  return learned_[size_t(pid) * rumor_count_ + ridx];
}

void MultiRumorState::learn_now(uint32_t pid, uint32_t ridx) {
  auto& word = known_[size_t(pid) * words_ + ridx / 64];
  const uint64_t bit = 1ull << (ridx % 64);
  if (word & bit) return;
  word |= bit;
  learned_[size_t(pid) * rumor_count_ + ridx] = round_;
  ++known_count_[ridx];
  if (--missing_count_[pid] == 0) {
    --missing_any_;
    if (!failed_[pid]) --good_missing_any_;
  }
}

void MultiRumorState::seed(uint32_t pid, uint32_t ridx) {
  learn_now(pid, ridx);
}

bool MultiRumorState::staged(uint32_t pid, uint32_t ridx) const {
  return (staged_[size_t(pid) * words_ + ridx / 64] >> (ridx % 64)) & 1u;
}

bool MultiRumorState::stage_learn(uint32_t pid, uint32_t ridx) {
  auto& word = staged_[size_t(pid) * words_ + ridx / 64];
  const uint64_t bit = 1ull << (ridx % 64);
  if (word & bit) return false;
  word |= bit;
  staged_list_.emplace_back(pid, ridx);
  return true;
}

void MultiRumorState::commit_round() {
  for (const auto& [pid, ridx] : staged_list_) {
    staged_[size_t(pid) * words_ + ridx / 64] &= ~(1ull << (ridx % 64));
    learn_now(pid, ridx);
  }
  staged_list_.clear();
  ++round_;
}

void MultiRumorState::mark_failed(uint32_t pid) {
  if (failed_[pid]) return;
  failed_[pid] = 1;
  if (missing_count_[pid] > 0) --good_missing_any_;
}

struct MultiRumorEngine {
  static MultiRumorRoundOutcome round(MultiRumorState& state,
                                      const RumorSchedule& schedule,
                                      const ProtocolConfig& cfg,
                                      const FailurePlan& plan,
                                      const TrialRng& rng) {
    const uint32_t r = state.round_;
    const uint32_t n = state.n_;
    const auto& rumors = schedule.rumors();
    const uint32_t count = state.rumor_count_;
    const uint32_t words = state.words_;

    MultiRumorRoundOutcome out;
    out.per_rumor.assign(count, RumorTally{});

    // as in the single-rumor engines: streams nothing ever draws from need
    // not be derived at all
    const bool flaky_calls = plan.delta > 0.0;
    const bool lossy_msgs = plan.gamma > 0.0;

    for (const auto& [pid, fail_round] : plan.crash_schedule)
      if (fail_round <= r) state.mark_failed(pid);

    // Phase masks for this round, plus per-rumor bit prices.
    std::vector<uint64_t> active_mask(words, 0), push_mask(words, 0),
        pull_mask(words, 0);
    std::vector<uint64_t> msg_bits(count, 0), header_bits(count, 0);
    for (uint32_t i = 0; i < count; ++i) {
      const RumorSpec& spec = rumors[i];
      msg_bits[i] = rumor_message_bits(spec, n);
      header_bits[i] = rumor_header_bits(spec, n);
      if (r < spec.id.creation_round) continue;
      const uint32_t age = r - spec.id.creation_round;
      if (age >= spec.lifetime) continue;  // retired: transmitted never again
      if (age == 0 && !state.failed_[spec.id.origin])
        state.seed(spec.id.origin, i);
      active_mask[i / 64] |= 1ull << (i % 64);
      if (age < spec.push_phase_len)
        push_mask[i / 64] |= 1ull << (i % 64);
      else
        pull_mask[i / 64] |= 1ull << (i % 64);
    }

    std::vector<uint32_t> targets;

    // Push side: each holder pushes every push-phase rumor it knows to its
    // own f_out sampled peers (slot = rumor index keeps streams apart).
    for (uint32_t p = 0; p < n; ++p) {
      if (state.failed_[p]) continue;
      const uint64_t* known = state.row(p);
      for (uint32_t w = 0; w < words; ++w) {
        uint64_t bits = known[w] & push_mask[w];
        while (bits) {
          const uint32_t i = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          auto pick = rng.stream(r, p, Draw::kPushTargets, i);
          sample_peers(pick, n, cfg.f_out, cfg.sampling, p, targets);
          auto call_coin = flaky_calls
                               ? rng.stream(r, p, Draw::kPushCallFail, i)
                               : RngStream(0);
          auto drop_coin =
              lossy_msgs ? rng.stream(r, p, Draw::kPushDrop, i) : RngStream(0);
          RumorTally& tally = out.per_rumor[i];
          for (uint32_t t : targets) {
            ++tally.messages;
            tally.rumor_bits += msg_bits[i];
            if (!call_succeeds(call_coin, plan.delta)) continue;
            if (!message_delivered(drop_coin, plan.gamma)) continue;
            if (t == p || state.failed_[t] || state.knows(t, i)) continue;
            state.stage_learn(t, i);
          }
        }
      }
    }

    // Pull side: a process missing at least one pull-phase rumor sends f_in
    // requests listing every active rumor it knows; a contacted process
    // serves the pull-phase rumors absent from that list.
    for (uint32_t p = 0; p < n; ++p) {
      if (state.failed_[p]) continue;
      const uint64_t* known = state.row(p);
      bool wants = false;
      for (uint32_t w = 0; w < words && !wants; ++w)
        wants = (pull_mask[w] & ~known[w]) != 0;
      if (!wants) continue;

      auto pick = rng.stream(r, p, Draw::kPullTargets);
      sample_peers(pick, n, cfg.f_in, cfg.sampling, p, targets);
      out.requests_sent += cfg.f_in;
      auto call_coin = flaky_calls
                           ? rng.stream(r, p, Draw::kPullCallFail)
                           : RngStream(0);
      auto drop_coin =
          lossy_msgs ? rng.stream(r, p, Draw::kPullReplyDrop) : RngStream(0);
      for (uint32_t t : targets) {
        if (!call_succeeds(call_coin, plan.delta)) continue;
        // The request went out: charge its known-list, one header per
        // active rumor named, to the rumor named.
        for (uint32_t w = 0; w < words; ++w) {
          uint64_t bits = known[w] & active_mask[w];
          while (bits) {
            const uint32_t i = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            out.per_rumor[i].control_bits += header_bits[i];
          }
        }
        if (state.failed_[t]) continue;  // uselessly called
        const uint64_t* theirs = state.row(t);
        for (uint32_t w = 0; w < words; ++w) {
          uint64_t bits = theirs[w] & pull_mask[w] & ~known[w];
          while (bits) {
            const uint32_t i = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            RumorTally& tally = out.per_rumor[i];
            ++tally.messages;
            tally.rumor_bits += msg_bits[i];
            if (!message_delivered(drop_coin, plan.gamma)) continue;
            ++tally.pull_deliveries;
            if (!state.stage_learn(p, i)) ++tally.duplicate_pull_deliveries;
          }
        }
      }
    }

    out.new_learns = state.staged_list_.size();
    for (const RumorTally& tally : out.per_rumor)
      out.rumor_messages += tally.messages;
    state.commit_round();
    return out;
  }
};

MultiRumorRoundOutcome multirumor_round(MultiRumorState& state,
                                        const RumorSchedule& schedule,
                                        const ProtocolConfig& cfg,
                                        const FailurePlan& plan,
                                        const TrialRng& rng) {
  if (state.n() != cfg.n)
    throw ConfigError("multirumor_round: state size does not match config");
  if (state.rumor_count() != schedule.size())
    throw ConfigError("multirumor_round: state does not match schedule");
  return MultiRumorEngine::round(state, schedule, cfg, plan, rng);
}

MultiRumorTrialReport run_multirumor_trial(const ProtocolConfig& cfg,
                                           const RumorSchedule& schedule,
                                           const FailurePlan& plan,
                                           StopRule stop,
                                           uint64_t trial_seed) {
  cfg.validate();
  for (const RumorSpec& spec : schedule.rumors())
    if (spec.id.origin >= cfg.n)
      throw ConfigError("rumor schedule: origin out of range");

  const uint32_t horizon = schedule.horizon();
  const uint32_t budget = cfg.round_budget == kAutoRounds
                              ? horizon
                              : std::min(cfg.round_budget, horizon);
  MultiRumorState state(cfg.n, static_cast<uint32_t>(schedule.size()));
  const TrialRng rng(trial_seed);

  MultiRumorTrialReport report;
  report.per_rumor.assign(schedule.size(), RumorTally{});
  report.totals.seed = trial_seed;
  report.totals.trajectory.push_back(state.missing_any_count());

  while (state.round() < budget) {
    if (stop == StopRule::kUntilComplete && state.all_good_know_all()) break;
    MultiRumorRoundOutcome round =
        multirumor_round(state, schedule, cfg, plan, rng);
    report.totals.requests_sent += round.requests_sent;
    report.totals.rumor_messages += round.rumor_messages;
    for (size_t i = 0; i < round.per_rumor.size(); ++i) {
      RumorTally& sum = report.per_rumor[i];
      const RumorTally& add = round.per_rumor[i];
      sum.messages += add.messages;
      sum.rumor_bits += add.rumor_bits;
      sum.control_bits += add.control_bits;
      sum.pull_deliveries += add.pull_deliveries;
      sum.duplicate_pull_deliveries += add.duplicate_pull_deliveries;
    }
    report.totals.trajectory.push_back(state.missing_any_count());
  }

  report.totals.rounds = state.round();
  report.totals.completed = state.all_good_know_all();
  for (size_t i = 0; i < report.per_rumor.size(); ++i) {
    RumorTally& tally = report.per_rumor[i];
    tally.known_by = state.known_count(static_cast<uint32_t>(i));
    report.totals.rumor_bits += tally.rumor_bits;
    report.totals.control_bits += tally.control_bits;
  }
  return report;
}

std::map<RumorId, RumorTally> per_rumor_bit_report(
    const MultiRumorTrialReport& report, const RumorSchedule& schedule) {
  if (report.per_rumor.size() != schedule.size())
    throw ConfigError("per_rumor_bit_report: report does not match schedule");
  std::map<RumorId, RumorTally> by_id;
  for (size_t i = 0; i < schedule.size(); ++i)
    by_id.emplace(schedule.rumors()[i].id, report.per_rumor[i]);
  return by_id;
}

}  // namespace rumor
