#include <algorithm>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rumor/multirumor.hpp"
#include "rumor/protocols.hpp"

using namespace rumor;

namespace {

ProtocolConfig ptp_cfg(uint32_t n) {
  ProtocolConfig cfg;
  cfg.protocol = Protocol::kRegularPushThenPull;
  cfg.n = n;
  return cfg;
}

RumorSpec spec_of(uint32_t origin, uint32_t creation, uint32_t size_bits,
                  uint32_t push_len, uint32_t lifetime) {
  RumorSpec s;
  s.id = {origin, creation};
  s.size_bits = size_bits;
  s.push_phase_len = push_len;
  s.lifetime = lifetime;
  return s;
}

}  // namespace

TEST_SUITE("multirumor") {

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(1024) == 10);
  CHECK(ceil_log2(uint64_t{1} << 32) == 32);
  CHECK(ceil_log2((uint64_t{1} << 32) + 1) == 33);
  CHECK_THROWS_AS(ceil_log2(0), ConfigError);
}

TEST_CASE("header and message bit prices") {
  const RumorSpec spec = spec_of(0, 0, 8, 0, 16);
  CHECK(rumor_header_bits(spec, 4) == 6);    // 2 id bits + 4 age bits
  CHECK(rumor_message_bits(spec, 4) == 14);  // payload + header
}

TEST_CASE("make_rumor_spec fills phase defaults from the config") {
  auto cfg = ptp_cfg(10000);
  const RumorSpec spec = make_rumor_spec(cfg, 3, 5, 512);
  CHECK(spec.id.origin == 3);
  CHECK(spec.id.creation_round == 5);
  CHECK(spec.size_bits == 512);
  CHECK(spec.push_phase_len == 10);  // overhead-optimal switch at n=10^4
  CHECK(spec.lifetime == 137);       // push phase + padded pull budget
  CHECK(rumor_header_bits(spec, cfg.n) == 22);
  CHECK_THROWS_AS(make_rumor_spec(cfg, 10000, 0, 8), ConfigError);
  CHECK_THROWS_AS(make_rumor_spec(cfg, 0, 0, 0), ConfigError);
}

TEST_CASE("schedule validation and horizon") {
  CHECK(RumorSchedule{}.horizon() == 0);
  RumorSchedule sched({spec_of(0, 5, 8, 1, 7), spec_of(1, 0, 8, 0, 3)});
  CHECK(sched.horizon() == 12);
  CHECK(sched.size() == 2);
  CHECK_THROWS_AS(RumorSchedule({spec_of(0, 0, 8, 0, 2),
                                 spec_of(0, 0, 8, 0, 5)}),
                  ConfigError);  // duplicate id
  CHECK_THROWS_AS(RumorSchedule({spec_of(0, 0, 0, 0, 2)}), ConfigError);
  CHECK_THROWS_AS(RumorSchedule({spec_of(0, 0, 8, 0, 0)}), ConfigError);
  CHECK_THROWS_AS(RumorSchedule({spec_of(0, 0, 8, 3, 2)}), ConfigError);
}

TEST_CASE("schedule parser") {
  auto cfg = ptp_cfg(4);
  std::istringstream in("0 0 256\n"
                        "# staggered second rumor\n"
                        "1 2 128\n");
  const RumorSchedule sched = parse_rumor_schedule(in, "s", cfg);
  REQUIRE(sched.size() == 2);
  CHECK(sched.rumors()[0].id == RumorId{0, 0});
  CHECK(sched.rumors()[1].id == RumorId{1, 2});
  CHECK(sched.rumors()[1].size_bits == 128);
  CHECK(sched.rumors()[1].push_phase_len == 1);  // switch round at n=4
  CHECK(sched.rumors()[1].lifetime == 37);       // 1 + padded pull budget

  std::istringstream missing("0 0\n");
  CHECK_THROWS_AS(parse_rumor_schedule(missing, "m", cfg), ConfigError);
  std::istringstream trailing("0 0 8 9\n");
  CHECK_THROWS_AS(parse_rumor_schedule(trailing, "t", cfg), ConfigError);
  std::istringstream badorigin("5 0 8\n");
  CHECK_THROWS_AS(parse_rumor_schedule(badorigin, "o", cfg), ConfigError);
  std::istringstream badsize("0 0 0\n");
  CHECK_THROWS_AS(parse_rumor_schedule(badsize, "z", cfg), ConfigError);
}

TEST_CASE("state bookkeeping") {
  MultiRumorState st(3, 2);
  CHECK(st.n() == 3);
  CHECK(st.rumor_count() == 2);
  CHECK_FALSE(st.knows(0, 0));
  CHECK(st.learned_round(0, 0) == MultiRumorState::kUnknown);
  CHECK(st.missing_any_count() == 3);
  CHECK_FALSE(st.all_good_know_all());
  CHECK(st.known_count(0) == 0);
  CHECK_THROWS_AS(MultiRumorState(1, 1), ConfigError);
}

TEST_CASE("round rejects mismatched state and schedule") {
  auto cfg = ptp_cfg(4);
  RumorSchedule sched({spec_of(0, 0, 8, 0, 2)});
  MultiRumorState wrong_n(5, 1);
  CHECK_THROWS_AS(multirumor_round(wrong_n, sched, cfg, {}, TrialRng(0)),
                  ConfigError);
  MultiRumorState wrong_r(4, 2);
  CHECK_THROWS_AS(multirumor_round(wrong_r, sched, cfg, {}, TrialRng(0)),
                  ConfigError);
}

TEST_CASE("empty schedule completes in zero rounds") {
  const auto rep = run_multirumor_trial(ptp_cfg(4), RumorSchedule{}, {},
                                        StopRule::kUntilComplete, 1);
  CHECK(rep.totals.completed);
  CHECK(rep.totals.rounds == 0);
  CHECK(rep.totals.rumor_messages == 0);
}

TEST_CASE("two push-phase rumors at n=2: exact hand tally") {
  auto cfg = ptp_cfg(2);
  RumorSchedule sched({spec_of(0, 0, 4, 1, 2), spec_of(1, 0, 4, 1, 2)});
  for (uint64_t seed : {0ull, 7ull}) {
    const auto rep =
        run_multirumor_trial(cfg, sched, {}, StopRule::kUntilComplete, seed);
    CHECK(rep.totals.completed);
    CHECK(rep.totals.rounds == 1);
    CHECK(rep.totals.rumor_messages == 2);
    CHECK(rep.totals.requests_sent == 0);  // nothing was in pull phase
    CHECK(rep.totals.trajectory == std::vector<uint64_t>{2, 0});
    for (const RumorTally& t : rep.per_rumor) {
      CHECK(t.messages == 1);
      CHECK(t.rumor_bits == 6);  // 4 payload + 1 id + 1 age
      CHECK(t.control_bits == 0);
      CHECK(t.pull_deliveries == 0);
      CHECK(t.known_by == 2);
    }
    CHECK(rep.totals.rumor_bits == 12);
    CHECK(rep.totals.control_bits == 0);
  }
}

TEST_CASE("two pull-phase rumors at n=2: exact hand tally with control bits") {
  auto cfg = ptp_cfg(2);
  RumorSchedule sched({spec_of(0, 0, 4, 0, 2), spec_of(1, 0, 4, 0, 2)});
  const auto rep =
      run_multirumor_trial(cfg, sched, {}, StopRule::kUntilComplete, 3);
  CHECK(rep.totals.completed);
  CHECK(rep.totals.rounds == 1);
  CHECK(rep.totals.requests_sent == 2);
  for (const RumorTally& t : rep.per_rumor) {
    CHECK(t.messages == 1);
    CHECK(t.rumor_bits == 6);
    // the origin lists its own rumor on its one successful request
    CHECK(t.control_bits == 2);
    CHECK(t.pull_deliveries == 1);
    CHECK(t.duplicate_pull_deliveries == 0);
    CHECK(t.known_by == 2);
  }
  const auto by_id = per_rumor_bit_report(rep, sched);
  CHECK(by_id.at(RumorId{1, 0}).total_bits() == 8);  // 6 rumor + 2 control
}

TEST_CASE("duplicate pull replies are counted, not relearned") {
  // n=3, f_in=2: after the push round informs one peer, the last process
  // pulls from both knowers and receives the same rumor twice
  auto cfg = ptp_cfg(3);
  cfg.f_in = 2;
  RumorSchedule sched({spec_of(0, 0, 4, 1, 4)});
  for (uint64_t seed : {0ull, 1ull, 2ull}) {
    const auto rep =
        run_multirumor_trial(cfg, sched, {}, StopRule::kUntilComplete, seed);
    CHECK(rep.totals.completed);
    CHECK(rep.totals.rounds == 2);
    CHECK(rep.per_rumor[0].messages == 3);  // 1 push + 2 replies
    CHECK(rep.per_rumor[0].pull_deliveries == 2);
    CHECK(rep.per_rumor[0].duplicate_pull_deliveries == 1);
    CHECK(rep.per_rumor[0].known_by == 3);
    CHECK(rep.totals.requests_sent == 2);  // one requester, f_in = 2
  }
}

TEST_CASE("retired rumors are never transmitted again") {
  // A is push-only with lifetime 1: exactly one peer ever learns it.  B
  // keeps the pull machinery running for two more rounds; if retirement
  // leaked, the process missing A would fetch it then.
  auto cfg = ptp_cfg(3);
  cfg.f_in = 2;
  RumorSchedule sched({spec_of(0, 0, 4, 1, 1), spec_of(1, 0, 4, 0, 3)});
  for (uint64_t seed : {0ull, 5ull}) {
    const auto rep =
        run_multirumor_trial(cfg, sched, {}, StopRule::kFixedBudget, seed);
    CHECK(rep.totals.rounds == 3);  // fixed budget = horizon
    CHECK_FALSE(rep.totals.completed);
    CHECK(rep.per_rumor[0].known_by == 2);   // A: origin + one push target
    CHECK(rep.per_rumor[0].messages == 1);   // one push, then silence
    CHECK(rep.per_rumor[1].known_by == 3);   // B spread by pull in round 0
    CHECK(rep.per_rumor[1].messages == 2);
    // A's origin lists it on both targets of its one request round
    CHECK(rep.per_rumor[0].control_bits == 4);  // 2 calls x 2 header bits
    CHECK(rep.per_rumor[1].control_bits == 0);
    CHECK(rep.totals.requests_sent == 4);  // two requesters in round 0 only
    CHECK(rep.totals.trajectory == std::vector<uint64_t>{3, 1, 1, 1});
  }
}

TEST_CASE("a crashed origin never seeds its rumor") {
  auto cfg = ptp_cfg(3);
  RumorSchedule sched({spec_of(0, 0, 4, 0, 2)});
  FailurePlan plan = make_adversarial_plan(
      3, 0.4, 2, CrashMode::kExplicitSchedule, RngStream(0), {{0, 0}});
  const auto rep =
      run_multirumor_trial(cfg, sched, plan, StopRule::kUntilComplete, 9);
  CHECK_FALSE(rep.totals.completed);
  CHECK(rep.totals.rounds == 2);  // ran to the horizon, nothing to find
  CHECK(rep.per_rumor[0].known_by == 0);
  CHECK(rep.per_rumor[0].messages == 0);
  CHECK(rep.totals.requests_sent == 4);  // both survivors pull both rounds
  CHECK(rep.totals.trajectory == std::vector<uint64_t>{3, 3, 3});
}

TEST_CASE("a crash after seeding leaves survivors to spread the rumor") {
  auto cfg = ptp_cfg(3);
  RumorSchedule sched({spec_of(0, 0, 4, 0, 6)});
  FailurePlan plan = make_adversarial_plan(
      3, 0.4, 1, CrashMode::kExplicitSchedule, RngStream(0), {{0, 1}});
  bool fast = false, slow = false;
  for (uint64_t seed = 0; seed < 50 && !(fast && slow); ++seed) {
    const auto rep =
        run_multirumor_trial(cfg, sched, plan, StopRule::kUntilComplete, seed);
    if (rep.totals.completed && rep.totals.rounds == 2) fast = true;
    if (rep.totals.rounds >= 3) slow = true;  // pulled the crashed origin
  }
  CHECK(fast);
  CHECK(slow);
}

TEST_CASE("one-rumor schedule replays the single-rumor engine draw for draw") {
  auto cfg = ptp_cfg(64);
  cfg.rumor_size_bits = 256;
  const RumorSpec spec = make_rumor_spec(cfg, 0, 0, cfg.rumor_size_bits);
  CHECK(spec.push_phase_len == effective_switch_round(cfg));
  CHECK(spec.lifetime == effective_round_budget(cfg));
  const RumorSchedule sched({spec});

  FailurePlan clean;
  FailurePlan flaky;
  flaky.delta = 0.15;
  flaky.gamma = 0.1;
  for (const FailurePlan* plan : {&clean, &flaky}) {
    for (uint64_t seed : {11ull, 12ull, 13ull}) {
      const auto multi =
          run_multirumor_trial(cfg, sched, *plan, StopRule::kUntilComplete,
                               seed);
      const auto single =
          run_trial(cfg, *plan, StopRule::kUntilComplete, seed);
      CHECK(multi.totals.completed == single.completed);
      CHECK(multi.totals.rounds == single.rounds);
      CHECK(multi.totals.rumor_messages == single.rumor_messages);
      CHECK(multi.totals.requests_sent == single.requests_sent);
      // trajectories agree except at index 0, where the multi-rumor state
      // has not seeded the origin yet (n missing vs n-1 uninformed)
      REQUIRE(multi.totals.trajectory.size() == single.trajectory.size());
      CHECK(multi.totals.trajectory[0] == 64);
      CHECK(single.trajectory[0] == 63);
      for (size_t i = 1; i < single.trajectory.size(); ++i)
        CHECK(multi.totals.trajectory[i] == single.trajectory[i]);
    }
  }
}

TEST_CASE("learned rounds are recorded at commit time") {
  auto cfg = ptp_cfg(3);
  cfg.f_in = 2;
  RumorSchedule sched({spec_of(0, 0, 4, 1, 4)});
  MultiRumorState st(3, 1);
  const TrialRng rng(1);
  (void)multirumor_round(st, sched, cfg, {}, rng);  // push informs one peer
  (void)multirumor_round(st, sched, cfg, {}, rng);  // pull informs the other
  CHECK(st.learned_round(0, 0) == 0);  // the origin seeded at creation
  const uint32_t a = st.learned_round(1, 0), b = st.learned_round(2, 0);
  CHECK(std::min(a, b) == 0);
  CHECK(std::max(a, b) == 1);
  CHECK(st.all_good_know_all());
  CHECK(st.round() == 2);
}

}  // TEST_SUITE
