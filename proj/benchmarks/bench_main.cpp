#include <benchmark/benchmark.h>

#include "rumor/network_state.hpp"
#include "rumor/protocols.hpp"
#include "rumor/sampling.hpp"

namespace {

using namespace rumor;

void BM_SamplePeersWR(benchmark::State& state) {
  const uint32_t n = 1 << 16;
  const uint32_t fanout = static_cast<uint32_t>(state.range(0));
  RngStream rng(42);
  std::vector<uint32_t> out;
  for (auto _ : state) {
    sample_peers(rng, n, fanout, SamplingMode::kWithReplacement, 7, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SamplePeersWR)->Arg(1)->Arg(4)->Arg(64);

void BM_SamplePeersWOR(benchmark::State& state) {
  const uint32_t n = 1 << 16;
  const uint32_t fanout = static_cast<uint32_t>(state.range(0));
  RngStream rng(42);
  std::vector<uint32_t> out;
  for (auto _ : state) {
    sample_peers(rng, n, fanout, SamplingMode::kWithoutReplacement, 7, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SamplePeersWOR)->Arg(1)->Arg(4)->Arg(64)->Arg(4096);

// one mid-spread round (half the network informed)
void round_bench(benchmark::State& state, Protocol protocol) {
  ProtocolConfig cfg;
  cfg.n = static_cast<uint32_t>(state.range(0));
  cfg.protocol = protocol;
  const FailurePlan plan;
  const TrialRng rng(1);
  for (auto _ : state) {
    state.PauseTiming();
    NetworkState net = init_state(cfg.n, 0);
    for (uint32_t pid = 1; pid < cfg.n / 2; ++pid) net.mark_informed(pid);
    state.ResumeTiming();
    RoundOutcome out;
    switch (protocol) {
      case Protocol::kRegularPull:
        out = pull_round(net, cfg, plan, rng);
        break;
      case Protocol::kRegularPush:
        out = push_round(net, cfg, plan, rng);
        break;
      default:
        out = polite_pushpull_round(net, cfg, plan, rng);
        break;
    }
    benchmark::DoNotOptimize(out);
  }
}

void BM_PullRound(benchmark::State& state) {
  round_bench(state, Protocol::kRegularPull);
}
void BM_PushRound(benchmark::State& state) {
  round_bench(state, Protocol::kRegularPush);
}
void BM_PoliteRound(benchmark::State& state) {
  round_bench(state, Protocol::kPolitePushPull);
}
BENCHMARK(BM_PullRound)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_PushRound)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_PoliteRound)->Arg(1 << 12)->Arg(1 << 16);

void BM_FullTrialPull(benchmark::State& state) {
  ProtocolConfig cfg;
  cfg.n = static_cast<uint32_t>(state.range(0));
  cfg.protocol = Protocol::kRegularPull;
  const FailurePlan plan;
  uint64_t seed = 0;
  for (auto _ : state) {
    TrialReport report =
        run_trial(cfg, plan, StopRule::kUntilComplete, seed++);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_FullTrialPull)->Arg(1 << 10)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
