#pragma once

#include <cstdint>
#include <vector>

namespace rumor {

// Per-trial result.  rumor_messages counts every rumor-bearing transmission
// that was sent, including duplicates, drops and deliveries to processes that
// already held the rumor.  trajectory[r] is the number of uninformed
// processes at the start of round r (crashed processes included).
struct TrialReport {
  bool completed = false;  // every non-failed process informed at the end
  uint32_t rounds = 0;
  uint64_t rumor_messages = 0;
  uint64_t requests_sent = 0;  // pull requests (free control traffic)
  uint64_t rumor_bits = 0;
  uint64_t control_bits = 0;
  std::vector<uint64_t> trajectory;
  uint64_t seed = 0;

  bool operator==(const TrialReport&) const = default;
};

struct DistStats {
  double mean = 0.0;
  double median = 0.0;  // lower-middle element for even-sized sets
  double p99 = 0.0;     // nearest-rank
  uint64_t max = 0;
};

struct AggregateReport {
  uint64_t trials = 0;
  double success_rate = 0.0;
  DistStats rounds;
  DistStats messages;
  double bits_mean = 0.0;  // mean of rumor_bits + control_bits
  // Per-round stats of the uninformed count across trials.  Trials that end
  // early are padded with their final value so every round has all trials.
  std::vector<double> u_mean, u_p10, u_p90;
};

// Lower-middle median: element at index (count-1)/2 of the sorted values.
double median_lower(std::vector<uint64_t> values);
// Nearest-rank percentile: element at 1-based rank ceil(p/100 * count).
double percentile_nearest_rank(std::vector<uint64_t> values, double percent);

// Order-independent: any permutation of `reports` aggregates identically.
// Throws std::invalid_argument on an empty set.
AggregateReport aggregate(const std::vector<TrialReport>& reports);

// Messages beyond the n-1 a completed dissemination needs at minimum.
// Requires a completed report.
int64_t overhead(const TrialReport& report, uint32_t n);

}  // namespace rumor
