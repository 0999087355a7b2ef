#include "rumor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rumor {
namespace {

DistStats dist_stats(std::vector<uint64_t> values) {
  DistStats s;
  double sum = 0.0;
  for (uint64_t v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  s.median = static_cast<double>(values[(values.size() - 1) / 2]);
  const size_t rank = static_cast<size_t>(
      std::ceil(0.99 * static_cast<double>(values.size())));
  s.p99 = static_cast<double>(values[rank - 1]);
  s.max = values.back();
  return s;
}

}  // namespace

double median_lower(std::vector<uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  return static_cast<double>(values[(values.size() - 1) / 2]);
}

double percentile_nearest_rank(std::vector<uint64_t> values, double percent) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (percent <= 0.0 || percent > 100.0)
    throw std::invalid_argument("percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<size_t>(
      std::ceil(percent / 100.0 * static_cast<double>(values.size())));
  if (rank == 0) rank = 1;
  return static_cast<double>(values[rank - 1]);
}

AggregateReport aggregate(const std::vector<TrialReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("aggregate: empty trial set");

  AggregateReport agg;
  agg.trials = reports.size();

  std::vector<uint64_t> rounds, messages;
  rounds.reserve(reports.size());
  messages.reserve(reports.size());
  uint64_t completed = 0;
  double bits_sum = 0.0;
  size_t longest = 0;
  for (const TrialReport& r : reports) {
    rounds.push_back(r.rounds);
    messages.push_back(r.rumor_messages);
    if (r.completed) ++completed;
    bits_sum += static_cast<double>(r.rumor_bits) +
                static_cast<double>(r.control_bits);
    longest = std::max(longest, r.trajectory.size());
  }
  agg.success_rate =
      static_cast<double>(completed) / static_cast<double>(reports.size());
  agg.rounds = dist_stats(std::move(rounds));
  agg.messages = dist_stats(std::move(messages));
  agg.bits_mean = bits_sum / static_cast<double>(reports.size());

  // Column-wise trajectory stats, padding finished trials with their final
  // uninformed count.
  std::vector<uint64_t> column(reports.size());
  for (size_t round = 0; round < longest; ++round) {
    for (size_t t = 0; t < reports.size(); ++t) {
      const auto& traj = reports[t].trajectory;
      column[t] = traj.empty()
                      ? 0
                      : traj[std::min(round, traj.size() - 1)];
    }
    double sum = 0.0;
    for (uint64_t v : column) sum += static_cast<double>(v);
    agg.u_mean.push_back(sum / static_cast<double>(column.size()));
    agg.u_p10.push_back(percentile_nearest_rank(column, 10.0));
    agg.u_p90.push_back(percentile_nearest_rank(column, 90.0));
  }
  return agg;
}

int64_t overhead(const TrialReport& report, uint32_t n) {
  if (!report.completed)
    throw std::invalid_argument("overhead: requires a completed trial");
  return static_cast<int64_t>(report.rumor_messages) -
         (static_cast<int64_t>(n) - 1);
}

}  // namespace rumor
