#include "rumor/sampling.hpp"

namespace rumor {
namespace {

// Virtual Fisher-Yates over [0, m) touching only the first `count` slots.
// Displaced entries live in a small flat list; count is the per-process
// fanout, so linear scans beat a hash map here.
struct SparseSwap {
  std::vector<std::pair<uint64_t, uint64_t>> moved;

  uint64_t get(uint64_t i) const {
    for (const auto& [idx, val] : moved)
      if (idx == i) return val;
    return i;
  }
  void set(uint64_t i, uint64_t v) {
    for (auto& [idx, val] : moved) {
      if (idx == i) {
        val = v;
        return;
      }
    }
    moved.emplace_back(i, v);
  }
};

}  // namespace

void sample_peers(RngStream& rng, uint32_t n, uint32_t fanout,
                  SamplingMode mode, uint32_t self,
                  std::vector<uint32_t>& out) {
  if (n < 2) throw ConfigError("sample_peers: n must be at least 2");
  if (self >= n) throw ConfigError("sample_peers: self out of range");
  if (fanout < 1) throw ConfigError("sample_peers: fanout must be at least 1");
  out.clear();

  if (mode == SamplingMode::kWithReplacement) {
    for (uint32_t k = 0; k < fanout; ++k)
      out.push_back(static_cast<uint32_t>(rng.next_below(n)));
    return;
  }

  // Without replacement, excluding self: sample from a domain of n-1 values
  // and shift picks at or above self up by one.
  if (fanout > n - 1)
    throw ConfigError("sample_peers: fanout must be <= n-1 without replacement");
  const uint64_t m = n - 1;
  if (fanout == 1) {  // hot path: single distinct peer
    auto v = static_cast<uint32_t>(rng.next_below(m));
    out.push_back(v >= self ? v + 1 : v);
    return;
  }
  SparseSwap perm;
  for (uint64_t i = 0; i < fanout; ++i) {
    const uint64_t j = i + rng.next_below(m - i);
    const uint64_t pick = perm.get(j);
    perm.set(j, perm.get(i));
    out.push_back(static_cast<uint32_t>(pick >= self ? pick + 1 : pick));
  }
}

std::vector<uint32_t> sample_peers(RngStream& rng, uint32_t n, uint32_t fanout,
                                   SamplingMode mode, uint32_t self) {
  std::vector<uint32_t> out;
  sample_peers(rng, n, fanout, mode, self, out);
  return out;
}

}  // namespace rumor
