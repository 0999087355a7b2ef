#pragma once

#include <cstdint>

// Counter-based deterministic randomness.
//
// Every draw is a SplitMix64 output: mix64(key + i * golden) for i = 1,2,...
// Substreams re-key through the same mixer, so a stream labelled by
// (trial, round, process, purpose) is independent of every other label and
// can be recreated from scratch without replaying earlier draws.  That is
// what makes trials order-independent under a thread pool and lets two
// engines be compared draw-for-draw when they use the same labels.

namespace rumor {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

constexpr uint64_t mix64(uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

class RngStream {
 public:
  constexpr explicit RngStream(uint64_t key) noexcept : state_(key) {}

  // New independent stream for a sub-label.  Injective in (state, label):
  // kGolden is odd, so distinct labels map to distinct odd multiples.
  constexpr RngStream derive(uint64_t label) const noexcept {
    return RngStream(mix64(state_ + kGolden * (2 * label + 1)));
  }

  uint64_t next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // Unbiased draw from [0, bound) via Lemire's multiply-then-reject.
  uint64_t next_below(uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      const uint64_t cutoff = (0 - bound) % bound;  // 2^64 mod bound
      while (lo < cutoff) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform in [0, 1), 53 significant bits.  Exact integer -> double, so the
  // value is identical on every IEEE-754 platform.
  double next_unit() noexcept { return (next_u64() >> 11) * 0x1.0p-53; }

  // True with probability p.  p <= 0 never draws, so disabling a failure
  // knob costs nothing and perturbs no other stream.
  bool next_bernoulli(double p) noexcept {
    if (p <= 0.0) return false;
    return next_unit() < p;
  }

 private:
  uint64_t state_;
};

}  // namespace rumor
