#pragma once

#include <cstdint>
#include <vector>

#include "rumor/config.hpp"
#include "rumor/rng.hpp"

namespace rumor {

// Draw the peers one process contacts this round.
//
// with-replacement: fanout independent uniform picks from [0, n); the sampler
// itself and repeats are allowed (they burn a slot, see the round engines).
// without-replacement-excluding-self: fanout distinct uniform picks from
// [0, n) \ {self}; requires fanout <= n-1.
//
// `out` is overwritten, not appended to, so round engines can reuse one
// buffer across processes.
void sample_peers(RngStream& rng, uint32_t n, uint32_t fanout,
                  SamplingMode mode, uint32_t self,
                  std::vector<uint32_t>& out);

std::vector<uint32_t> sample_peers(RngStream& rng, uint32_t n, uint32_t fanout,
                                   SamplingMode mode, uint32_t self);

}  // namespace rumor
