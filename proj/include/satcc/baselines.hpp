#pragma once

#include <span>

#include "satcc/constellation.hpp"
#include "satcc/ga_offloader.hpp"
#include "satcc/rng.hpp"
#include "satcc/splitter.hpp"

namespace satcc {

// Blind placement: each gene drawn independently and uniformly from `avail`.
Chromosome random_offload(const SegmentedBlock& block,
                          std::span<const SatId> avail, Rng& rng);

// Residual-resource greedy: segment k goes to the candidate with the largest
// queue headroom after (hypothetically) committing segments 1..k-1 of this
// block; ties break toward the smallest (orbit, slot).
Chromosome rrp_offload(const SegmentedBlock& block,
                       std::span<const SatId> avail,
                       const CapacityView& capacity);

}  // namespace satcc
