#include "satcc/baselines.hpp"

#include <stdexcept>
#include <vector>

namespace satcc {

Chromosome random_offload(const SegmentedBlock& block,
                          std::span<const SatId> avail, Rng& rng) {
  if (avail.empty())
    throw std::invalid_argument("random_offload: empty candidate set");
  Chromosome ch;
  ch.genes.reserve(block.segments());
  for (int k = 0; k < block.segments(); ++k)
    ch.genes.push_back(avail[rng.next_below(avail.size())]);
  return ch;
}

Chromosome rrp_offload(const SegmentedBlock& block,
                       std::span<const SatId> avail,
                       const CapacityView& capacity) {
  if (avail.empty())
    throw std::invalid_argument("rrp_offload: empty candidate set");
  if (!capacity.con)
    throw std::invalid_argument("rrp_offload: missing grid");

  // Hypothetical headroom of each candidate as this block's segments commit.
  std::vector<std::int64_t> head(avail.size());
  for (std::size_t i = 0; i < avail.size(); ++i)
    head[i] = capacity.headroom(avail[i]);

  Chromosome ch;
  ch.genes.reserve(block.segments());
  for (int k = 0; k < block.segments(); ++k) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < avail.size(); ++i) {
      if (head[i] > head[pick] ||
          (head[i] == head[pick] && avail[i] < avail[pick]))
        pick = i;
    }
    head[pick] -= block.segment_workloads[k];
    ch.genes.push_back(avail[pick]);
  }
  return ch;
}

}  // namespace satcc
