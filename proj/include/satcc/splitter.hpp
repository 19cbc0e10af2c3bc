#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "satcc/dnn_profiles.hpp"

namespace satcc {

// A model partitioned into exactly `segments()` contiguous layer groups.
// Trailing groups may be empty (zero workload, empty range) when the packing
// needed fewer groups than requested; downstream code assigns those to the
// deciding satellite itself, where they cost nothing.
struct SegmentedBlock {
  std::int64_t task_id = -1;  // -1 = reusable template, not yet a task
  // Half-open layer index ranges, one per segment; empty segments have
  // first == last.
  std::vector<std::pair<std::size_t, std::size_t>> segment_ranges;
  std::vector<std::int64_t> segment_workloads;

  int segments() const { return static_cast<int>(segment_workloads.size()); }
  std::int64_t total() const;
  // Number of leading non-empty segments (empties are always trailing).
  int nonempty_segments() const;
};

// Greedy left-to-right packing: extend the current block while its sum stays
// within `limit`, else close it and start the next block with the current
// item (nothing is dropped). limit must be >= max(workloads).
// Returns half-open index ranges.
std::vector<std::pair<std::size_t, std::size_t>> split_fixed_limit(
    std::span<const std::int64_t> workloads, std::int64_t limit);

// Workload-balanced split into exactly `segments` contiguous groups: binary
// search on the per-group cap over [max w, sum w] with split_fixed_limit as
// the feasibility probe ("fits in <= segments groups"), then pad with empty
// groups. With epsilon == 1 (the default) on integer workloads the largest
// group equals the true min-max optimum; larger epsilon trades exactness for
// fewer probes. Requires 1 <= segments <= #layers and every workload > 0.
SegmentedBlock balanced_split(std::span<const std::int64_t> workloads,
                              int segments, std::int64_t epsilon = 1);
SegmentedBlock balanced_split(const LayerProfile& profile, int segments,
                              std::int64_t epsilon = 1);

// Reference answer for the smallest achievable maximum group workload over
// contiguous partitions into at most `segments` groups, by dynamic
// programming. Independent of balanced_split on purpose: it exists to check
// it (and is far too slow for the hot path).
std::int64_t oracle_minmax_split(std::span<const std::int64_t> workloads,
                                 int segments);

}  // namespace satcc
