#include "satcc/splitter.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace satcc {

std::int64_t SegmentedBlock::total() const {
  return std::accumulate(segment_workloads.begin(), segment_workloads.end(),
                         std::int64_t{0});
}

int SegmentedBlock::nonempty_segments() const {
  int n = 0;
  for (auto w : segment_workloads)
    if (w > 0) ++n;
  return n;
}

namespace {

// Number of greedy blocks at the given cap, without materializing them.
std::size_t count_blocks(std::span<const std::int64_t> w, std::int64_t limit) {
  std::size_t blocks = 1;  // callers guarantee w is non-empty
  std::int64_t acc = 0;
  for (auto x : w) {
    if (acc > 0 && acc + x > limit) {
      ++blocks;
      acc = 0;
    }
    acc += x;
  }
  return blocks;
}

void check_workloads(std::span<const std::int64_t> w, const char* who) {
  if (w.empty())
    throw std::invalid_argument(std::string(who) + ": empty workload list");
  for (auto x : w)
    if (x <= 0)
      throw std::invalid_argument(std::string(who) +
                                  ": workloads must be positive");
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> split_fixed_limit(
    std::span<const std::int64_t> workloads, std::int64_t limit) {
  check_workloads(workloads, "split_fixed_limit");
  const std::int64_t maxw = *std::max_element(workloads.begin(), workloads.end());
  if (limit < maxw)
    throw std::invalid_argument(
        "split_fixed_limit: limit below the largest single workload");

  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t begin = 0;
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    if (acc > 0 && acc + workloads[i] > limit) {
      blocks.emplace_back(begin, i);
      begin = i;
      acc = 0;
    }
    acc += workloads[i];
  }
  blocks.emplace_back(begin, workloads.size());
  return blocks;
}

SegmentedBlock balanced_split(std::span<const std::int64_t> workloads,
                              int segments, std::int64_t epsilon) {
  check_workloads(workloads, "balanced_split");
  if (segments < 1)
    throw std::invalid_argument("balanced_split: segments must be >= 1");
  if (static_cast<std::size_t>(segments) > workloads.size())
    throw std::invalid_argument(
        "balanced_split: more segments than layers (need segments <= layer count)");
  if (epsilon < 1)
    throw std::invalid_argument("balanced_split: epsilon must be >= 1");

  const std::size_t want = static_cast<std::size_t>(segments);
  std::int64_t lower = *std::max_element(workloads.begin(), workloads.end());
  std::int64_t upper = std::accumulate(workloads.begin(), workloads.end(),
                                       std::int64_t{0});
  // Invariant: upper is always feasible; lower is either the initial bound
  // (possibly feasible) or a probed infeasible cap.
  while (upper - lower > epsilon) {
    const std::int64_t mid = lower + (upper - lower) / 2;
    if (count_blocks(workloads, mid) > want)
      lower = mid;
    else
      upper = mid;
  }
  // The loop never probes the initial lower bound itself; if it is feasible
  // it is the optimum (no cap below max(w) exists).
  const std::int64_t cap =
      count_blocks(workloads, lower) <= want ? lower : upper;

  SegmentedBlock out;
  out.segment_ranges = split_fixed_limit(workloads, cap);
  for (auto [b, e] : out.segment_ranges)
    out.segment_workloads.push_back(std::accumulate(
        workloads.begin() + b, workloads.begin() + e, std::int64_t{0}));
  while (out.segment_ranges.size() < want) {
    out.segment_ranges.emplace_back(workloads.size(), workloads.size());
    out.segment_workloads.push_back(0);
  }
  return out;
}

SegmentedBlock balanced_split(const LayerProfile& profile, int segments,
                              std::int64_t epsilon) {
  return balanced_split(std::span<const std::int64_t>(profile.layer_workloads),
                        segments, epsilon);
}

std::int64_t oracle_minmax_split(std::span<const std::int64_t> workloads,
                                 int segments) {
  check_workloads(workloads, "oracle_minmax_split");
  if (segments < 1)
    throw std::invalid_argument("oracle_minmax_split: segments must be >= 1");
  const std::size_t n = workloads.size();
  std::vector<std::int64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + workloads[i];

  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  // best[i] = min-max over the first i items with the current group budget.
  std::vector<std::int64_t> best(n + 1, inf), next(n + 1, inf);
  for (std::size_t i = 1; i <= n; ++i) best[i] = prefix[i];  // one group
  const int rounds = std::min<int>(segments, static_cast<int>(n));
  for (int g = 2; g <= rounds; ++g) {
    next.assign(n + 1, inf);
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t t = 1; t < i; ++t) {
        if (best[t] == inf) continue;
        const std::int64_t cand = std::max(best[t], prefix[i] - prefix[t]);
        next[i] = std::min(next[i], cand);
      }
      // "at most g groups": using fewer is allowed
      next[i] = std::min(next[i], best[i]);
    }
    best.swap(next);
  }
  return best[n];
}

}  // namespace satcc
