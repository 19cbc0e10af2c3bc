#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "satcc/baselines.hpp"
#include "satcc/constellation.hpp"
#include "satcc/rng.hpp"
#include "satcc/splitter.hpp"

using namespace satcc;

namespace {

// A block with exactly these segment workloads, one synthetic layer each
// (balanced_split would re-balance them, which is not what these fixtures
// want).
SegmentedBlock block_of(std::vector<std::int64_t> w) {
  SegmentedBlock b;
  b.task_id = 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    b.segment_ranges.push_back({i, i + 1});
  b.segment_workloads = std::move(w);
  return b;
}

}  // namespace

TEST_CASE("random placement: every gene uniform over the candidate set") {
  Constellation con(3, 3, 1.0, 1000);
  auto avail = con.decision_space({1, 1}, 1);
  REQUIRE(avail.size() == 5);
  SegmentedBlock b = block_of({10, 20, 30});

  Rng rng(42);
  const int trials = 100'000;
  std::map<SatId, int> counts[3];
  for (int t = 0; t < trials; ++t) {
    Chromosome ch = random_offload(b, avail, rng);
    REQUIRE(ch.genes.size() == 3);
    for (int k = 0; k < 3; ++k) {
      bool member = false;
      for (SatId s : avail) member |= (s == ch.genes[k]);
      REQUIRE(member);
      counts[k][ch.genes[k]]++;
    }
  }
  // Binomial(1e5, 1/5): mean 20000, sigma ~126.5. The run is seeded and
  // deterministic, so a 3-sigma window cannot flake.
  const double mean = trials / 5.0, sigma = std::sqrt(trials * 0.2 * 0.8);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(counts[k].size() == 5);
    for (auto& [sat, c] : counts[k])
      CHECK_MESSAGE(std::abs(c - mean) <= 3 * sigma,
                    "gene " << k << " sat (" << sat.orbit << "," << sat.slot
                            << ") count " << c);
  }
}

TEST_CASE("random placement with a single candidate is that candidate") {
  Constellation con(1, 1, 1.0, 100);
  std::vector<SatId> avail{{0, 0}};
  SegmentedBlock b = block_of({5, 5});
  Rng rng(7);
  Chromosome ch = random_offload(b, avail, rng);
  CHECK(ch.genes == std::vector<SatId>{{0, 0}, {0, 0}});
}

TEST_CASE("greedy baseline: largest headroom wins, claims carry forward") {
  // Two satellites, bound 10: A starts with 6 queued (headroom 4), B empty
  // (headroom 10).
  Constellation con(1, 2, 1.0, 10);
  const SatId A{0, 0}, B{0, 1};
  std::vector<std::int64_t> queued{6, 0};
  CapacityView cap{&con, queued};
  std::vector<SatId> avail{A, B};

  // Segment 8 takes B (headroom 10 vs 4); B then hypothetically drops to 2,
  // so the trailing 1 goes to A.
  Chromosome ch = rrp_offload(block_of({8, 1}), avail, cap);
  CHECK(ch.genes == std::vector<SatId>{B, A});

  // Reversed headrooms: A 10, B 4. Segment 3 -> A (10 -> 7); next 3 -> A
  // again (7 vs 4).
  queued = {0, 6};
  Chromosome ch2 = rrp_offload(block_of({3, 3}), avail, cap);
  CHECK(ch2.genes == std::vector<SatId>{A, A});

  // Third segment of equal size finally overflows to B (4 vs 4 after A is
  // down to 4: tie breaks toward the smaller id, which is A; after that B).
  Chromosome ch3 = rrp_offload(block_of({3, 3, 3}), avail, cap);
  CHECK(ch3.genes == std::vector<SatId>{A, A, A});
}

TEST_CASE("greedy baseline: ties break toward the smallest (orbit, slot)") {
  Constellation con(2, 2, 1.0, 100);
  std::vector<std::int64_t> queued{0, 0, 0, 0};
  CapacityView cap{&con, queued};
  std::vector<SatId> avail{{1, 1}, {0, 1}, {1, 0}, {0, 0}};
  Chromosome ch = rrp_offload(block_of({5}), avail, cap);
  CHECK(ch.genes == std::vector<SatId>{{0, 0}});

  // Partial tie: (0,0) loaded, the rest equal.
  queued = {3, 0, 0, 0};
  Chromosome ch2 = rrp_offload(block_of({5}), avail, cap);
  CHECK(ch2.genes == std::vector<SatId>{{0, 1}});
}

TEST_CASE("greedy baseline never rejects: it places even hopeless segments") {
  Constellation con(1, 2, 1.0, 10);
  std::vector<std::int64_t> queued{9, 8};
  CapacityView cap{&con, queued};
  std::vector<SatId> avail{{0, 0}, {0, 1}};
  // Workload 50 fits nowhere; the policy still names the max-headroom sat
  // (the commit walk downstream is what drops the task).
  Chromosome ch = rrp_offload(block_of({50, 50}), avail, cap);
  CHECK(ch.genes[0] == SatId{0, 1});  // headroom 2 vs 1
  CHECK(ch.genes.size() == 2);
}

TEST_CASE("greedy baseline is deterministic, random baseline seed-stable") {
  Constellation con(4, 4, 1.0, 500);
  std::vector<std::int64_t> queued(16, 0);
  for (int i = 0; i < 16; ++i) queued[i] = (i * 37) % 200;
  CapacityView cap{&con, queued};
  auto avail = con.decision_space({2, 2}, 2);
  SegmentedBlock b = block_of({40, 40, 40, 40});

  Chromosome g1 = rrp_offload(b, avail, cap);
  Chromosome g2 = rrp_offload(b, avail, cap);
  CHECK(g1 == g2);

  Rng r1(99), r2(99), r3(100);
  Chromosome a1 = random_offload(b, avail, r1);
  Chromosome a2 = random_offload(b, avail, r2);
  CHECK(a1 == a2);
  // A different seed diverges somewhere over a few draws.
  bool any_diff = false;
  Rng r1b(99);
  for (int i = 0; i < 20; ++i)
    any_diff |= !(random_offload(b, avail, r1b) == random_offload(b, avail, r3));
  CHECK(any_diff);
}
