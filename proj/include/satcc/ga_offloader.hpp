#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satcc/constellation.hpp"
#include "satcc/rng.hpp"
#include "satcc/splitter.hpp"

namespace satcc {

// A placement candidate: gene k names the satellite that runs segment k.
struct Chromosome {
  std::vector<SatId> genes;
  auto operator<=>(const Chromosome&) const = default;
};

// Search weights and budgets. Defaults follow the reference parameter set.
struct GaParams {
  double theta1 = 1.0;    // weight of the computation-time term
  double theta2 = 20.0;   // weight of the hop-weighted transfer term
  double theta3 = 1e6;    // penalty if the placement would be rejected
  int n_ini = 20;         // initial population size
  int n_iter = 10;        // iteration cap
  int n_k = 20;           // survivors kept after elimination
  int n_summ = 10;        // fresh random chromosomes added per iteration
  double epsilon = 1.0;   // early-stop threshold on best-deficit change
};

// Throws std::invalid_argument naming the offending field.
void validate(const GaParams& params);

// Read-only snapshot of per-satellite queue headroom at decision time.
struct CapacityView {
  const Constellation* con = nullptr;
  std::span<const std::int64_t> queued;  // indexed by flat satellite id

  std::int64_t headroom_flat(int flat) const {
    return con->max_workload_of(flat) - queued[flat];
  }
  std::int64_t headroom(SatId sat) const { return headroom_flat(con->flat(sat)); }
};

// Placement cost:
//   theta1 * sum_k q_k / C(gene_k)
// + theta2 * sum_{k<last} q_k * hops(gene_k, gene_k+1)
// + theta3 * [placement would be rejected]
// The rejection flag walks the segments in order against the capacity
// snapshot, accumulating workload already claimed on repeated genes, and
// trips at the first segment whose satellite cannot take it (strictly:
// queued + claimed + q_k < bound must hold). Zero-workload (padding)
// segments contribute to no term. Genes must match the block's segment
// count and lie inside the grid.
double deficit(const Chromosome& ch, const SegmentedBlock& block,
               const CapacityView& capacity, const GaParams& params);

// Single-point gene-anchored recombination: for every index pair (i, j) with
// i <= j and a.genes[i] == b.genes[j] (1-based), emit
//   (b_1..b_j,       a_{i+1}..a_{i+L-j})
//   (b_{j-i+1}..b_{j-1}, a_i..a_L)
// Children are deduplicated among themselves, in generation order. No
// matching pair yields an empty result.
std::vector<Chromosome> crossover(const Chromosome& a, const Chromosome& b);

// Evolutionary search for the lowest-deficit placement of `block` over the
// candidate satellites `avail`. Deterministic for a given rng state. Returns
// the best chromosome ever observed; exact deficit ties are refined twice —
// infeasible ties prefer the placement whose first infeasible segment comes
// earliest (a doomed task should fail before committing work), feasible ties
// prefer the placement whose fullest destination queue ends up smallest
// (water-filling; equal deficits fix the hop sum, so this never trades
// delay for balance) — then keep the first one found.
Chromosome evolve(const SegmentedBlock& block, std::span<const SatId> avail,
                  const CapacityView& capacity, const GaParams& params,
                  Rng& rng);

// Chromosome-bearing paths cap the segment count (placement genes are kept
// in fixed-width storage); balanced_split itself has no such limit.
inline constexpr int kMaxChromosomeSegments = 8;

}  // namespace satcc
