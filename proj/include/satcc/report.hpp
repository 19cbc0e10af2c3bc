#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "satcc/simulator.hpp"

namespace satcc {

// CSV columns, in order:
//   seed,lambda,N,policy,completion_rate,r_D,total_t_comp,total_t_tran,
//   total_t_sum,objective,load_variance,stranded_workload
// N is the orbit count (sweeps use square grids, so it is the grid side).
// When any row ran with uplink or physical-link accounting enabled, the
// extra columns uplink_seconds and phys_tran_seconds are appended for all
// rows. Doubles are printed in shortest round-trip form, so equal runs
// produce byte-identical files and parsing the text back recovers the exact
// values. Rows are sorted by (lambda, N, policy, seed).
std::string reports_to_csv(std::span<const MetricsReport> reports);

// One mean/stddev row per (lambda, N, policy) group, aggregated over seeds;
// stddev is the population form. Columns:
//   lambda,N,policy,runs,<metric>_mean,<metric>_std for each of
//   completion_rate,r_D,total_t_comp,total_t_tran,total_t_sum,objective,
//   load_variance,stranded_workload
std::string aggregate_csv(std::span<const MetricsReport> reports);

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

// Runs base once per (seed, policy) pair. Arrival streams depend only on the
// seed, so the policies inside one seed face identical workloads.
std::vector<MetricsReport> run_matrix(const SimConfig& base,
                                      std::span<const std::uint64_t> seeds,
                                      std::span<const Policy> policies,
                                      int parallel = 1);

enum class SweepKind { Lambda, Grid };

struct SweepSpec {
  SweepKind kind = SweepKind::Lambda;
  std::vector<double> values;  // arrival rates, or square-grid side lengths
  std::vector<std::uint64_t> seeds;
  std::vector<Policy> policies;
  int parallel = 1;
};

// Full factorial values x seeds x policies. Grid sweeps set both grid axes
// to the value (which must be a positive integer). Results come back in
// deterministic order regardless of parallelism.
std::vector<MetricsReport> run_sweep(const SimConfig& base,
                                     const SweepSpec& spec);

// Smallest queue bound (workload units) whose mean drop rate over the given
// seeds stays at or below target. Searches by bisection between the largest
// segment of the scenario's block template (below which nothing fits) and a
// doubling upper probe; assumes drop rate is non-increasing in the bound,
// which holds when queues drain fully each slot. Throws std::runtime_error
// if even an unbounded queue misses the target.
std::int64_t calibrate_max_workload(const SimConfig& base,
                                    double target_drop_rate,
                                    std::span<const std::uint64_t> seeds,
                                    int parallel = 1);

}  // namespace satcc
