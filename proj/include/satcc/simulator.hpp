#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satcc/channel_model.hpp"
#include "satcc/constellation.hpp"
#include "satcc/dnn_profiles.hpp"
#include "satcc/ga_offloader.hpp"
#include "satcc/rng.hpp"
#include "satcc/splitter.hpp"

namespace satcc {

enum class Policy { Scc, Random, Rrp };
Policy parse_policy(const std::string& name);  // "scc" | "random" | "rrp"
const char* policy_name(Policy p);

struct GridSpec {
  int n_orbits = 10;
  int sats_per_orbit = 10;
  bool wrap = true;
};

// Optional gateway-uplink delay accounting (off by default). When enabled,
// every arriving task is charged task_input_bits / uplink rate; the channel
// gain may jitter uniformly per slot within [gain_min, gain_max].
struct UplinkSpec {
  bool enabled = false;
  double task_input_bits = 8e6;
  GroundLinkParams link;
  double gain_min = 0.0;  // gain_max > gain_min switches jitter on
  double gain_max = 0.0;
};

// Optional physical inter-satellite transfer accounting (off by default).
// Each forwarded segment is charged hops * bits / link rate, with
// bits = segment_units * workload_unit_macs * bytes_per_mac * 8.
struct PhysIslSpec {
  bool enabled = false;
  double bytes_per_mac = 0.125;
  IslParams link;
};

struct SimConfig {
  GridSpec grid;
  double capacity_macs_per_s = 3e9;    // per-satellite compute rate
  std::int64_t max_workload_units = 0;  // queue bound M_w; required (> 0)
  std::int64_t workload_unit_macs = 1'000'000;  // MACs per workload unit
  double slot_seconds = 300.0;
  int num_slots = 10;
  double arrival_rate = 25.0;  // Poisson mean per satellite per slot
  std::string model = "ResNet101";     // builtin name, unless profile given
  LayerProfile profile;                // optional custom profile (raw MACs)
  int segments = 0;    // 0 = model default (VGG19: 3, ResNet101: 4)
  int max_hops = -1;   // candidate radius; -1 = model default (2 / 3)
  std::int64_t split_epsilon = 1;
  Policy policy = Policy::Scc;
  std::uint64_t seed = 1;
  GaParams ga;
  double alpha = 1.0;  // objective weight on drop rate
  double beta = 1.0;   // objective weight on total delay
  double tran_hop_coef = 1.0;  // scales the hop-weighted transfer term
  std::optional<double> max_drop_rate;     // flag-only bounds
  std::optional<double> max_total_delay;
  UplinkSpec uplink;
  PhysIslSpec phys;
  std::vector<std::pair<SatId, double>> capacity_overrides;          // MACs/s
  std::vector<std::pair<SatId, std::int64_t>> max_workload_overrides;  // units
};

// Mutable per-satellite accounting, indexed by flat satellite id. Delay
// accumulators are kept in exact integer workload units; seconds are derived
// only at reporting time, so recomputation from a task log matches
// bit-for-bit.
struct SimState {
  std::vector<std::int64_t> queued;
  std::vector<std::int64_t> comp_units;      // committed work per satellite
  std::vector<std::int64_t> tran_unit_hops;  // sum of hops * segment units
  std::vector<std::int64_t> assigned_units;  // includes stranded work
  std::int64_t stranded_units = 0;           // loaded by later-dropped tasks

  void init(int n_sats);
};

struct TaskRecord {
  std::int64_t task_id = 0;
  int slot = 0;
  SatId source;
  // 1-based index of the first rejected segment; segments()+1 = completed.
  int drop_point = 0;
  std::vector<SatId> genes;  // materialized placement (padding -> source)
};

struct MetricsReport {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  int n_orbits = 0, sats_per_orbit = 0;
  std::string policy;
  std::string model;
  std::uint64_t arrivals = 0, completed = 0, dropped = 0;
  double completion_rate = 1.0;
  double drop_rate = 0.0;
  double total_t_comp = 0.0;  // seconds
  double total_t_tran = 0.0;  // hop-weighted workload * tran_hop_coef
  double total_t_sum = 0.0;
  double objective = 0.0;     // alpha * drop_rate + beta * total_t_sum
  double load_variance = 0.0;  // population variance of assigned units
  std::int64_t stranded_units = 0;
  bool drop_bound_violated = false;
  bool delay_bound_violated = false;
  bool uplink_enabled = false;
  bool phys_enabled = false;
  double uplink_seconds = 0.0;     // 0 unless uplink accounting is enabled
  double phys_tran_seconds = 0.0;  // 0 unless physical ISL mode is enabled
  std::vector<std::int64_t> sat_comp_units, sat_tran_unit_hops,
      sat_assigned_units;
};

// Poisson sample via the product-of-uniforms method (exact for the lambda
// range used here; means up to a few hundred). lambda must be >= 0.
int draw_arrivals(double lambda, Rng& rng);

struct CommitResult {
  bool dropped = false;
  int drop_point = 0;  // see TaskRecord
  std::int64_t committed_units = 0;
};

// Walk the non-empty segments in order; segment k loads onto its gene iff
// queued + q_k stays strictly below the satellite's bound, else the task
// drops there and the walk stops. Already-loaded segments stay put (their
// work is stranded, which the caller records).
CommitResult commit_placement(const Chromosome& placement,
                              const SegmentedBlock& block, SimState& state,
                              const Constellation& con);

// Delay bookkeeping for one task: every loaded segment adds its units to its
// satellite's compute tally; every loaded segment with a following non-empty
// segment adds hops * units to its satellite's transfer tally (the send
// toward a segment that then drops still happened and is charged).
void account_delays(const Chromosome& placement, const SegmentedBlock& block,
                    int drop_point, SimState& state, const Constellation& con);

// End-of-slot compute drain: each queue shrinks by capacity * slot_seconds
// (floored at empty).
void drain(SimState& state, const Constellation& con, double slot_seconds);

MetricsReport run(const SimConfig& cfg);
MetricsReport run(const SimConfig& cfg, std::vector<TaskRecord>* log);

// The exact balanced segment template a config simulates with (scaled to
// workload units). Exposed so audits can recompute delays from a task log.
SegmentedBlock scenario_template(const SimConfig& cfg);

}  // namespace satcc
