#include "satcc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "satcc/baselines.hpp"
#include "satcc/errors.hpp"

namespace satcc {

Policy parse_policy(const std::string& name) {
  if (name == "scc") return Policy::Scc;
  if (name == "random") return Policy::Random;
  if (name == "rrp") return Policy::Rrp;
  throw ConfigError("unknown policy '" + name +
                    "' (expected scc, random, or rrp)");
}

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::Scc: return "scc";
    case Policy::Random: return "random";
    case Policy::Rrp: return "rrp";
  }
  return "?";
}

void SimState::init(int n_sats) {
  queued.assign(static_cast<std::size_t>(n_sats), 0);
  comp_units.assign(static_cast<std::size_t>(n_sats), 0);
  tran_unit_hops.assign(static_cast<std::size_t>(n_sats), 0);
  assigned_units.assign(static_cast<std::size_t>(n_sats), 0);
  stranded_units = 0;
}

int draw_arrivals(double lambda, Rng& rng) {
  if (lambda < 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("arrival rate must be finite and >= 0");
  const double target = std::exp(-lambda);
  int k = -1;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_unit();
  } while (p > target);
  return k;
}

CommitResult commit_placement(const Chromosome& placement,
                              const SegmentedBlock& block, SimState& state,
                              const Constellation& con) {
  const std::size_t n_seg = block.segments();
  if (placement.genes.size() != n_seg)
    throw std::invalid_argument("placement length does not match block");
  CommitResult res;
  res.drop_point = static_cast<int>(n_seg) + 1;
  for (std::size_t k = 0; k < n_seg; ++k) {
    const std::int64_t q = block.segment_workloads[k];
    if (q == 0) continue;  // padding segments carry no work
    const int flat = con.flat(placement.genes[k]);
    const std::int64_t bound = con.max_workload_of(flat);
    if (bound != Constellation::kUnbounded &&
        state.queued[flat] + q >= bound) {
      res.dropped = true;
      res.drop_point = static_cast<int>(k) + 1;
      state.stranded_units += res.committed_units;
      return res;
    }
    state.queued[flat] += q;
    state.assigned_units[flat] += q;
    res.committed_units += q;
    if (bound != Constellation::kUnbounded && state.queued[flat] >= bound)
      throw std::logic_error("internal: queue bound breached after commit");
  }
  return res;
}

void account_delays(const Chromosome& placement, const SegmentedBlock& block,
                    int drop_point, SimState& state,
                    const Constellation& con) {
  const std::size_t n_seg = block.segments();
  if (placement.genes.size() != n_seg)
    throw std::invalid_argument("placement length does not match block");
  const std::size_t nz = block.nonempty_segments();
  for (std::size_t k = 0; k < nz; ++k) {
    if (static_cast<int>(k) + 1 >= drop_point) break;  // not loaded
    const std::int64_t q = block.segment_workloads[k];
    const int flat = con.flat(placement.genes[k]);
    state.comp_units[flat] += q;
    if (k + 1 < nz) {
      const std::int64_t hops =
          con.manhattan(placement.genes[k], placement.genes[k + 1]);
      state.tran_unit_hops[flat] += hops * q;
    }
  }
}

void drain(SimState& state, const Constellation& con, double slot_seconds) {
  if (slot_seconds < 0.0 || !std::isfinite(slot_seconds))
    throw std::invalid_argument("slot length must be finite and >= 0");
  const int n = con.size();
  for (int flat = 0; flat < n; ++flat) {
    const auto work =
        static_cast<std::int64_t>(con.capacity_of(flat) * slot_seconds);
    state.queued[flat] -= std::min(state.queued[flat], work);
  }
}

namespace {

struct Scenario {
  Constellation con;
  LayerProfile profile;       // raw MACs
  SegmentedBlock block;       // scaled, padded to `segments`
  int segments = 0;
  int max_hops = 0;
};

int default_segments(const std::string& model) {
  if (model == "VGG19") return 3;
  if (model == "ResNet101") return 4;
  return 0;
}

int default_max_hops(const std::string& model) {
  if (model == "VGG19") return 2;
  if (model == "ResNet101") return 3;
  return -1;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

Scenario build_scenario(const SimConfig& cfg) {
  check(cfg.grid.n_orbits >= 1 && cfg.grid.sats_per_orbit >= 1,
        "grid dimensions must be at least 1x1");
  check(std::isfinite(cfg.capacity_macs_per_s) && cfg.capacity_macs_per_s > 0,
        "capacity_macs_per_s must be positive");
  check(cfg.workload_unit_macs >= 1, "workload_unit_macs must be >= 1");
  check(cfg.max_workload_units > 0,
        "max_workload_units is required and must be positive "
        "(use \"unbounded\" to disable the bound)");
  check(std::isfinite(cfg.slot_seconds) && cfg.slot_seconds > 0,
        "slot_seconds must be positive");
  check(cfg.num_slots >= 1, "num_slots must be >= 1");
  check(std::isfinite(cfg.arrival_rate) && cfg.arrival_rate >= 0,
        "arrival_rate must be >= 0");
  check(std::isfinite(cfg.alpha) && cfg.alpha >= 0 &&
            std::isfinite(cfg.beta) && cfg.beta >= 0,
        "objective weights must be >= 0");
  check(std::isfinite(cfg.tran_hop_coef) && cfg.tran_hop_coef >= 0,
        "tran_hop_coef must be >= 0");
  check(cfg.split_epsilon >= 1, "split_epsilon must be >= 1");

  LayerProfile profile = cfg.profile;
  const bool custom = !profile.layer_workloads.empty();
  if (!custom) {
    try {
      profile = builtin_profile(cfg.model);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  int segments = cfg.segments;
  if (segments == 0) {
    segments = custom ? 0 : default_segments(profile.model_name);
    check(segments > 0, "segments must be given for custom profiles");
  }
  check(segments >= 1, "segments must be >= 1");
  check(segments <= kMaxChromosomeSegments,
        "segments must be <= " + std::to_string(kMaxChromosomeSegments));
  check(static_cast<std::size_t>(segments) <= profile.size(),
        "segments exceeds the number of layers");

  int max_hops = cfg.max_hops;
  if (max_hops < 0) {
    max_hops = custom ? -1 : default_max_hops(profile.model_name);
    check(max_hops >= 0, "max_hops must be given for custom profiles");
  }

  if (cfg.policy == Policy::Scc) {
    try {
      validate(cfg.ga);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.uplink.enabled) {
    check(std::isfinite(cfg.uplink.task_input_bits) &&
              cfg.uplink.task_input_bits > 0,
          "uplink task_input_bits must be positive");
    check(cfg.uplink.gain_max >= cfg.uplink.gain_min &&
              cfg.uplink.gain_min >= 0,
          "uplink gain jitter range is invalid");
    try {
      ground_uplink_rate(cfg.uplink.link);  // validates the link parameters
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.phys.enabled) {
    check(std::isfinite(cfg.phys.bytes_per_mac) && cfg.phys.bytes_per_mac > 0,
          "phys bytes_per_mac must be positive");
    try {
      isl_rate(cfg.phys.link);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  const double cap_units = cfg.capacity_macs_per_s /
                           static_cast<double>(cfg.workload_unit_macs);
  Constellation con(cfg.grid.n_orbits, cfg.grid.sats_per_orbit, cap_units,
                    cfg.max_workload_units, cfg.grid.wrap);
  try {
    for (const auto& [sat, macs] : cfg.capacity_overrides)
      con.set_capacity_override(sat, macs / static_cast<double>(cfg.workload_unit_macs));
    for (const auto& [sat, units] : cfg.max_workload_overrides)
      con.set_max_workload_override(sat, units);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  LayerProfile scaled = scale_profile(profile, cfg.workload_unit_macs);
  SegmentedBlock block;
  try {
    block = balanced_split(scaled, segments, cfg.split_epsilon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  return Scenario{std::move(con), std::move(profile), std::move(block),
                  segments, max_hops};
}

}  // namespace

SegmentedBlock scenario_template(const SimConfig& cfg) {
  return build_scenario(cfg).block;
}

MetricsReport run(const SimConfig& cfg) { return run(cfg, nullptr); }

MetricsReport run(const SimConfig& cfg, std::vector<TaskRecord>* log) {
  Scenario sc = build_scenario(cfg);
  const Constellation& con = sc.con;
  const int n_sats = con.size();
  const std::size_t n_seg = sc.block.segments();
  const std::size_t nz = sc.block.nonempty_segments();

  SimState state;
  state.init(n_sats);

  // Same arrival stream no matter which policy consumes decision randomness.
  Rng arrivals_rng = Rng::stream(cfg.seed, 0);
  Rng policy_rng = Rng::stream(cfg.seed, 1);
  Rng channel_rng = Rng::stream(cfg.seed, 2);

  std::vector<std::vector<SatId>> spaces(
      static_cast<std::size_t>(n_sats));
  for (int flat = 0; flat < n_sats; ++flat)
    spaces[flat] = con.decision_space(con.unflat(flat), sc.max_hops);

  const double phys_rate =
      cfg.phys.enabled ? isl_rate(cfg.phys.link) : 0.0;
  const double bits_per_unit =
      cfg.phys.enabled ? static_cast<double>(cfg.workload_unit_macs) *
                             cfg.phys.bytes_per_mac * 8.0
                       : 0.0;

  MetricsReport rep;
  rep.seed = cfg.seed;
  rep.lambda = cfg.arrival_rate;
  rep.n_orbits = cfg.grid.n_orbits;
  rep.sats_per_orbit = cfg.grid.sats_per_orbit;
  rep.policy = policy_name(cfg.policy);
  rep.model = sc.profile.model_name;
  rep.uplink_enabled = cfg.uplink.enabled;
  rep.phys_enabled = cfg.phys.enabled;

  std::int64_t task_id = 0;
  Chromosome placement;
  for (int slot = 0; slot < cfg.num_slots; ++slot) {
    double uplink_rate = 0.0;
    if (cfg.uplink.enabled) {
      GroundLinkParams link = cfg.uplink.link;
      if (cfg.uplink.gain_max > cfg.uplink.gain_min)
        link.gain = cfg.uplink.gain_min +
                    (cfg.uplink.gain_max - cfg.uplink.gain_min) *
                        channel_rng.next_unit();
      uplink_rate = ground_uplink_rate(link);
    }
    for (int flat = 0; flat < n_sats; ++flat) {
      const SatId source = con.unflat(flat);
      const int count = draw_arrivals(cfg.arrival_rate, arrivals_rng);
      for (int t = 0; t < count; ++t) {
        ++rep.arrivals;
        sc.block.task_id = task_id;
        switch (cfg.policy) {
          case Policy::Scc:
            placement = evolve(sc.block, spaces[flat],
                               CapacityView{&con, state.queued}, cfg.ga,
                               policy_rng);
            break;
          case Policy::Random:
            placement = random_offload(sc.block, spaces[flat], policy_rng);
            break;
          case Policy::Rrp:
            placement = rrp_offload(sc.block, spaces[flat],
                                    CapacityView{&con, state.queued});
            break;
        }
        // Padding segments carry no work; pin them to the source so logged
        // placements never point at arbitrary satellites.
        for (std::size_t k = nz; k < n_seg; ++k) placement.genes[k] = source;

        const CommitResult res =
            commit_placement(placement, sc.block, state, con);
        account_delays(placement, sc.block, res.drop_point, state, con);
        if (res.dropped)
          ++rep.dropped;
        else
          ++rep.completed;

        if (cfg.uplink.enabled)
          rep.uplink_seconds += cfg.uplink.task_input_bits / uplink_rate;
        if (cfg.phys.enabled) {
          for (std::size_t k = 0; k + 1 < nz; ++k) {
            if (static_cast<int>(k) + 1 >= res.drop_point) break;
            const auto hops = static_cast<double>(
                con.manhattan(placement.genes[k], placement.genes[k + 1]));
            rep.phys_tran_seconds +=
                hops *
                (static_cast<double>(sc.block.segment_workloads[k]) *
                 bits_per_unit) /
                phys_rate;
          }
        }
        if (log)
          log->push_back(TaskRecord{task_id, slot, source, res.drop_point,
                                    placement.genes});
        ++task_id;
      }
    }
    drain(state, con, cfg.slot_seconds);
  }

  rep.completion_rate =
      rep.arrivals == 0
          ? 1.0
          : static_cast<double>(rep.completed) /
                static_cast<double>(rep.arrivals);
  rep.drop_rate = rep.arrivals == 0
                      ? 0.0
                      : static_cast<double>(rep.dropped) /
                            static_cast<double>(rep.arrivals);
  for (int flat = 0; flat < n_sats; ++flat) {
    rep.total_t_comp +=
        static_cast<double>(state.comp_units[flat]) / con.capacity_of(flat);
    rep.total_t_tran += static_cast<double>(state.tran_unit_hops[flat]);
  }
  rep.total_t_tran *= cfg.tran_hop_coef;
  rep.total_t_sum = rep.total_t_comp + rep.total_t_tran;
  rep.objective = cfg.alpha * rep.drop_rate + cfg.beta * rep.total_t_sum;

  double mean = 0.0;
  for (int flat = 0; flat < n_sats; ++flat)
    mean += static_cast<double>(state.assigned_units[flat]);
  mean /= static_cast<double>(n_sats);
  double var = 0.0;
  for (int flat = 0; flat < n_sats; ++flat) {
    const double d = static_cast<double>(state.assigned_units[flat]) - mean;
    var += d * d;
  }
  rep.load_variance = var / static_cast<double>(n_sats);

  rep.stranded_units = state.stranded_units;
  if (cfg.max_drop_rate && rep.drop_rate > *cfg.max_drop_rate)
    rep.drop_bound_violated = true;
  if (cfg.max_total_delay && rep.total_t_sum > *cfg.max_total_delay)
    rep.delay_bound_violated = true;
  rep.sat_comp_units = std::move(state.comp_units);
  rep.sat_tran_unit_hops = std::move(state.tran_unit_hops);
  rep.sat_assigned_units = std::move(state.assigned_units);
  return rep;
}

}  // namespace satcc
