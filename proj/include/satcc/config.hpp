#pragma once

#include <string>

#include "satcc/simulator.hpp"

namespace satcc {

// Builds a SimConfig from a JSON object. Every field is optional and
// defaults to the SimConfig initializer unless noted; unknown keys are
// rejected so typos fail loudly. Errors throw ConfigError naming the
// offending field. Schema (values shown are the defaults):
//
// {
//   "grid": {"orbits": 10, "sats_per_orbit": 10, "wrap": true},
//   "capacity_macs_per_s": 3e9,
//   "max_workload_units": 250000,        // REQUIRED; or "unbounded"
//   "workload_unit_macs": 1000000,
//   "slot_seconds": 300.0,
//   "num_slots": 10,
//   "arrival_rate": 25.0,
//   "model": "ResNet101",                // VGG19 | ResNet101
//   "profile_file": "my_model.json",     // optional custom layer profile
//   "profile": { ... },                  // same schema, inline; wins over file
//   "segments": 4,                       // 0 = model default
//   "max_hops": 3,                       // -1 = model default
//   "split_epsilon": 1,
//   "policy": "scc",                     // scc | random | rrp
//   "seed": 1,
//   "ga": {"theta1": 1.0, "theta2": 20.0, "theta3": 1e6, "n_ini": 20,
//          "n_iter": 10, "n_k": 20, "n_summ": 10, "epsilon": 1.0},
//   "alpha": 1.0,
//   "beta": 1.0,
//   "tran_hop_coef": 1.0,
//   "max_drop_rate": 0.05,               // optional; absent = no bound
//   "max_total_delay": 1e6,              // optional; absent = no bound
//   "uplink": {"enabled": false, "task_input_bits": 8e6,
//              "bandwidth_hz": 1e7, "tx_power_w": 2.0, "gain": 1e-13,
//              "noise_w": 2e-13, "gain_min": 0.0, "gain_max": 0.0},
//   "phys_isl": {"enabled": false, "bytes_per_mac": 0.125,
//                "bandwidth_hz": 2e7, "tx_power_w": 1000.0,
//                "tx_antenna_gain": 1.0, "rx_antenna_gain": 1.0,
//                "tx_loss": 1.0, "rx_loss": 1.0,
//                "wavenumber_k": 1.38e-23, "noise_temp_k": 290.0},
//   "capacity_overrides": [
//     {"orbit": 0, "slot": 1, "capacity_macs_per_s": 1e9}],
//   "max_workload_overrides": [
//     {"orbit": 0, "slot": 1, "max_workload_units": 1000}]
// }
SimConfig load_sim_config(const std::string& json_text);
SimConfig load_sim_config_file(const std::string& path);

}  // namespace satcc
