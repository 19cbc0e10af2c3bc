#include "satcc/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "satcc/errors.hpp"

namespace satcc {
namespace {

using nlohmann::json;

// Strict object reader: every typed getter marks its key consumed, and
// finish() rejects anything left over so misspelled fields never pass
// silently.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected a JSON object");
  }

  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string where(const char* key) const { return path_ + "." + key; }

  void get(const char* key, double& out) {
    if (const json* v = take(key)) out = as_double(*v, where(key));
  }
  void get(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean())
        throw ConfigError(where(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string())
        throw ConfigError(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::int64_t& out) {
    if (const json* v = take(key)) out = as_int64(*v, where(key));
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (v->is_number_unsigned()) {
        out = v->get<std::uint64_t>();
        return;
      }
      const std::int64_t i = as_int64(*v, where(key));
      if (i < 0) throw ConfigError(where(key) + ": must be >= 0");
      out = static_cast<std::uint64_t>(i);
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = take(key)) {
      const std::int64_t i = as_int64(*v, where(key));
      if (i < INT32_MIN || i > INT32_MAX)
        throw ConfigError(where(key) + ": out of range");
      out = static_cast<int>(i);
    }
  }

  void finish() {
    for (const auto& item : j_.items())
      if (!seen_.contains(item.key()))
        throw ConfigError(path_ + ": unknown field '" + item.key() + "'");
  }

  static double as_double(const json& v, const std::string& where) {
    if (!v.is_number())
      throw ConfigError(where + ": expected a number");
    return v.get<double>();
  }

  static std::int64_t as_int64(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      // Accept exponent notation like 1e6 as long as the value is integral
      // and exactly representable.
      if (std::trunc(d) == d && std::abs(d) <= 9.007199254740992e15)
        return static_cast<std::int64_t>(d);
      throw ConfigError(where + ": expected an integer value");
    }
    throw ConfigError(where + ": expected an integer value");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Accepts a number or the string "unbounded".
std::int64_t as_bound(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "unbounded") return Constellation::kUnbounded;
    throw ConfigError(where + ": expected a number or \"unbounded\"");
  }
  return Obj::as_int64(v, where);
}

SatId parse_sat(Obj& o) {
  SatId sat;
  bool have_orbit = false, have_slot = false;
  if (const json* v = o.take("orbit")) {
    sat.orbit = static_cast<int>(Obj::as_int64(*v, o.where("orbit")));
    have_orbit = true;
  }
  if (const json* v = o.take("slot")) {
    sat.slot = static_cast<int>(Obj::as_int64(*v, o.where("slot")));
    have_slot = true;
  }
  if (!have_orbit || !have_slot)
    throw ConfigError(o.where("orbit") + "/slot: both are required");
  return sat;
}

}  // namespace

SimConfig load_sim_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  SimConfig cfg;
  Obj o(root, "config");

  if (const json* v = o.take("grid")) {
    Obj g(*v, "config.grid");
    g.get("orbits", cfg.grid.n_orbits);
    g.get("sats_per_orbit", cfg.grid.sats_per_orbit);
    g.get("wrap", cfg.grid.wrap);
    g.finish();
  }
  o.get("capacity_macs_per_s", cfg.capacity_macs_per_s);
  if (const json* v = o.take("max_workload_units"))
    cfg.max_workload_units = as_bound(*v, o.where("max_workload_units"));
  o.get("workload_unit_macs", cfg.workload_unit_macs);
  o.get("slot_seconds", cfg.slot_seconds);
  o.get("num_slots", cfg.num_slots);
  o.get("arrival_rate", cfg.arrival_rate);
  o.get("model", cfg.model);

  std::string profile_file;
  o.get("profile_file", profile_file);
  if (const json* v = o.take("profile")) {
    cfg.profile = load_profile(v->dump());
  } else if (!profile_file.empty()) {
    cfg.profile = load_profile_file(profile_file);
  }

  o.get("segments", cfg.segments);
  o.get("max_hops", cfg.max_hops);
  o.get("split_epsilon", cfg.split_epsilon);
  if (const json* v = o.take("policy")) {
    if (!v->is_string())
      throw ConfigError("config.policy: expected a string");
    cfg.policy = parse_policy(v->get<std::string>());
  }
  o.get("seed", cfg.seed);

  if (const json* v = o.take("ga")) {
    Obj g(*v, "config.ga");
    g.get("theta1", cfg.ga.theta1);
    g.get("theta2", cfg.ga.theta2);
    g.get("theta3", cfg.ga.theta3);
    g.get("n_ini", cfg.ga.n_ini);
    g.get("n_iter", cfg.ga.n_iter);
    g.get("n_k", cfg.ga.n_k);
    g.get("n_summ", cfg.ga.n_summ);
    g.get("epsilon", cfg.ga.epsilon);
    g.finish();
  }
  o.get("alpha", cfg.alpha);
  o.get("beta", cfg.beta);
  o.get("tran_hop_coef", cfg.tran_hop_coef);
  if (const json* v = o.take("max_drop_rate"))
    cfg.max_drop_rate = Obj::as_double(*v, o.where("max_drop_rate"));
  if (const json* v = o.take("max_total_delay"))
    cfg.max_total_delay = Obj::as_double(*v, o.where("max_total_delay"));

  if (const json* v = o.take("uplink")) {
    Obj u(*v, "config.uplink");
    u.get("enabled", cfg.uplink.enabled);
    u.get("task_input_bits", cfg.uplink.task_input_bits);
    u.get("bandwidth_hz", cfg.uplink.link.bandwidth_hz);
    u.get("tx_power_w", cfg.uplink.link.tx_power_w);
    u.get("gain", cfg.uplink.link.gain);
    u.get("noise_w", cfg.uplink.link.noise_w);
    u.get("gain_min", cfg.uplink.gain_min);
    u.get("gain_max", cfg.uplink.gain_max);
    u.finish();
  }
  if (const json* v = o.take("phys_isl")) {
    Obj p(*v, "config.phys_isl");
    p.get("enabled", cfg.phys.enabled);
    p.get("bytes_per_mac", cfg.phys.bytes_per_mac);
    p.get("bandwidth_hz", cfg.phys.link.bandwidth_hz);
    p.get("tx_power_w", cfg.phys.link.tx_power_w);
    p.get("tx_antenna_gain", cfg.phys.link.tx_antenna_gain);
    p.get("rx_antenna_gain", cfg.phys.link.rx_antenna_gain);
    p.get("tx_loss", cfg.phys.link.tx_loss);
    p.get("rx_loss", cfg.phys.link.rx_loss);
    p.get("wavenumber_k", cfg.phys.link.wavenumber_k);
    p.get("noise_temp_k", cfg.phys.link.noise_temp_k);
    p.finish();
  }

  if (const json* v = o.take("capacity_overrides")) {
    if (!v->is_array())
      throw ConfigError("config.capacity_overrides: expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      Obj e((*v)[i],
            "config.capacity_overrides[" + std::to_string(i) + "]");
      const SatId sat = parse_sat(e);
      double macs = 0;
      e.get("capacity_macs_per_s", macs);
      if (macs <= 0)
        throw ConfigError(e.where("capacity_macs_per_s") +
                          ": must be positive");
      e.finish();
      cfg.capacity_overrides.emplace_back(sat, macs);
    }
  }
  if (const json* v = o.take("max_workload_overrides")) {
    if (!v->is_array())
      throw ConfigError("config.max_workload_overrides: expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      Obj e((*v)[i],
            "config.max_workload_overrides[" + std::to_string(i) + "]");
      const SatId sat = parse_sat(e);
      std::int64_t units = 0;
      if (const json* b = e.take("max_workload_units"))
        units = as_bound(*b, e.where("max_workload_units"));
      if (units <= 0)
        throw ConfigError(e.where("max_workload_units") +
                          ": must be positive or \"unbounded\"");
      e.finish();
      cfg.max_workload_overrides.emplace_back(sat, units);
    }
  }

  o.finish();
  return cfg;
}

SimConfig load_sim_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_sim_config(buf.str());
}

}  // namespace satcc
