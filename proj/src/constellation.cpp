#include "satcc/constellation.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace satcc {

Constellation::Constellation(int n_orbits, int sats_per_orbit, double capacity,
                             std::int64_t max_workload, bool wrap)
    : n_orbits_(n_orbits),
      sats_per_orbit_(sats_per_orbit),
      capacity_(capacity),
      max_workload_(max_workload),
      wrap_(wrap) {
  if (n_orbits < 1 || sats_per_orbit < 1)
    throw std::invalid_argument("constellation: grid dimensions must be >= 1");
  if (!(capacity > 0.0))
    throw std::invalid_argument("constellation: capacity must be positive");
  if (max_workload <= 0)
    throw std::invalid_argument("constellation: max_workload must be positive");
}

void Constellation::check_member(SatId sat, const char* who) const {
  if (!contains(sat))
    throw std::invalid_argument(std::string(who) + ": satellite (" +
                                std::to_string(sat.orbit) + "," +
                                std::to_string(sat.slot) +
                                ") outside the grid");
}

void Constellation::set_capacity_override(SatId sat, double capacity) {
  check_member(sat, "set_capacity_override");
  if (!(capacity > 0.0))
    throw std::invalid_argument("set_capacity_override: capacity must be positive");
  if (capacity_overrides_.empty())
    capacity_overrides_.assign(static_cast<size_t>(size()), capacity_);
  capacity_overrides_[flat(sat)] = capacity;
}

void Constellation::set_max_workload_override(SatId sat, std::int64_t mw) {
  check_member(sat, "set_max_workload_override");
  if (mw <= 0)
    throw std::invalid_argument("set_max_workload_override: bound must be positive");
  if (mw_overrides_.empty())
    mw_overrides_.assign(static_cast<size_t>(size()), max_workload_);
  mw_overrides_[flat(sat)] = mw;
}

namespace {
inline int axis_distance(int a, int b, int extent, bool wrap) {
  int d = std::abs(a - b);
  if (wrap) d = std::min(d, extent - d);
  return d;
}
}  // namespace

int Constellation::manhattan(SatId a, SatId b) const {
  check_member(a, "manhattan");
  check_member(b, "manhattan");
  return axis_distance(a.orbit, b.orbit, n_orbits_, wrap_) +
         axis_distance(a.slot, b.slot, sats_per_orbit_, wrap_);
}

int Constellation::manhattan_flat(int a, int b) const {
  return axis_distance(a / sats_per_orbit_, b / sats_per_orbit_, n_orbits_, wrap_) +
         axis_distance(a % sats_per_orbit_, b % sats_per_orbit_, sats_per_orbit_, wrap_);
}

std::vector<SatId> Constellation::neighbors(SatId sat) const {
  check_member(sat, "neighbors");
  std::vector<SatId> out;
  out.reserve(4);
  const int deltas[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (const auto& d : deltas) {
    int o = sat.orbit + d[0];
    int s = sat.slot + d[1];
    if (wrap_) {
      o = (o + n_orbits_) % n_orbits_;
      s = (s + sats_per_orbit_) % sats_per_orbit_;
    } else if (o < 0 || o >= n_orbits_ || s < 0 || s >= sats_per_orbit_) {
      continue;
    }
    out.push_back({o, s});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  // A satellite is not its own neighbour; on 1-wide axes the wrap folds back.
  out.erase(std::remove(out.begin(), out.end(), sat), out.end());
  return out;
}

std::vector<SatId> Constellation::decision_space(SatId x, int d_max) const {
  check_member(x, "decision_space");
  if (d_max < 0)
    throw std::invalid_argument("decision_space: d_max must be >= 0");
  std::vector<SatId> out;
  for (int o = 0; o < n_orbits_; ++o) {
    const int doff = axis_distance(o, x.orbit, n_orbits_, wrap_);
    if (doff > d_max) continue;
    for (int s = 0; s < sats_per_orbit_; ++s) {
      if (doff + axis_distance(s, x.slot, sats_per_orbit_, wrap_) <= d_max)
        out.push_back({o, s});
    }
  }
  return out;  // construction order is already (orbit, slot) sorted
}

}  // namespace satcc
