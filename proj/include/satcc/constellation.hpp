#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace satcc {

// Position of a satellite: orbital plane index and in-plane slot index.
struct SatId {
  int orbit = 0;
  int slot = 0;
  auto operator<=>(const SatId&) const = default;
};

// A walker-style grid of satellites: n_orbits planes with sats_per_orbit
// satellites each. With wrap enabled (the default) both axes are cyclic, so
// hop distance per axis is min(|d|, axis - |d|); without wrap the grid is a
// plain rectangle. Every satellite has the same compute rate and queue bound
// unless an explicit per-satellite override is installed.
class Constellation {
 public:
  // capacity: workload-units per second each satellite computes.
  // max_workload: queue bound M_w in workload-units (kUnbounded = no bound).
  Constellation(int n_orbits, int sats_per_orbit, double capacity,
                std::int64_t max_workload, bool wrap = true);

  static constexpr std::int64_t kUnbounded = INT64_MAX;

  int n_orbits() const { return n_orbits_; }
  int sats_per_orbit() const { return sats_per_orbit_; }
  int size() const { return n_orbits_ * sats_per_orbit_; }
  bool wrap() const { return wrap_; }

  double capacity() const { return capacity_; }
  std::int64_t max_workload() const { return max_workload_; }
  bool homogeneous() const {
    return capacity_overrides_.empty() && mw_overrides_.empty();
  }
  void set_capacity_override(SatId sat, double capacity);
  void set_max_workload_override(SatId sat, std::int64_t max_workload);
  double capacity_of(int flat) const {
    return capacity_overrides_.empty() ? capacity_ : capacity_overrides_[flat];
  }
  std::int64_t max_workload_of(int flat) const {
    return mw_overrides_.empty() ? max_workload_ : mw_overrides_[flat];
  }

  bool contains(SatId sat) const {
    return sat.orbit >= 0 && sat.orbit < n_orbits_ && sat.slot >= 0 &&
           sat.slot < sats_per_orbit_;
  }
  int flat(SatId sat) const { return sat.orbit * sats_per_orbit_ + sat.slot; }
  SatId unflat(int idx) const {
    return {idx / sats_per_orbit_, idx % sats_per_orbit_};
  }

  // Hop distance between two satellites (per-axis wrap-aware Manhattan).
  int manhattan(SatId a, SatId b) const;
  int manhattan_flat(int a, int b) const;

  // Orbit+-1 / slot+-1 neighbours as a deduplicated sorted set (degenerate
  // grids collapse some of the four).
  std::vector<SatId> neighbors(SatId sat) const;

  // All satellites within d_max hops of x, sorted by (orbit, slot).
  // Always contains x itself; on a large enough torus the size is
  // 2*d^2 + 2*d + 1.
  std::vector<SatId> decision_space(SatId x, int d_max) const;

 private:
  void check_member(SatId sat, const char* who) const;

  int n_orbits_;
  int sats_per_orbit_;
  double capacity_;
  std::int64_t max_workload_;
  bool wrap_;
  std::vector<double> capacity_overrides_;      // empty = homogeneous
  std::vector<std::int64_t> mw_overrides_;      // empty = homogeneous
};

}  // namespace satcc
