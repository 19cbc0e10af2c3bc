#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "satcc/constellation.hpp"
#include "satcc/errors.hpp"
#include "satcc/simulator.hpp"

using namespace satcc;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.grid = {4, 4, true};
  cfg.max_workload_units = 250'000;
  cfg.arrival_rate = 5.0;
  cfg.num_slots = 3;
  cfg.model = "ResNet101";
  cfg.seed = 11;
  return cfg;
}

// Recompute every delay and drop number from the placement log alone —
// double-entry bookkeeping against the simulator's incremental accumulators.
void audit(const SimConfig& cfg, const MetricsReport& rep,
           const std::vector<TaskRecord>& log) {
  const SegmentedBlock tpl = scenario_template(cfg);
  Constellation con(cfg.grid.n_orbits, cfg.grid.sats_per_orbit,
                    cfg.capacity_macs_per_s / double(cfg.workload_unit_macs),
                    cfg.max_workload_units, cfg.grid.wrap);
  for (auto& [sat, c] : cfg.capacity_overrides)
    con.set_capacity_override(sat, c / double(cfg.workload_unit_macs));
  for (auto& [sat, m] : cfg.max_workload_overrides)
    con.set_max_workload_override(sat, m);

  const int L = tpl.segments();
  const int nz = tpl.nonempty_segments();
  std::uint64_t completed = 0, dropped = 0;
  std::int64_t stranded = 0;
  double t_comp = 0, t_tran = 0;
  for (const TaskRecord& t : log) {
    REQUIRE((int)t.genes.size() == L);
    if (t.drop_point == L + 1) {
      completed++;
    } else {
      dropped++;
      for (int k = 0; k + 1 < t.drop_point; ++k)
        stranded += tpl.segment_workloads[k];
    }
    for (int k = 0; k < nz; ++k) {
      const bool loaded = k + 1 < t.drop_point;
      if (loaded)
        t_comp += double(tpl.segment_workloads[k]) /
                  con.capacity_of(con.flat(t.genes[k]));
      if (k + 1 < nz)                      // a successor segment exists
        if (k + 1 < t.drop_point || k + 2 == t.drop_point)
          // sender loaded; transfer happens even toward a dropping segment
          t_tran += cfg.tran_hop_coef * double(tpl.segment_workloads[k]) *
                    con.manhattan(t.genes[k], t.genes[k + 1]);
    }
  }
  CHECK(completed == rep.completed);
  CHECK(dropped == rep.dropped);
  CHECK(completed + dropped == rep.arrivals);
  CHECK(stranded == rep.stranded_units);
  CHECK(t_comp == doctest::Approx(rep.total_t_comp).epsilon(1e-9));
  CHECK(t_tran == doctest::Approx(rep.total_t_tran).epsilon(1e-9));
  CHECK(rep.total_t_sum ==
        doctest::Approx(rep.total_t_comp + rep.total_t_tran).epsilon(1e-12));
  if (rep.arrivals > 0)
    CHECK(rep.drop_rate == doctest::Approx(double(dropped) / rep.arrivals));
  CHECK(rep.completion_rate == doctest::Approx(1.0 - rep.drop_rate));
  CHECK(rep.objective == doctest::Approx(cfg.alpha * rep.drop_rate +
                                         cfg.beta * rep.total_t_sum)
                             .epsilon(1e-12));

  // Per-satellite assigned units resum to committed (incl. stranded) mass.
  std::int64_t assigned = 0;
  for (auto v : rep.sat_assigned_units) assigned += v;
  CHECK(assigned == std::int64_t(completed) * tpl.total() + stranded);

  // Load variance is the population variance of the per-satellite totals.
  double mean = 0;
  for (auto v : rep.sat_assigned_units) mean += double(v);
  mean /= rep.sat_assigned_units.size();
  double var = 0;
  for (auto v : rep.sat_assigned_units) var += (v - mean) * (v - mean);
  var /= rep.sat_assigned_units.size();
  CHECK(rep.load_variance == doctest::Approx(var).epsilon(1e-9));
}

}  // namespace

TEST_CASE("zero arrival rate: clean empty run") {
  SimConfig cfg = small_config();
  cfg.arrival_rate = 0.0;
  for (Policy pol : {Policy::Scc, Policy::Random, Policy::Rrp}) {
    cfg.policy = pol;
    MetricsReport rep = run(cfg);
    CHECK(rep.arrivals == 0);
    CHECK(rep.completed == 0);
    CHECK(rep.dropped == 0);
    CHECK(rep.completion_rate == 1.0);
    CHECK(rep.drop_rate == 0.0);
    CHECK(rep.total_t_sum == 0.0);
    CHECK(rep.load_variance == 0.0);
    CHECK(rep.stranded_units == 0);
  }
}

TEST_CASE("unbounded queue: nothing can drop under any policy") {
  SimConfig cfg = small_config();
  cfg.max_workload_units = Constellation::kUnbounded;
  cfg.arrival_rate = 20.0;
  for (Policy pol : {Policy::Scc, Policy::Random, Policy::Rrp}) {
    cfg.policy = pol;
    MetricsReport rep = run(cfg);
    CHECK(rep.arrivals > 0);
    CHECK(rep.dropped == 0);
    CHECK(rep.completion_rate == 1.0);
    CHECK(rep.stranded_units == 0);
  }
}

TEST_CASE("single-satellite grid: every policy produces the same report") {
  SimConfig cfg = small_config();
  cfg.grid = {1, 1, true};
  cfg.arrival_rate = 3.0;
  cfg.max_workload_units = 50'000;
  cfg.policy = Policy::Scc;
  MetricsReport scc = run(cfg);
  cfg.policy = Policy::Random;
  MetricsReport rnd = run(cfg);
  cfg.policy = Policy::Rrp;
  MetricsReport rrp = run(cfg);
  CHECK(scc.arrivals == rnd.arrivals);
  CHECK(scc.arrivals == rrp.arrivals);
  CHECK(scc.completed == rnd.completed);
  CHECK(scc.completed == rrp.completed);
  CHECK(scc.total_t_sum == rnd.total_t_sum);
  CHECK(scc.total_t_sum == rrp.total_t_sum);
  CHECK(scc.load_variance == rnd.load_variance);
}

TEST_CASE("same seed draws the same arrivals for every policy") {
  SimConfig cfg = small_config();
  cfg.arrival_rate = 8.0;
  cfg.max_workload_units = 40'000;
  cfg.policy = Policy::Scc;
  MetricsReport scc = run(cfg);
  cfg.policy = Policy::Random;
  MetricsReport rnd = run(cfg);
  cfg.policy = Policy::Rrp;
  MetricsReport rrp = run(cfg);
  CHECK(scc.arrivals == rnd.arrivals);
  CHECK(scc.arrivals == rrp.arrivals);
  CHECK(scc.arrivals > 0);
}

TEST_CASE("repeated runs with one seed are identical; seeds differ") {
  SimConfig cfg = small_config();
  cfg.policy = Policy::Scc;
  cfg.max_workload_units = 60'000;
  cfg.arrival_rate = 6.0;
  MetricsReport a = run(cfg);
  MetricsReport b = run(cfg);
  CHECK(a.arrivals == b.arrivals);
  CHECK(a.completed == b.completed);
  CHECK(a.dropped == b.dropped);
  CHECK(a.total_t_comp == b.total_t_comp);
  CHECK(a.total_t_tran == b.total_t_tran);
  CHECK(a.load_variance == b.load_variance);
  CHECK(a.stranded_units == b.stranded_units);
  CHECK(a.sat_assigned_units == b.sat_assigned_units);

  cfg.seed = 12;
  MetricsReport c = run(cfg);
  CHECK(a.arrivals != c.arrivals);  // 48 Poisson(6) draws: collision is ~0
}

TEST_CASE("double-entry audit across regimes and policies") {
  for (Policy pol : {Policy::Scc, Policy::Random, Policy::Rrp}) {
    for (std::int64_t mw : {20'000LL, 250'000LL}) {
      SimConfig cfg = small_config();
      cfg.policy = pol;
      cfg.max_workload_units = mw;
      cfg.arrival_rate = 7.0;
      std::vector<TaskRecord> log;
      MetricsReport rep = run(cfg, &log);
      CHECK(rep.arrivals == log.size());
      audit(cfg, rep, log);
      if (mw == 20'000) CHECK(rep.dropped > 0);  // pressured regime
    }
  }
}

TEST_CASE("double-entry audit on VGG19 with its own defaults") {
  SimConfig cfg = small_config();
  cfg.model = "VGG19";
  cfg.arrival_rate = 4.0;
  cfg.max_workload_units = 30'000;
  std::vector<TaskRecord> log;
  MetricsReport rep = run(cfg, &log);
  CHECK(rep.dropped > 0);
  audit(cfg, rep, log);
}

TEST_CASE("commit walk: drop point, stranding, and queue safety") {
  Constellation con(1, 2, 1000.0, 10);
  SimState st;
  st.init(con.size());
  SegmentedBlock b;
  b.task_id = 0;
  b.segment_ranges = {{0, 1}, {1, 2}, {2, 3}};
  b.segment_workloads = {4, 4, 4};

  // (A, A, B): 4 fits, second 4 on A trips 8 >= 10? No: 8 < 10 holds, so it
  // fits too; third on B fits. Everything commits.
  Chromosome ok{{{0, 0}, {0, 0}, {0, 1}}};
  CommitResult r = commit_placement(ok, b, st, con);
  CHECK_FALSE(r.dropped);
  CHECK(r.committed_units == 12);
  CHECK(st.queued[0] == 8);
  CHECK(st.queued[1] == 4);

  // Next task: A has 8 queued; first segment 4 would reach 12 >= 10: drop
  // at segment 1 with nothing stranded.
  CommitResult r2 = commit_placement(ok, b, st, con);
  CHECK(r2.dropped);
  CHECK(r2.drop_point == 1);
  CHECK(r2.committed_units == 0);
  CHECK(st.queued[0] == 8);  // untouched

  // (B, B, B) with B already at 4: the first segment reaches 8 < 10 and
  // commits, the second would reach 12 >= 10 and drops the task there,
  // leaving one segment stranded on B with no rollback.
  Chromosome bb{{{0, 1}, {0, 1}, {0, 1}}};
  CommitResult r3 = commit_placement(bb, b, st, con);
  CHECK(r3.dropped);
  CHECK(r3.drop_point == 2);
  CHECK(r3.committed_units == 4);
  CHECK(st.queued[1] == 8);
  CHECK(st.queued[1] < 10);  // q stays strictly below the bound throughout
}

TEST_CASE("delay accounting charges the hop toward a dropping segment") {
  Constellation con(1, 3, 1.0, Constellation::kUnbounded);
  SimState st;
  st.init(con.size());
  SegmentedBlock b;
  b.task_id = 0;
  b.segment_ranges = {{0, 1}, {1, 2}, {2, 3}};
  b.segment_workloads = {5, 7, 9};
  Chromosome ch{{{0, 0}, {0, 1}, {0, 2}}};

  // Completed task: all three compute, both transfers charged.
  account_delays(ch, b, /*drop_point=*/4, st, con);
  CHECK(st.comp_units[0] == 5);
  CHECK(st.comp_units[1] == 7);
  CHECK(st.comp_units[2] == 9);
  CHECK(st.tran_unit_hops[0] == 5);  // 5 units x 1 hop
  CHECK(st.tran_unit_hops[1] == 7);

  // Dropped at segment 2: segment 1 computed and its send toward the
  // dropping segment is still charged; nothing downstream.
  SimState st2;
  st2.init(con.size());
  account_delays(ch, b, /*drop_point=*/2, st2, con);
  CHECK(st2.comp_units[0] == 5);
  CHECK(st2.comp_units[1] == 0);
  CHECK(st2.comp_units[2] == 0);
  CHECK(st2.tran_unit_hops[0] == 5);
  CHECK(st2.tran_unit_hops[1] == 0);

  // Dropped at segment 1: nothing computes, nothing moves.
  SimState st3;
  st3.init(con.size());
  account_delays(ch, b, /*drop_point=*/1, st3, con);
  CHECK(st3.comp_units[0] == 0);
  CHECK(st3.tran_unit_hops[0] == 0);
}

TEST_CASE("drain removes one slot's worth of compute, clamped at zero") {
  Constellation con(1, 2, 3.0, Constellation::kUnbounded);  // 3 units/s
  SimState st;
  st.init(con.size());
  st.queued = {5000, 100};
  drain(st, con, 300.0);  // 900 units per slot
  CHECK(st.queued[0] == 4100);
  CHECK(st.queued[1] == 0);
}

TEST_CASE("queue bound safety holds under heavy pressure") {
  SimConfig cfg = small_config();
  cfg.max_workload_units = 9'000;  // just above one task's largest segment mix
  cfg.arrival_rate = 30.0;
  for (Policy pol : {Policy::Scc, Policy::Random, Policy::Rrp}) {
    cfg.policy = pol;
    // The simulator asserts q < M_w after every commit internally (it
    // throws std::logic_error on violation), so a clean run is the check.
    MetricsReport rep = run(cfg);
    CHECK(rep.dropped > 0);
    CHECK(rep.completed + rep.dropped == rep.arrivals);
  }
}

TEST_CASE("alpha and beta weight the reported objective") {
  SimConfig cfg = small_config();
  cfg.max_workload_units = 30'000;
  cfg.arrival_rate = 10.0;
  cfg.alpha = 2.0;
  cfg.beta = 0.5;
  MetricsReport rep = run(cfg);
  CHECK(rep.objective ==
        doctest::Approx(2.0 * rep.drop_rate + 0.5 * rep.total_t_sum));
}

TEST_CASE("bound flags trip when configured limits are exceeded") {
  SimConfig cfg = small_config();
  cfg.max_workload_units = 15'000;
  cfg.arrival_rate = 20.0;
  cfg.max_drop_rate = 0.01;  // will certainly be exceeded
  cfg.max_total_delay = 1e-6;
  MetricsReport rep = run(cfg);
  CHECK(rep.drop_rate > 0.01);
  CHECK(rep.drop_bound_violated);
  CHECK(rep.delay_bound_violated);

  cfg.max_drop_rate = 1.0;
  cfg.max_total_delay = 1e12;
  MetricsReport rep2 = run(cfg);
  CHECK_FALSE(rep2.drop_bound_violated);
  CHECK_FALSE(rep2.delay_bound_violated);
}

TEST_CASE("optional uplink and physical-link reporting leave outcomes alone") {
  SimConfig cfg = small_config();
  cfg.arrival_rate = 6.0;
  cfg.max_workload_units = 100'000;
  MetricsReport plain = run(cfg);
  CHECK_FALSE(plain.uplink_enabled);
  CHECK(plain.uplink_seconds == 0.0);
  CHECK(plain.phys_tran_seconds == 0.0);

  SimConfig up = cfg;
  up.uplink.enabled = true;
  up.uplink.task_input_bits = 8e6;
  MetricsReport withup = run(up);
  CHECK(withup.uplink_enabled);
  CHECK(withup.uplink_seconds > 0.0);
  // The extra report channel must not perturb placements or outcomes.
  CHECK(withup.arrivals == plain.arrivals);
  CHECK(withup.completed == plain.completed);
  CHECK(withup.total_t_comp == plain.total_t_comp);
  CHECK(withup.total_t_tran == plain.total_t_tran);
  CHECK(withup.load_variance == plain.load_variance);

  SimConfig ph = cfg;
  ph.phys.enabled = true;
  ph.phys.bytes_per_mac = 0.125;
  MetricsReport withph = run(ph);
  CHECK(withph.phys_enabled);
  CHECK(withph.phys_tran_seconds > 0.0);
  CHECK(withph.completed == plain.completed);

  // Gain jitter draws from the channel stream; a jittered run still matches
  // the plain run on every placement-driven metric.
  SimConfig jit = up;
  jit.uplink.gain_min = 0.5e-13;
  jit.uplink.gain_max = 2e-13;
  MetricsReport withjit = run(jit);
  CHECK(withjit.completed == plain.completed);
  CHECK(withjit.uplink_seconds != withup.uplink_seconds);
}

TEST_CASE("per-satellite overrides shape the outcome") {
  SimConfig cfg = small_config();
  cfg.grid = {2, 2, true};
  cfg.arrival_rate = 6.0;
  cfg.max_workload_units = 100'000;
  cfg.policy = Policy::Rrp;
  MetricsReport plain = run(cfg);

  // Choke one satellite's queue: placements shift, totals stay accounted.
  SimConfig ch = cfg;
  ch.max_workload_overrides = {{SatId{0, 0}, std::int64_t{1}}};
  std::vector<TaskRecord> log;
  MetricsReport choked = run(ch, &log);
  CHECK(choked.arrivals == plain.arrivals);
  CHECK(choked.sat_assigned_units[0] == 0);  // nothing fits under bound 1
  audit(ch, choked, log);

  // Slow one satellite: its compute contribution grows in t_comp.
  SimConfig slow = cfg;
  slow.capacity_overrides = {{SatId{0, 0}, 1e6}};  // 1 unit/s
  std::vector<TaskRecord> log2;
  MetricsReport slowed = run(slow, &log2);
  audit(slow, slowed, log2);
}

TEST_CASE("invalid configurations are rejected with field names") {
  SimConfig cfg = small_config();
  cfg.max_workload_units = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.grid.n_orbits = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.num_slots = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.slot_seconds = 0.0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.arrival_rate = -1.0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.model = "NoSuchNet";
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.segments = 9;  // beyond the chromosome width
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.workload_unit_macs = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = small_config();
  cfg.split_epsilon = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("poisson arrival draws have the right first two moments") {
  Rng rng(2024);
  for (double lambda : {0.5, 4.0, 25.0}) {
    const int n = 20'000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      int k = draw_arrivals(lambda, rng);
      REQUIRE(k >= 0);
      sum += k;
      sum2 += double(k) * k;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // Seeded and deterministic; 5-sigma-ish slack on both moments.
    CHECK(std::abs(mean - lambda) <= 5 * std::sqrt(lambda / n));
    CHECK(std::abs(var - lambda) <= 0.1 * lambda + 0.05);
  }
  CHECK(draw_arrivals(0.0, rng) == 0);
}
