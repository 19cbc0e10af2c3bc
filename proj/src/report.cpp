#include "satcc/report.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "satcc/errors.hpp"
#include "satcc/splitter.hpp"

namespace satcc {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using RowKey = std::tuple<double, int, std::string, std::uint64_t>;

RowKey key_of(const MetricsReport& r) {
  return {r.lambda, r.n_orbits, r.policy, r.seed};
}

void append_row(std::string& out, const MetricsReport& r, bool extras) {
  out += std::to_string(r.seed);
  out += ',';
  out += format_double(r.lambda);
  out += ',';
  out += std::to_string(r.n_orbits);
  out += ',';
  out += r.policy;
  out += ',';
  out += format_double(r.completion_rate);
  out += ',';
  out += format_double(r.drop_rate);
  out += ',';
  out += format_double(r.total_t_comp);
  out += ',';
  out += format_double(r.total_t_tran);
  out += ',';
  out += format_double(r.total_t_sum);
  out += ',';
  out += format_double(r.objective);
  out += ',';
  out += format_double(r.load_variance);
  out += ',';
  out += std::to_string(r.stranded_units);
  if (extras) {
    out += ',';
    out += format_double(r.uplink_seconds);
    out += ',';
    out += format_double(r.phys_tran_seconds);
  }
  out += '\n';
}

std::vector<const MetricsReport*> sorted_view(
    std::span<const MetricsReport> reports) {
  std::vector<const MetricsReport*> view;
  view.reserve(reports.size());
  for (const auto& r : reports) view.push_back(&r);
  std::stable_sort(view.begin(), view.end(),
                   [](const MetricsReport* a, const MetricsReport* b) {
                     return key_of(*a) < key_of(*b);
                   });
  return view;
}

bool any_extras(std::span<const MetricsReport> reports) {
  for (const auto& r : reports)
    if (r.uplink_enabled || r.phys_enabled) return true;
  return false;
}

}  // namespace

std::string reports_to_csv(std::span<const MetricsReport> reports) {
  const bool extras = any_extras(reports);
  std::string out =
      "seed,lambda,N,policy,completion_rate,r_D,total_t_comp,total_t_tran,"
      "total_t_sum,objective,load_variance,stranded_workload";
  if (extras) out += ",uplink_seconds,phys_tran_seconds";
  out += '\n';
  for (const MetricsReport* r : sorted_view(reports))
    append_row(out, *r, extras);
  return out;
}

std::string aggregate_csv(std::span<const MetricsReport> reports) {
  constexpr int kMetrics = 8;
  struct Acc {
    std::vector<std::array<double, kMetrics>> rows;
  };
  std::map<std::tuple<double, int, std::string>, Acc> groups;
  for (const auto& r : reports) {
    auto& acc = groups[{r.lambda, r.n_orbits, r.policy}];
    acc.rows.push_back({r.completion_rate, r.drop_rate, r.total_t_comp,
                        r.total_t_tran, r.total_t_sum, r.objective,
                        r.load_variance,
                        static_cast<double>(r.stranded_units)});
  }

  static const char* names[kMetrics] = {
      "completion_rate", "r_D",       "total_t_comp",  "total_t_tran",
      "total_t_sum",     "objective", "load_variance", "stranded_workload"};
  std::string out = "lambda,N,policy,runs";
  for (const char* n : names) {
    out += ',';
    out += n;
    out += "_mean,";
    out += n;
    out += "_std";
  }
  out += '\n';

  for (const auto& [key, acc] : groups) {
    const auto n = static_cast<double>(acc.rows.size());
    out += format_double(std::get<0>(key));
    out += ',';
    out += std::to_string(std::get<1>(key));
    out += ',';
    out += std::get<2>(key);
    out += ',';
    out += std::to_string(acc.rows.size());
    for (int m = 0; m < kMetrics; ++m) {
      double mean = 0;
      for (const auto& row : acc.rows) mean += row[m];
      mean /= n;
      double var = 0;
      for (const auto& row : acc.rows) {
        const double d = row[m] - mean;
        var += d * d;
      }
      out += ',';
      out += format_double(mean);
      out += ',';
      out += format_double(std::sqrt(var / n));
    }
    out += '\n';
  }
  return out;
}

namespace {

// Runs each config into its own result slot; worker count never affects the
// output, only the wall time.
std::vector<MetricsReport> run_all(std::vector<SimConfig> tasks,
                                   int parallel) {
  std::vector<MetricsReport> results(tasks.size());
  if (tasks.empty()) return results;
  const int n_threads = std::max(
      1, std::min<int>(parallel, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = run(tasks[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = run(tasks[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::vector<MetricsReport> run_matrix(const SimConfig& base,
                                      std::span<const std::uint64_t> seeds,
                                      std::span<const Policy> policies,
                                      int parallel) {
  std::vector<SimConfig> tasks;
  tasks.reserve(seeds.size() * policies.size());
  for (const std::uint64_t seed : seeds)
    for (const Policy policy : policies) {
      SimConfig cfg = base;
      cfg.seed = seed;
      cfg.policy = policy;
      tasks.push_back(std::move(cfg));
    }
  return run_all(std::move(tasks), parallel);
}

std::vector<MetricsReport> run_sweep(const SimConfig& base,
                                     const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep: no values given");
  if (spec.seeds.empty()) throw ConfigError("sweep: no seeds given");
  if (spec.policies.empty()) throw ConfigError("sweep: no policies given");
  std::vector<SimConfig> tasks;
  tasks.reserve(spec.values.size() * spec.seeds.size() *
                spec.policies.size());
  for (const double value : spec.values) {
    SimConfig with_value = base;
    switch (spec.kind) {
      case SweepKind::Lambda:
        if (!(value >= 0) || !std::isfinite(value))
          throw ConfigError("sweep: arrival rates must be >= 0");
        with_value.arrival_rate = value;
        break;
      case SweepKind::Grid: {
        if (value < 1 || value != std::trunc(value) || value > 4096)
          throw ConfigError("sweep: grid sides must be positive integers");
        const int side = static_cast<int>(value);
        with_value.grid.n_orbits = side;
        with_value.grid.sats_per_orbit = side;
        break;
      }
    }
    for (const std::uint64_t seed : spec.seeds)
      for (const Policy policy : spec.policies) {
        SimConfig cfg = with_value;
        cfg.seed = seed;
        cfg.policy = policy;
        tasks.push_back(std::move(cfg));
      }
  }
  return run_all(std::move(tasks), spec.parallel);
}

std::int64_t calibrate_max_workload(const SimConfig& base,
                                    double target_drop_rate,
                                    std::span<const std::uint64_t> seeds,
                                    int parallel) {
  if (!(target_drop_rate >= 0.0 && target_drop_rate <= 1.0))
    throw ConfigError("calibration target must be in [0, 1]");
  if (seeds.empty()) throw ConfigError("calibration: no seeds given");

  const Policy policy[] = {base.policy};
  auto mean_drop = [&](std::int64_t bound) {
    SimConfig cfg = base;
    cfg.max_workload_units = bound;
    const auto reports = run_matrix(cfg, seeds, policy, parallel);
    double sum = 0;
    for (const auto& r : reports) sum += r.drop_rate;
    return sum / static_cast<double>(reports.size());
  };

  // Strict admission (queued + q < bound) means the largest segment needs at
  // least max_seg + 1 of headroom to ever load.
  SimConfig probe = base;
  if (probe.max_workload_units <= 0)
    probe.max_workload_units = Constellation::kUnbounded;
  const SegmentedBlock block = scenario_template(probe);
  std::int64_t max_seg = 1;
  for (const std::int64_t w : block.segment_workloads)
    max_seg = std::max(max_seg, w);

  std::int64_t lo = max_seg;  // known infeasible (largest segment never fits)
  std::int64_t hi = max_seg * 2;
  for (;;) {
    if (mean_drop(hi) <= target_drop_rate) break;
    if (hi >= Constellation::kUnbounded / 4) {
      if (mean_drop(Constellation::kUnbounded) <= target_drop_rate)
        return Constellation::kUnbounded;
      throw std::runtime_error(
          "calibration: target drop rate unreachable even without a bound");
    }
    lo = hi;
    hi *= 2;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (mean_drop(mid) <= target_drop_rate)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace satcc
