#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satcc/config.hpp"
#include "satcc/errors.hpp"
#include "satcc/report.hpp"
#include "satcc/splitter.hpp"

namespace {

using namespace satcc;

// "1,2,5..8" -> {1,2,5,6,7,8}
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const std::uint64_t lo = std::stoull(item.substr(0, dots));
        const std::uint64_t hi = std::stoull(item.substr(dots + 2));
        if (hi < lo) throw ConfigError("seed range '" + item + "' is empty");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad seed list entry '" + item + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError("seed list entry '" + item + "' out of range");
    }
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  return seeds;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + item + "'");
    }
  }
  if (values.empty()) throw ConfigError("value list is empty");
  return values;
}

std::vector<Policy> parse_policy_list(const std::string& text) {
  std::vector<Policy> policies;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (!item.empty()) policies.push_back(parse_policy(item));
  }
  if (policies.empty()) throw ConfigError("policy list is empty");
  return policies;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for write");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void print_summary(const MetricsReport& r) {
  std::cout << "model=" << r.model << " grid=" << r.n_orbits << "x"
            << r.sats_per_orbit << " policy=" << r.policy
            << " seed=" << r.seed << " lambda=" << format_double(r.lambda)
            << "\n"
            << "arrivals=" << r.arrivals << " completed=" << r.completed
            << " dropped=" << r.dropped << "\n"
            << "completion_rate=" << format_double(r.completion_rate)
            << " r_D=" << format_double(r.drop_rate) << "\n"
            << "total_t_comp=" << format_double(r.total_t_comp)
            << " total_t_tran=" << format_double(r.total_t_tran)
            << " total_t_sum=" << format_double(r.total_t_sum) << "\n"
            << "objective=" << format_double(r.objective)
            << " load_variance=" << format_double(r.load_variance)
            << " stranded_workload=" << r.stranded_units << "\n";
  if (r.uplink_enabled)
    std::cout << "uplink_seconds=" << format_double(r.uplink_seconds) << "\n";
  if (r.phys_enabled)
    std::cout << "phys_tran_seconds=" << format_double(r.phys_tran_seconds)
              << "\n";
  if (r.drop_bound_violated)
    std::cout << "WARNING: drop-rate bound exceeded\n";
  if (r.delay_bound_violated)
    std::cout << "WARNING: total-delay bound exceeded\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "satcc: collaborative-inference placement simulator for satellite "
      "grids"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand(
      "run", "simulate one scenario and print a summary");
  std::string run_config, run_policy, run_out;
  std::uint64_t run_seed = 0;
  double run_lambda = 0;
  run_cmd->add_option("--config", run_config, "scenario JSON file")
      ->required();
  run_cmd->add_option("--seed", run_seed, "override the config seed");
  run_cmd->add_option("--policy", run_policy,
                      "override the config policy (scc|random|rrp)");
  run_cmd->add_option("--lambda", run_lambda,
                      "override the config arrival rate");
  run_cmd->add_option("--out", run_out, "also write the result as CSV");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "factorial runs over arrival rates or grid sizes");
  std::string sweep_config, sweep_kind = "lambda", sweep_values;
  std::string sweep_seeds, sweep_policies = "scc,random,rrp";
  std::string sweep_out, sweep_agg;
  int sweep_parallel = 1;
  sweep_cmd->add_option("--config", sweep_config, "scenario JSON file")
      ->required();
  sweep_cmd
      ->add_option("--sweep", sweep_kind,
                   "what the values vary: lambda or grid")
      ->check(CLI::IsMember({"lambda", "grid"}));
  sweep_cmd
      ->add_option("--values", sweep_values,
                   "comma-separated sweep values, e.g. 4,10,25")
      ->required();
  sweep_cmd->add_option("--seed-list", sweep_seeds,
                        "seeds, e.g. 1..20 or 1,7,42 (default: config seed)");
  sweep_cmd->add_option("--policy", sweep_policies,
                        "policies to compare (default scc,random,rrp)");
  sweep_cmd->add_option("--out", sweep_out,
                        "write per-run CSV here (default: stdout)");
  sweep_cmd->add_option("--agg", sweep_agg,
                        "also write mean/std CSV grouped over seeds");
  sweep_cmd->add_option("--parallel", sweep_parallel,
                        "worker threads (results independent of this)");

  // split
  auto* split_cmd = app.add_subcommand(
      "split", "show the balanced contiguous layer split for a model");
  std::string split_model = "ResNet101", split_profile;
  int split_segments = 0;
  std::int64_t split_eps = 1, split_unit = 1;
  split_cmd->add_option("--model", split_model, "VGG19 or ResNet101");
  split_cmd->add_option("--profile-file", split_profile,
                        "custom layer profile JSON (overrides --model)");
  split_cmd->add_option("--segments", split_segments,
                        "number of groups (default: model default)");
  split_cmd->add_option("--epsilon", split_eps,
                        "binary-search stop width (default 1 = exact)");
  split_cmd->add_option("--unit-macs", split_unit,
                        "scale workloads to units of this many MACs first");

  // profile-dump
  auto* dump_cmd = app.add_subcommand(
      "profile-dump", "print a builtin layer profile as JSON");
  std::string dump_model = "ResNet101", dump_out;
  dump_cmd->add_option("--model", dump_model, "VGG19 or ResNet101");
  dump_cmd->add_option("--out", dump_out, "write to file instead of stdout");

  // calibrate-mw
  auto* cal_cmd = app.add_subcommand(
      "calibrate-mw",
      "find the smallest queue bound meeting a target drop rate");
  std::string cal_config, cal_seeds = "1..5";
  double cal_target = 0.2;
  int cal_parallel = 1;
  cal_cmd->add_option("--config", cal_config, "scenario JSON file")
      ->required();
  cal_cmd->add_option("--target-drop", cal_target,
                      "highest acceptable mean drop rate (default 0.2)");
  cal_cmd->add_option("--seed-list", cal_seeds,
                      "seeds averaged per probe (default 1..5)");
  cal_cmd->add_option("--parallel", cal_parallel, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      SimConfig cfg = load_sim_config_file(run_config);
      if (run_cmd->count("--seed")) cfg.seed = run_seed;
      if (run_cmd->count("--lambda")) cfg.arrival_rate = run_lambda;
      if (!run_policy.empty()) cfg.policy = parse_policy(run_policy);
      const MetricsReport rep = run(cfg);
      print_summary(rep);
      if (!run_out.empty()) {
        const MetricsReport reps[] = {rep};
        write_text(run_out, reports_to_csv(reps));
      }
    } else if (sweep_cmd->parsed()) {
      const SimConfig base = load_sim_config_file(sweep_config);
      SweepSpec spec;
      spec.kind =
          sweep_kind == "grid" ? SweepKind::Grid : SweepKind::Lambda;
      spec.values = parse_value_list(sweep_values);
      spec.seeds = sweep_seeds.empty()
                       ? std::vector<std::uint64_t>{base.seed}
                       : parse_seed_list(sweep_seeds);
      spec.policies = parse_policy_list(sweep_policies);
      if (sweep_parallel < 1)
        throw ConfigError("--parallel must be >= 1");
      spec.parallel = sweep_parallel;
      const auto reports = run_sweep(base, spec);
      const std::string csv = reports_to_csv(reports);
      if (sweep_out.empty())
        std::cout << csv;
      else
        write_text(sweep_out, csv);
      if (!sweep_agg.empty()) write_text(sweep_agg, aggregate_csv(reports));
    } else if (split_cmd->parsed()) {
      LayerProfile profile = split_profile.empty()
                                 ? builtin_profile(split_model)
                                 : load_profile_file(split_profile);
      if (split_segments == 0) {
        if (profile.model_name == "VGG19") split_segments = 3;
        else if (profile.model_name == "ResNet101") split_segments = 4;
        else throw ConfigError("--segments is required for custom profiles");
      }
      if (split_unit > 1) profile = scale_profile(profile, split_unit);
      const SegmentedBlock block =
          balanced_split(profile, split_segments, split_eps);
      const char* unit = split_unit > 1 ? "units" : "MACs";
      std::cout << "model=" << profile.model_name
                << " layers=" << profile.size() << " total=" << block.total()
                << " " << unit << "\n";
      std::int64_t max_seg = 0;
      for (int k = 0; k < block.segments(); ++k) {
        const auto [first, last] = block.segment_ranges[k];
        std::cout << "segment " << (k + 1) << ": layers [" << first << ", "
                  << last << ") workload=" << block.segment_workloads[k];
        if (first < last)
          std::cout << "  (" << profile.layer_names[first] << " .. "
                    << profile.layer_names[last - 1] << ")";
        std::cout << "\n";
        max_seg = std::max(max_seg, block.segment_workloads[k]);
      }
      std::cout << "max_segment=" << max_seg << " " << unit << "\n";
    } else if (dump_cmd->parsed()) {
      const std::string text = profile_to_json(builtin_profile(dump_model));
      if (dump_out.empty())
        std::cout << text << "\n";
      else
        write_text(dump_out, text);
    } else if (cal_cmd->parsed()) {
      const SimConfig base = load_sim_config_file(cal_config);
      const auto seeds = parse_seed_list(cal_seeds);
      if (cal_parallel < 1) throw ConfigError("--parallel must be >= 1");
      const std::int64_t bound =
          calibrate_max_workload(base, cal_target, seeds, cal_parallel);
      if (bound == Constellation::kUnbounded) {
        std::cerr << "note: only an unbounded queue meets the target\n";
        std::cout << "unbounded\n";
      } else {
        std::cout << bound << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
