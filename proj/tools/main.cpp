// Command-line front end: generate instances, run experiments, validate
// saved solutions, sweep seeds, and export plot-ready trace data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "rcc/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidationFailed = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitRoundCap = 4;

struct TableRow {
  int agents;
  int degree;
};

// Topology shapes of the reference experiment table.
const std::vector<TableRow> kTableRows = {{10, 3}, {20, 4}, {50, 6}, {100, 7}};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  return out;
}

void write_outputs(const rcc::ExperimentConfig& cfg,
                   const rcc::ExperimentResult& result) {
  if (!cfg.metrics_file.empty()) {
    auto out = open_out(cfg.metrics_file);
    out << rcc::kMetricsCsvHeader << '\n';
    rcc::write_metrics_row(out, cfg, result.metrics);
  }
  if (!cfg.trace_file.empty()) {
    auto out = open_out(cfg.trace_file);
    rcc::write_trace_jsonl(out, result.trace);
  }
  if (!cfg.solution_file.empty()) {
    rcc::save_solution_file(result.solution, cfg.solution_file);
  }
}

int command_generate(const rcc::InstanceSpec& spec, const std::string& out) {
  const auto instance = rcc::generate(spec);
  rcc::save_instance_file(instance, out);
  std::cout << "wrote " << out << " (" << instance.agents() << " agents, "
            << spec.rows_per_agent << " rows each, d=" << spec.dimension
            << ")\n";
  return kExitOk;
}

int command_run(const rcc::ExperimentConfig& cfg) {
  const auto result = rcc::run_experiment(cfg);
  write_outputs(cfg, result);
  std::cout << rcc::kMetricsCsvHeader << '\n';
  rcc::write_metrics_row(std::cout, cfg, result.metrics);
  return kExitOk;
}

int command_validate(const std::string& instance_path,
                     const std::string& solution_path, std::int64_t n_val,
                     std::uint64_t seed, rcc::ValidationCoupling coupling) {
  const auto instance = rcc::load_instance_file(instance_path);
  const auto solution = rcc::load_solution_file(solution_path);
  const double violation =
      rcc::validate_solution(instance, solution.theta, n_val, seed, coupling);
  const double subopt = rcc::validate_basis(instance, solution.basis,
                                            solution.theta, n_val, seed + 1);
  std::cout << "violation_fraction " << violation << '\n'
            << "subopt_fraction " << subopt << '\n'
            << "epsilon " << solution.eps_total << '\n';
  if (violation > solution.eps_total || subopt > solution.eps_total) {
    std::cout << "result: FAIL (fraction exceeds epsilon)\n";
    return kExitValidationFailed;
  }
  std::cout << "result: OK\n";
  return kExitOk;
}

int command_sweep(rcc::ExperimentConfig cfg, int repeats,
                  const std::string& out_path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = open_out(out_path);
    out = &file;
  }
  *out << rcc::kMetricsCsvHeader << '\n';

  const std::uint64_t base_seed = cfg.seed;
  std::vector<double> sums(10, 0.0);
  for (int r = 0; r < repeats; ++r) {
    cfg.seed = base_seed + static_cast<std::uint64_t>(r);
    const auto result = rcc::run_experiment(cfg);
    rcc::write_metrics_row(*out, cfg, result.metrics);
    out->flush();
    const auto& m = result.metrics;
    sums[0] += static_cast<double>(m.graph_diameter);
    sums[1] += static_cast<double>(m.halt_threshold);
    sums[2] += static_cast<double>(m.rounds);
    sums[3] += m.consensus_residual;
    sums[4] += m.basis_cost_spread;
    sums[5] += m.final_cost;
    sums[6] += m.violation_fraction;
    sums[7] += m.subopt_fraction;
    sums[8] += m.avg_transmissions();
    sums[9] += m.avg_final_k();
  }
  for (auto& v : sums) {
    v /= repeats;
  }
  *out << "mean," << cfg.agents << ',' << cfg.rows << ',' << cfg.dimension
       << ',' << cfg.radius << ',' << cfg.eps_total << ',' << cfg.delta_total
       << ',' << (cfg.schedule == rcc::ScheduleKind::StaticRandom ? "static"
                                                                  : "ring")
       << ',' << (cfg.deferred_delivery ? "deferred" : "sync");
  for (const auto v : sums) {
    *out << ',' << v;
  }
  *out << '\n';
  return kExitOk;
}

int command_trace_plot_data(const std::string& trace_path,
                            const std::string& out_path) {
  std::ifstream in(trace_path);
  if (!in) {
    throw std::runtime_error("cannot open trace file " + trace_path);
  }
  const auto trace = rcc::load_trace_jsonl(in);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = open_out(out_path);
    out = &file;
  }
  // Long-form series for the objective-value and distance plots.
  *out << "t,agent,cost,dist\n";
  for (const auto& record : trace) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%lld,%d,%.17g,%.17g\n",
                  static_cast<long long>(record.t), record.agent, record.cost,
                  record.dist);
    *out << buf;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized constraints consensus for uncertain linear "
               "programs over directed time-varying networks"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "emit a random instance file");
  rcc::InstanceSpec spec;
  std::string generate_out = "instance.txt";
  generate->add_option("--agents", spec.agents, "number of agents");
  generate->add_option("--rows", spec.rows_per_agent, "constraints per agent");
  generate->add_option("--dimension", spec.dimension, "decision dimension");
  generate->add_option("--radius", spec.radius, "interval half-width");
  generate->add_option("--seed", spec.seed, "generator seed");
  generate->add_option("--box-limit", spec.box_limit, "bounding box limit");
  generate->add_option("--out", generate_out, "output path");

  // shared run/sweep options
  auto add_overrides = [](CLI::App* cmd, std::string& config_path,
                          std::string& mode) {
    cmd->add_option("--config", config_path, "config file (key = value)");
    cmd->add_option("--mode", mode, "delivery mode: deferred | sync")
        ->check(CLI::IsMember({"deferred", "sync"}));
  };

  // run
  auto* run = app.add_subcommand("run", "execute one experiment");
  std::string run_config, run_mode, run_out_prefix;
  std::uint64_t run_seed = 0;
  std::int64_t run_round_cap = 0;
  add_overrides(run, run_config, run_mode);
  auto* run_seed_opt = run->add_option("--seed", run_seed, "master seed");
  auto* run_cap_opt =
      run->add_option("--round-cap", run_round_cap, "round cap");
  run->add_option("--out", run_out_prefix,
                  "output prefix; writes <prefix>.metrics.csv, "
                  "<prefix>.trace.jsonl and <prefix>.solution.txt");

  // validate
  auto* validate = app.add_subcommand(
      "validate", "a-posteriori Monte Carlo checks on a saved solution");
  std::string val_instance, val_solution, val_coupling = "joint";
  std::int64_t val_n = 10000;
  std::uint64_t val_seed = 1;
  validate->add_option("--instance", val_instance, "instance file")
      ->required();
  validate->add_option("--solution", val_solution, "solution file")
      ->required();
  validate->add_option("--nval", val_n, "validation sample count");
  validate->add_option("--seed", val_seed, "validation seed");
  validate->add_option("--coupling", val_coupling, "joint | per-agent")
      ->check(CLI::IsMember({"joint", "per-agent"}));

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "replicate a table row over several seeds");
  std::string sweep_config, sweep_mode, sweep_out;
  int sweep_row = 0, sweep_repeats = 10;
  std::uint64_t sweep_seed = 1;
  add_overrides(sweep, sweep_config, sweep_mode);
  sweep->add_option("--row", sweep_row, "table row preset (1-4)")
      ->check(CLI::Range(1, 4));
  sweep->add_option("--repeats", sweep_repeats, "number of seeded runs")
      ->check(CLI::PositiveNumber);
  auto* sweep_seed_opt =
      sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

  // trace-plot-data
  auto* plot = app.add_subcommand(
      "trace-plot-data", "convert a trace to plot-ready CSV series");
  std::string plot_trace, plot_out;
  plot->add_option("--trace", plot_trace, "trace file (one record per line)")
      ->required();
  plot->add_option("--out", plot_out, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return command_generate(spec, generate_out);
    }
    if (run->parsed()) {
      rcc::ExperimentConfig cfg;
      if (!run_config.empty()) {
        cfg = rcc::load_config_file(run_config);
      }
      if (run_seed_opt->count() > 0) {
        cfg.seed = run_seed;
      }
      if (!run_mode.empty()) {
        cfg.deferred_delivery = run_mode == "deferred";
      }
      if (run_cap_opt->count() > 0) {
        cfg.round_cap = run_round_cap;
      }
      if (!run_out_prefix.empty()) {
        cfg.metrics_file = run_out_prefix + ".metrics.csv";
        cfg.trace_file = run_out_prefix + ".trace.jsonl";
        cfg.solution_file = run_out_prefix + ".solution.txt";
      }
      cfg.validate();
      return command_run(cfg);
    }
    if (validate->parsed()) {
      const auto coupling = val_coupling == "joint"
                                ? rcc::ValidationCoupling::Joint
                                : rcc::ValidationCoupling::PerAgent;
      return command_validate(val_instance, val_solution, val_n, val_seed,
                              coupling);
    }
    if (sweep->parsed()) {
      rcc::ExperimentConfig cfg;
      if (!sweep_config.empty()) {
        cfg = rcc::load_config_file(sweep_config);
      }
      if (sweep_row > 0) {
        const auto& row = kTableRows[sweep_row - 1];
        cfg.agents = row.agents;
        cfg.degree = row.degree;
        cfg.rows = 100;
        cfg.dimension = 5;
        cfg.radius = 0.2;
      }
      if (sweep_seed_opt->count() > 0) {
        cfg.seed = sweep_seed;
      }
      if (!sweep_mode.empty()) {
        cfg.deferred_delivery = sweep_mode == "deferred";
      }
      cfg.validate();
      return command_sweep(cfg, sweep_repeats, sweep_out);
    }
    if (plot->parsed()) {
      return command_trace_plot_data(plot_trace, plot_out);
    }
  } catch (const rcc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const rcc::RoundCapExceeded& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRoundCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
