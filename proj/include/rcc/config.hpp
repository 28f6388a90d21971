#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rcc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ScheduleKind { StaticRandom, RingOneEdgePerTick };
enum class ValidationCoupling { Joint, PerAgent };

// One experiment, fully specified. Defaults follow the reference setup:
// ten agents with a hundred uncertain rows each in dimension five, a static
// random in-degree-3 digraph, and network-level levels 0.1 / 1e-8 split
// uniformly across agents.
struct ExperimentConfig {
  // Instance.
  int agents = 10;
  int rows = 100;
  int dimension = 5;
  double radius = 0.2;
  double box_limit = 1e6;
  std::string instance_file;  // when set, loaded instead of generated

  // Schedule.
  ScheduleKind schedule = ScheduleKind::StaticRandom;
  int degree = 3;
  double activation = 1.0;

  // Probabilistic levels, split as eps_i = eps_total / agents.
  double eps_total = 0.1;
  double delta_total = 1e-8;

  // Halting: 0 means automatic (2*diameter+1 static, 2nL+1 periodic).
  int halt_threshold = 0;

  // Execution.
  std::uint64_t seed = 1;
  bool deferred_delivery = true;
  bool stop_at_first_halt = false;
  std::int64_t round_cap = 100000;

  // A-posteriori validation.
  std::int64_t n_val = 10000;
  ValidationCoupling validation = ValidationCoupling::Joint;

  // Outputs (empty = not written).
  std::string trace_file;
  std::string metrics_file;
  std::string solution_file;

  void validate() const;
};

// Parses the line-oriented `key = value` format ('#' starts a comment).
// Unknown keys and malformed values raise ConfigError with the line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace rcc
