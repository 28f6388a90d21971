#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rcc/config.hpp"
#include "rcc/instance.hpp"
#include "rcc/simulator.hpp"

namespace rcc {

// The consensus output: candidate point, its basis, and the levels it was
// computed under. This is what the a-posteriori validators certify.
struct Solution {
  Vector theta;
  Basis basis;
  double cost = 0.0;
  double eps_total = 0.0;
  double delta_total = 0.0;
};

struct RunMetrics {
  std::vector<std::int64_t> transmissions;  // per agent
  std::vector<std::int64_t> final_k;        // per agent
  std::int64_t rounds = 0;
  Vector theta_sol;
  double final_cost = 0.0;
  double consensus_residual = 0.0;   // max pairwise candidate distance
  double basis_cost_spread = 0.0;    // max pairwise |J(B_i) - J(B_j)|
  double violation_fraction = 0.0;
  double subopt_fraction = 0.0;
  int halt_threshold = 0;  // the resolved value actually used
  int graph_diameter = 0;  // static schedules only

  double avg_transmissions() const;
  double avg_final_k() const;
};

// Figure-style per-round record: objective value and distance to the final
// solution per agent, plus transmission bookkeeping.
struct TraceRecord {
  std::int64_t t = 0;
  std::int32_t agent = 0;
  double cost = 0.0;
  double dist = 0.0;
  bool basis_changed = false;
  bool transmitted = false;
  std::int64_t k = 0;
  int unchanged_count = 0;
  std::vector<ConstraintId> basis_ids;
};

struct ExperimentResult {
  RunMetrics metrics;
  std::vector<TraceRecord> trace;
  Solution solution;
  Instance instance;
};

// Full pipeline: build (or load) the instance, build and validate the
// schedule, run the consensus rounds to halting, then measure the solution
// with fresh Monte Carlo samples. Throws ConfigError for bad setups and
// RoundCapExceeded when the cap is hit first.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Fraction of n_val fresh uncertainty realizations at which theta violates
// some agent's instantiated set. Joint coupling draws all agents' samples
// per trial from one stream; per-agent coupling gives each agent its own
// stream derived from the seed.
double validate_solution(const Instance& instance, const Vector& theta,
                         std::int64_t n_val, std::uint64_t seed,
                         ValidationCoupling coupling =
                             ValidationCoupling::Joint);

// Fraction of trials at which adjoining the full realized constraint
// collection to the basis strictly raises its optimal cost (1e-9 relative
// strictness). theta_sol must be an optimal point of (basis_sol, box).
double validate_basis(const Instance& instance, const Basis& basis_sol,
                      const Vector& theta_sol, std::int64_t n_val,
                      std::uint64_t seed, const LpSettings& settings = {});

// Solution file round-trip (plain text, full precision).
void save_solution(const Solution& solution, std::ostream& out);
void save_solution_file(const Solution& solution, const std::string& path);
Solution load_solution(std::istream& in);
Solution load_solution_file(const std::string& path);

// Metrics CSV with a fixed header, and line-delimited JSON trace records.
extern const char* const kMetricsCsvHeader;
void write_metrics_row(std::ostream& out, const ExperimentConfig& cfg,
                       const RunMetrics& metrics);
void write_trace_jsonl(std::ostream& out,
                       const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> load_trace_jsonl(std::istream& in);

}  // namespace rcc
