#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rcc/constraints.hpp"
#include "rcc/lp_solver.hpp"
#include "rcc/uncertainty.hpp"

namespace rcc {

// Candidate points are compared componentwise at this absolute tolerance;
// with a deterministic solver repeated solves are bit-stable, so this is
// effectively an exactness guard.
inline constexpr double kThetaEqualTol = 1e-12;

// Local halting rule: the candidate must survive unchanged, with empty
// violation certificates, for `threshold` consecutive rounds. The sound
// choices are 2nL+1 for jointly connected time-varying graphs and
// 2*diameter+1 for static ones.
struct HaltRule {
  int threshold = 3;

  void validate() const;
  static HaltRule time_varying(int nodes, int window);
  static HaltRule static_graph(int graph_diameter);
};

// Full per-node state of the algorithm.
struct AgentState {
  std::int32_t id = 0;
  UncertainConstraintSet local_set;
  ProbabilisticLevels levels;

  Vector theta;       // current candidate
  Vector theta_prev;  // candidate of the previous round (NaN sentinel at t=1)
  Basis basis;
  std::vector<ConstraintId> basis_prev_ids;  // basis of the previous round
  std::int64_t k = 1;  // verification counter
  int unchanged_count = 0;
  std::map<std::int32_t, Basis> mailbox;  // latest basis per in-neighbor
  bool halted = false;
  Vector theta_sol;  // published on halt

  std::vector<ConstraintId> last_emitted;  // ids of the last outgoing basis
  bool ever_emitted = false;

  bool theta_equals(const Vector& other) const;
};

// Initialization: candidate and basis from the nominal local problem.
// Throws when the nominal problem is infeasible (configuration error).
AgentState init_agent(UncertainConstraintSet local_set,
                      const ProbabilisticLevels& levels,
                      const Objective& objective, const BoundingBox& box,
                      const LpSettings& settings = {});

// Verification step. Skipped (no sampling, k untouched) when the candidate
// is unchanged since the previous round; otherwise draws the Monte Carlo
// budget for the current k, increments k, and returns the instantiated
// constraint set at the first violating sample, if any.
std::optional<ConstraintSet> verification_step(
    AgentState& state, RandomStream& rng,
    const UncertaintyDistribution& distribution =
        uniform_interval_distribution());

struct OptimizationOutcome {
  std::optional<Basis> outgoing;  // present only when the basis changed
                                  // since the last emission
  bool theta_changed = false;
  bool basis_changed = false;
  double cost = 0.0;
};

// Optimization step: fold fresh neighbor bases into the mailbox, solve the
// local problem over certificate + own basis + mailbox bases, update the
// unchanged counter and halting state.
OptimizationOutcome optimization_step(
    AgentState& state, const std::map<std::int32_t, Basis>& incoming,
    const std::optional<ConstraintSet>& certificate, const Objective& objective,
    const BoundingBox& box, const HaltRule& rule,
    const LpSettings& settings = {});

bool check_halt(const AgentState& state, const HaltRule& rule);

}  // namespace rcc
