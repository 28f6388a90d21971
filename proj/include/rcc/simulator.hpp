#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rcc/agent.hpp"
#include "rcc/graph.hpp"

namespace rcc {

// When a basis sent at round t becomes visible to the recipient: next round
// (models transmission delay) or within the same round, before the
// recipient's optimization.
enum class DeliveryMode { Deferred, SynchronousInRound };

// Run until every agent halts, or stop as soon as the first one does (a
// certified agent could broadcast a stop in a deployment).
enum class StopMode { AllHalted, FirstHalted };

struct SimulationSettings {
  DeliveryMode mode = DeliveryMode::Deferred;
  StopMode stop = StopMode::AllHalted;
  HaltRule rule{};
  double activation_probability = 1.0;  // per-node per-tick activity
  std::uint64_t seed = 0;               // verification + activation streams
  LpSettings lp{};
  std::int64_t round_cap = 100000;
  bool collect_trace = true;
};

struct Delivery {
  std::int64_t t = 0;
  int from = 0;
  int to = 0;
};

// Per-agent per-round record streamed to the harness.
struct RoundRecord {
  std::int64_t t = 0;
  std::int32_t agent = 0;
  double cost = 0.0;
  Vector theta;
  std::vector<ConstraintId> basis_ids;
  std::int64_t k = 0;
  int unchanged_count = 0;
  bool basis_changed = false;
  bool transmitted = false;
  bool halted = false;
};

struct RoundCapExceeded : std::runtime_error {
  explicit RoundCapExceeded(std::int64_t cap)
      : std::runtime_error("round cap of " + std::to_string(cap) +
                           " exceeded before halting") {}
};

// Deterministic sequential event loop driving the agents over the schedule.
// Within a round: verification, then deliveries along the active edges, then
// optimization in ascending agent order.
class Simulation {
 public:
  Simulation(std::vector<AgentState> agents, Schedule schedule,
             Objective objective, BoundingBox box, SimulationSettings settings);

  // Executes one universal tick.
  void run_round();
  // Runs rounds until the stop condition holds; throws RoundCapExceeded.
  void run_to_completion();

  bool done() const;
  std::int64_t rounds_completed() const { return t_; }

  const std::vector<AgentState>& agents() const { return agents_; }
  const std::vector<Delivery>& delivery_log() const { return deliveries_; }
  const std::vector<RoundRecord>& trace() const { return trace_; }
  const std::vector<std::int64_t>& transmission_counts() const {
    return transmissions_;
  }

 private:
  struct Pending {
    int from = 0;
    Basis basis;
    std::int64_t available_at = 0;
  };

  std::vector<AgentState> agents_;
  Schedule schedule_;
  Objective objective_;
  BoundingBox box_;
  SimulationSettings settings_;

  std::int64_t t_ = 0;
  std::vector<RandomStream> verify_streams_;
  RandomStream activation_stream_;
  std::vector<Basis> offers_;               // latest emitted basis per agent
  std::vector<std::vector<char>> dirty_;    // dirty_[i][j]: offer unseen by j
  std::vector<std::vector<Pending>> inbox_;
  std::vector<std::int64_t> transmissions_;
  std::vector<Delivery> deliveries_;
  std::vector<RoundRecord> trace_;
};

}  // namespace rcc
