#include "rcc/agent.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rcc {

void HaltRule::validate() const {
  if (threshold < 3) {
    throw std::invalid_argument("halt threshold must be at least 3");
  }
}

HaltRule HaltRule::time_varying(int nodes, int window) {
  if (nodes < 1 || window < 1) {
    throw std::invalid_argument("need nodes >= 1 and window >= 1");
  }
  return HaltRule{2 * nodes * window + 1};
}

HaltRule HaltRule::static_graph(int graph_diameter) {
  if (graph_diameter < 1) {
    throw std::invalid_argument("diameter must be >= 1");
  }
  return HaltRule{2 * graph_diameter + 1};
}

bool AgentState::theta_equals(const Vector& other) const {
  if (theta.size() != other.size()) {
    return false;
  }
  // NaN sentinels compare unequal, which is what the first round needs.
  return ((theta - other).array().abs() <= kThetaEqualTol).all();
}

AgentState init_agent(UncertainConstraintSet local_set,
                      const ProbabilisticLevels& levels,
                      const Objective& objective, const BoundingBox& box,
                      const LpSettings& settings) {
  local_set.validate();
  levels.validate();

  AgentState state;
  state.id = local_set.owner;
  state.levels = levels;

  const auto nominal = instantiate(local_set, nominal_sample(local_set));
  const auto outcome = solve_lp(nominal, objective, box, settings);
  if (outcome.status != LpStatus::Optimal) {
    throw std::runtime_error("agent " + std::to_string(local_set.owner) +
                             ": nominal local problem is infeasible");
  }
  state.local_set = std::move(local_set);
  state.theta = outcome.point;
  state.basis = outcome.basis;
  state.k = 1;
  state.unchanged_count = 0;
  state.theta_prev =
      Vector::Constant(outcome.point.size(),
                       std::numeric_limits<double>::quiet_NaN());
  return state;
}

std::optional<ConstraintSet> verification_step(
    AgentState& state, RandomStream& rng,
    const UncertaintyDistribution& distribution) {
  if (state.halted) {
    return std::nullopt;
  }
  // Unchanged candidates already passed verification last round. Equality
  // holds when the basis kept its identity or the point did not move.
  if ((!state.basis_prev_ids.empty() &&
       state.basis_prev_ids == state.basis.ids()) ||
      state.theta_equals(state.theta_prev)) {
    return std::nullopt;
  }
  const auto result =
      verify(state.theta, state.local_set, state.k, state.levels, rng,
             distribution);
  state.k += 1;
  if (result.verified) {
    return std::nullopt;
  }
  return result.certificate;
}

OptimizationOutcome optimization_step(
    AgentState& state, const std::map<std::int32_t, Basis>& incoming,
    const std::optional<ConstraintSet>& certificate, const Objective& objective,
    const BoundingBox& box, const HaltRule& rule, const LpSettings& settings) {
  rule.validate();
  if (state.halted) {
    return {};
  }
  for (const auto& [neighbor, basis] : incoming) {
    state.mailbox[neighbor] = basis;  // latest wins, entries persist
  }

  std::vector<const ConstraintSet*> parts;
  if (certificate.has_value()) {
    parts.push_back(&*certificate);
  }
  parts.push_back(&state.basis);
  for (const auto& [neighbor, basis] : state.mailbox) {
    parts.push_back(&basis);
  }
  const auto merged = merge(std::span<const ConstraintSet* const>(parts));

  const auto outcome = solve_lp(merged, objective, box, settings);
  if (outcome.status != LpStatus::Optimal) {
    throw std::runtime_error("agent " + std::to_string(state.id) +
                             ": merged local problem is infeasible");
  }

  OptimizationOutcome result;
  result.theta_changed = !state.theta_equals(outcome.point);
  result.basis_changed = !state.basis.same_ids(outcome.basis);
  result.cost = outcome.cost;

  state.theta_prev = state.theta;
  state.basis_prev_ids = state.basis.ids();
  state.theta = outcome.point;
  state.basis = outcome.basis;

  if (!result.theta_changed && !certificate.has_value()) {
    state.unchanged_count += 1;
  } else {
    state.unchanged_count = 0;
  }

  const auto ids = state.basis.ids();
  if (!state.ever_emitted || ids != state.last_emitted) {
    state.last_emitted = ids;
    state.ever_emitted = true;
    result.outgoing = state.basis;
  }

  if (check_halt(state, rule)) {
    state.halted = true;
    state.theta_sol = state.theta;
  }
  return result;
}

bool check_halt(const AgentState& state, const HaltRule& rule) {
  rule.validate();
  return state.unchanged_count >= rule.threshold;
}

}  // namespace rcc
