#include "rcc/simulator.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace rcc {

Simulation::Simulation(std::vector<AgentState> agents, Schedule schedule,
                       Objective objective, BoundingBox box,
                       SimulationSettings settings)
    : agents_(std::move(agents)),
      schedule_(std::move(schedule)),
      objective_(std::move(objective)),
      box_(std::move(box)),
      settings_(settings) {
  const int n = static_cast<int>(agents_.size());
  if (n == 0) {
    throw std::invalid_argument("simulation needs at least one agent");
  }
  if (schedule_.nodes() != n) {
    throw std::invalid_argument("schedule node count differs from agents");
  }
  for (int i = 0; i < n; ++i) {
    if (agents_[i].id != i) {
      throw std::invalid_argument("agent ids must match their node indices");
    }
  }
  settings_.rule.validate();
  if (settings_.activation_probability <= 0.0 ||
      settings_.activation_probability > 1.0) {
    throw std::invalid_argument("activation probability must be in (0,1]");
  }

  verify_streams_.reserve(n);
  for (int i = 0; i < n; ++i) {
    verify_streams_.emplace_back(
        derive_seed(settings_.seed, static_cast<std::uint64_t>(i)));
  }
  activation_stream_ =
      RandomStream(derive_seed(settings_.seed, static_cast<std::uint64_t>(n)));

  // Algorithm start: every node offers its initial basis to the network.
  offers_.reserve(n);
  for (auto& state : agents_) {
    offers_.push_back(state.basis);
    state.last_emitted = state.basis.ids();
    state.ever_emitted = true;
  }
  dirty_.assign(n, std::vector<char>(n, 1));
  for (int i = 0; i < n; ++i) {
    dirty_[i][i] = 0;
  }
  inbox_.resize(n);
  transmissions_.assign(n, 0);
}

bool Simulation::done() const {
  if (settings_.stop == StopMode::FirstHalted) {
    return std::any_of(agents_.begin(), agents_.end(),
                       [](const AgentState& a) { return a.halted; });
  }
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const AgentState& a) { return a.halted; });
}

void Simulation::run_round() {
  const std::int64_t t = ++t_;
  const int n = static_cast<int>(agents_.size());
  const Digraph& graph = schedule_.at(t - 1);

  std::vector<char> active(n, 1);
  if (settings_.activation_probability < 1.0) {
    for (int i = 0; i < n; ++i) {
      active[i] =
          activation_stream_.next_unit() < settings_.activation_probability;
    }
  }

  // Verification.
  std::vector<std::optional<ConstraintSet>> certificates(n);
  for (int i = 0; i < n; ++i) {
    if (active[i] && !agents_[i].halted) {
      certificates[i] = verification_step(agents_[i], verify_streams_[i]);
    }
  }

  // Transmission along the active edges. A halted node no longer computes
  // but still shares its final basis where it has not been seen yet.
  const std::int64_t visible_at =
      settings_.mode == DeliveryMode::Deferred ? t + 1 : t;
  std::vector<char> sent(n, 0);
  for (const auto& [from, to] : graph.edges()) {
    if (active[from] && dirty_[from][to]) {
      inbox_[to].push_back(Pending{from, offers_[from], visible_at});
      dirty_[from][to] = 0;
      sent[from] = 1;
      deliveries_.push_back(Delivery{t, from, to});
    }
  }
  for (int i = 0; i < n; ++i) {
    transmissions_[i] += sent[i];
  }

  // Optimization in ascending agent order.
  for (int i = 0; i < n; ++i) {
    if (!active[i] || agents_[i].halted) {
      continue;
    }
    std::map<std::int32_t, Basis> incoming;
    auto& queue = inbox_[i];
    std::size_t kept = 0;
    for (std::size_t m = 0; m < queue.size(); ++m) {
      if (queue[m].available_at <= t) {
        incoming[queue[m].from] = std::move(queue[m].basis);  // latest wins
      } else {
        if (kept != m) {
          queue[kept] = std::move(queue[m]);
        }
        ++kept;
      }
    }
    queue.resize(kept);

    const auto outcome =
        optimization_step(agents_[i], incoming, certificates[i], objective_,
                          box_, settings_.rule, settings_.lp);
    if (outcome.outgoing.has_value()) {
      offers_[i] = *outcome.outgoing;
      for (int j = 0; j < n; ++j) {
        dirty_[i][j] = static_cast<char>(j != i);
      }
    }

    if (settings_.collect_trace) {
      RoundRecord record;
      record.t = t;
      record.agent = agents_[i].id;
      record.cost = outcome.cost;
      record.theta = agents_[i].theta;
      record.basis_ids = agents_[i].basis.ids();
      record.k = agents_[i].k;
      record.unchanged_count = agents_[i].unchanged_count;
      record.basis_changed = outcome.basis_changed;
      record.transmitted = sent[i] != 0;
      record.halted = agents_[i].halted;
      trace_.push_back(std::move(record));
    }
  }
}

void Simulation::run_to_completion() {
  while (!done()) {
    if (t_ >= settings_.round_cap) {
      throw RoundCapExceeded(settings_.round_cap);
    }
    run_round();
  }
}

}  // namespace rcc
