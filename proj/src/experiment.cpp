#include "rcc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rcc/lp_solver.hpp"

namespace rcc {
namespace {

// Stream identifiers hung off the master seed; one per independent
// randomness consumer so reruns and sweeps stay reproducible.
constexpr std::uint64_t kInstanceStream = 101;
constexpr std::uint64_t kGraphStream = 102;
constexpr std::uint64_t kSimulationStream = 103;
// Both validators run on one stream: trial j then sees the same realization
// in each, and a suboptimality event is a violation event by construction.
constexpr std::uint64_t kValidationStream = 104;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double RunMetrics::avg_transmissions() const {
  if (transmissions.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto v : transmissions) {
    sum += static_cast<double>(v);
  }
  return sum / static_cast<double>(transmissions.size());
}

double RunMetrics::avg_final_k() const {
  if (final_k.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto v : final_k) {
    sum += static_cast<double>(v);
  }
  return sum / static_cast<double>(final_k.size());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  ExperimentResult result;
  if (!cfg.instance_file.empty()) {
    result.instance = load_instance_file(cfg.instance_file);
  } else {
    InstanceSpec spec;
    spec.agents = cfg.agents;
    spec.rows_per_agent = cfg.rows;
    spec.dimension = cfg.dimension;
    spec.radius = cfg.radius;
    spec.seed = derive_seed(cfg.seed, kInstanceStream);
    spec.box_limit = cfg.box_limit;
    result.instance = generate(spec);
  }
  const Instance& instance = result.instance;
  const int n = instance.agents();

  Schedule schedule = Schedule::fixed(Digraph(1));
  int graph_diameter = 0;
  if (cfg.schedule == ScheduleKind::StaticRandom) {
    RandomStream graph_rng(derive_seed(cfg.seed, kGraphStream));
    Digraph graph = generate_random_digraph(n, cfg.degree, graph_rng);
    graph_diameter = diameter(graph);
    schedule = Schedule::fixed(std::move(graph));
  } else {
    schedule = Schedule::ring_one_edge_per_tick(n);
  }
  if (!validate_schedule(schedule, 2 * schedule.window())) {
    throw ConfigError("schedule fails uniform joint strong connectivity");
  }

  // Automatic halting thresholds. The 2*diameter+1 and 2nL+1 rules assume a
  // basis sent in round t is usable in round t; deferred delivery adds one
  // round per hop, so the automatic choice widens accordingly.
  HaltRule rule;
  if (cfg.halt_threshold > 0) {
    rule = HaltRule{cfg.halt_threshold};
  } else if (cfg.schedule == ScheduleKind::StaticRandom) {
    rule = HaltRule::static_graph(cfg.deferred_delivery ? 2 * graph_diameter
                                                        : graph_diameter);
  } else {
    rule = HaltRule::time_varying(
        n, cfg.deferred_delivery ? schedule.window() + 1 : schedule.window());
  }

  const ProbabilisticLevels levels{cfg.eps_total / n, cfg.delta_total / n};

  std::vector<AgentState> agents;
  agents.reserve(n);
  for (const auto& set : instance.sets) {
    agents.push_back(init_agent(set, levels, instance.objective,
                                instance.box));
  }

  SimulationSettings sim_settings;
  sim_settings.mode = cfg.deferred_delivery ? DeliveryMode::Deferred
                                            : DeliveryMode::SynchronousInRound;
  sim_settings.stop = cfg.stop_at_first_halt ? StopMode::FirstHalted
                                             : StopMode::AllHalted;
  sim_settings.rule = rule;
  sim_settings.activation_probability = cfg.activation;
  sim_settings.seed = derive_seed(cfg.seed, kSimulationStream);
  sim_settings.round_cap = cfg.round_cap;

  Simulation sim(std::move(agents), std::move(schedule), instance.objective,
                 instance.box, sim_settings);
  sim.run_to_completion();

  const auto& final_agents = sim.agents();
  const auto halted = std::find_if(final_agents.begin(), final_agents.end(),
                                   [](const AgentState& a) { return a.halted; });
  if (halted == final_agents.end()) {
    throw std::runtime_error("run finished with no halted agent");
  }

  result.solution.theta = halted->theta_sol;
  result.solution.basis = halted->basis;
  result.solution.cost = instance.objective.value(halted->theta_sol);
  result.solution.eps_total = cfg.eps_total;
  result.solution.delta_total = cfg.delta_total;

  RunMetrics& metrics = result.metrics;
  metrics.rounds = sim.rounds_completed();
  metrics.transmissions = sim.transmission_counts();
  metrics.final_k.reserve(n);
  for (const auto& agent : final_agents) {
    metrics.final_k.push_back(agent.k);
  }
  metrics.theta_sol = result.solution.theta;
  metrics.final_cost = result.solution.cost;
  metrics.halt_threshold = rule.threshold;
  metrics.graph_diameter = graph_diameter;

  double residual = 0.0;
  double cost_lo = std::numeric_limits<double>::infinity();
  double cost_hi = -std::numeric_limits<double>::infinity();
  for (const auto& agent : final_agents) {
    const Vector& candidate = agent.halted ? agent.theta_sol : agent.theta;
    for (const auto& other : final_agents) {
      const Vector& peer = other.halted ? other.theta_sol : other.theta;
      residual = std::max(residual, (candidate - peer).norm());
    }
    const double cost = instance.objective.value(candidate);
    cost_lo = std::min(cost_lo, cost);
    cost_hi = std::max(cost_hi, cost);
  }
  metrics.consensus_residual = residual;
  metrics.basis_cost_spread = cost_hi - cost_lo;

  const std::uint64_t validation_seed = derive_seed(cfg.seed, kValidationStream);
  metrics.violation_fraction =
      validate_solution(instance, result.solution.theta, cfg.n_val,
                        validation_seed, cfg.validation);
  metrics.subopt_fraction =
      validate_basis(instance, result.solution.basis, result.solution.theta,
                     cfg.n_val, validation_seed);

  result.trace.reserve(sim.trace().size());
  for (const auto& record : sim.trace()) {
    TraceRecord out;
    out.t = record.t;
    out.agent = record.agent;
    out.cost = record.cost;
    out.dist = (record.theta - result.solution.theta).norm();
    out.basis_changed = record.basis_changed;
    out.transmitted = record.transmitted;
    out.k = record.k;
    out.unchanged_count = record.unchanged_count;
    out.basis_ids = record.basis_ids;
    result.trace.push_back(std::move(out));
  }
  return result;
}

double validate_solution(const Instance& instance, const Vector& theta,
                         std::int64_t n_val, std::uint64_t seed,
                         ValidationCoupling coupling) {
  if (n_val < 1) {
    throw std::invalid_argument("n_val must be positive");
  }
  const auto& distribution = uniform_interval_distribution();
  const int n = instance.agents();

  std::vector<FeasibilityProbe> probes;
  probes.reserve(n);
  for (const auto& set : instance.sets) {
    probes.emplace_back(set, theta, 1e-9);
  }

  std::int64_t violated = 0;
  Matrix entries;
  if (coupling == ValidationCoupling::Joint) {
    // Every agent draws in every trial, so the stream stays aligned with
    // validate_basis run on the same seed.
    RandomStream rng(seed);
    for (std::int64_t trial = 0; trial < n_val; ++trial) {
      bool bad = false;
      for (int a = 0; a < n; ++a) {
        distribution.fill(instance.sets[a], rng, entries);
        bad = bad || !probes[a].feasible(entries);
      }
      violated += bad ? 1 : 0;
    }
  } else {
    std::vector<RandomStream> streams;
    streams.reserve(n);
    for (int a = 0; a < n; ++a) {
      streams.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(a)));
    }
    for (std::int64_t trial = 0; trial < n_val; ++trial) {
      bool bad = false;
      for (int a = 0; a < n; ++a) {
        distribution.fill(instance.sets[a], streams[a], entries);
        bad = bad || !probes[a].feasible(entries);
      }
      violated += bad ? 1 : 0;
    }
  }
  return static_cast<double>(violated) / static_cast<double>(n_val);
}

double validate_basis(const Instance& instance, const Basis& basis_sol,
                      const Vector& theta_sol, std::int64_t n_val,
                      std::uint64_t seed, const LpSettings& settings) {
  if (n_val < 1) {
    throw std::invalid_argument("n_val must be positive");
  }
  const auto& distribution = uniform_interval_distribution();
  const int n = instance.agents();
  const double base_cost =
      cost_of(basis_sol, instance.objective, instance.box, settings);
  const double strictness = 1e-9 * std::max(1.0, std::abs(base_cost));

  std::vector<FeasibilityProbe> probes;
  probes.reserve(n);
  for (const auto& set : instance.sets) {
    probes.emplace_back(set, theta_sol, 1e-9);
  }

  RandomStream rng(seed);
  std::int64_t raised = 0;
  std::vector<UncertaintySample> samples(n);
  for (std::int64_t trial = 0; trial < n_val; ++trial) {
    bool violated = false;
    for (int a = 0; a < n; ++a) {
      distribution.fill(instance.sets[a], rng, samples[a].entries);
      violated = violated || !probes[a].feasible(samples[a].entries);
    }
    if (!violated) {
      // theta_sol stays feasible and optimal, so the adjoined problem has
      // the same cost; only violated realizations can raise it.
      continue;
    }
    std::vector<ConstraintSet> realized;
    std::vector<const ConstraintSet*> parts;
    realized.reserve(n);
    parts.reserve(n + 1);
    parts.push_back(&basis_sol);
    for (int a = 0; a < n; ++a) {
      samples[a].tag = sample_tag(samples[a].entries);
      realized.push_back(instantiate(instance.sets[a], samples[a]));
    }
    for (const auto& set : realized) {
      parts.push_back(&set);
    }
    const double cost = cost_of(merge(std::span<const ConstraintSet* const>(parts)),
                                instance.objective, instance.box, settings);
    if (cost > base_cost + strictness) {
      ++raised;
    }
  }
  return static_cast<double>(raised) / static_cast<double>(n_val);
}

void save_solution(const Solution& solution, std::ostream& out) {
  const int d = static_cast<int>(solution.theta.size());
  out << "rcc-solution v1\n";
  out << "dimension " << d << "\n";
  out << "levels " << fmt(solution.eps_total) << ' '
      << fmt(solution.delta_total) << "\n";
  out << "cost " << fmt(solution.cost) << "\n";
  out << "theta";
  for (int j = 0; j < d; ++j) {
    out << ' ' << fmt(solution.theta[j]);
  }
  out << "\nbasis " << solution.basis.size() << "\n";
  for (const auto& h : solution.basis) {
    out << "row " << h.id.owner << ' ' << h.id.row << ' ' << h.id.tag << ' '
        << fmt(h.offset);
    for (int j = 0; j < d; ++j) {
      out << ' ' << fmt(h.normal[j]);
    }
    out << "\n";
  }
}

void save_solution_file(const Solution& solution, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  save_solution(solution, out);
}

Solution load_solution(std::istream& in) {
  auto fail = [](const std::string& message) -> void {
    throw std::runtime_error("solution file: " + message);
  };

  std::string magic, version;
  in >> magic >> version;
  if (magic != "rcc-solution" || version != "v1") {
    fail("bad header");
  }
  std::string keyword;
  int d = 0;
  Solution solution;
  in >> keyword >> d;
  if (keyword != "dimension" || d < 1) {
    fail("bad dimension");
  }
  in >> keyword >> solution.eps_total >> solution.delta_total;
  if (keyword != "levels") {
    fail("bad levels");
  }
  in >> keyword >> solution.cost;
  if (keyword != "cost") {
    fail("bad cost");
  }
  in >> keyword;
  if (keyword != "theta") {
    fail("bad theta");
  }
  solution.theta.resize(d);
  for (int j = 0; j < d; ++j) {
    if (!(in >> solution.theta[j])) {
      fail("truncated theta");
    }
  }
  std::size_t rows = 0;
  in >> keyword >> rows;
  if (keyword != "basis") {
    fail("bad basis count");
  }
  solution.basis = Basis(d);
  for (std::size_t r = 0; r < rows; ++r) {
    in >> keyword;
    if (keyword != "row") {
      fail("bad basis row");
    }
    Halfspace h;
    in >> h.id.owner >> h.id.row >> h.id.tag >> h.offset;
    h.normal.resize(d);
    for (int j = 0; j < d; ++j) {
      if (!(in >> h.normal[j])) {
        fail("truncated basis row");
      }
    }
    solution.basis.add(std::move(h));
  }
  return solution;
}

Solution load_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open solution file " + path);
  }
  return load_solution(in);
}

const char* const kMetricsCsvHeader =
    "seed,agents,rows,dimension,radius,eps_total,delta_total,schedule,mode,"
    "diameter,halt_threshold,rounds,consensus_residual,basis_cost_spread,"
    "final_cost,violation_fraction,subopt_fraction,avg_transmissions,"
    "avg_final_k";

void write_metrics_row(std::ostream& out, const ExperimentConfig& cfg,
                       const RunMetrics& metrics) {
  out << cfg.seed << ',' << cfg.agents << ',' << cfg.rows << ','
      << cfg.dimension << ',' << fmt(cfg.radius) << ',' << fmt(cfg.eps_total)
      << ',' << fmt(cfg.delta_total) << ','
      << (cfg.schedule == ScheduleKind::StaticRandom ? "static" : "ring")
      << ',' << (cfg.deferred_delivery ? "deferred" : "sync") << ','
      << metrics.graph_diameter << ',' << metrics.halt_threshold << ','
      << metrics.rounds << ',' << fmt(metrics.consensus_residual) << ','
      << fmt(metrics.basis_cost_spread) << ',' << fmt(metrics.final_cost)
      << ',' << fmt(metrics.violation_fraction) << ','
      << fmt(metrics.subopt_fraction) << ','
      << fmt(metrics.avg_transmissions()) << ',' << fmt(metrics.avg_final_k())
      << '\n';
}

void write_trace_jsonl(std::ostream& out,
                       const std::vector<TraceRecord>& trace) {
  for (const auto& record : trace) {
    nlohmann::json j;
    j["t"] = record.t;
    j["agent"] = record.agent;
    j["cost"] = record.cost;
    j["dist"] = record.dist;
    j["basis_changed"] = record.basis_changed;
    j["transmitted"] = record.transmitted;
    j["k"] = record.k;
    j["unchanged"] = record.unchanged_count;
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& id : record.basis_ids) {
      ids.push_back(id.str());
    }
    j["basis"] = std::move(ids);
    out << j.dump() << '\n';
  }
}

std::vector<TraceRecord> load_trace_jsonl(std::istream& in) {
  std::vector<TraceRecord> trace;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("trace line " + std::to_string(line_number) +
                               ": " + e.what());
    }
    TraceRecord record;
    record.t = j.at("t").get<std::int64_t>();
    record.agent = j.at("agent").get<std::int32_t>();
    record.cost = j.at("cost").get<double>();
    record.dist = j.at("dist").get<double>();
    record.basis_changed = j.at("basis_changed").get<bool>();
    record.transmitted = j.at("transmitted").get<bool>();
    record.k = j.at("k").get<std::int64_t>();
    record.unchanged_count = j.at("unchanged").get<int>();
    for (const auto& id : j.at("basis")) {
      record.basis_ids.push_back(ConstraintId::parse(id.get<std::string>()));
    }
    trace.push_back(std::move(record));
  }
  return trace;
}

}  // namespace rcc
