#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rcc/experiment.hpp"

using namespace rcc;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.agents = 6;
  cfg.rows = 12;
  cfg.dimension = 3;
  cfg.radius = 0.2;
  cfg.degree = 2;
  cfg.seed = 5;
  cfg.n_val = 2000;
  return cfg;
}

// Single-agent family with a closed-form violation probability: the row
// (1 + q) theta <= 1 with q uniform on [-1/2, 1/2] is violated at theta = 1
// exactly when q > 0.
Instance half_violation_instance() {
  Instance instance;
  instance.objective = Objective(Vector::Constant(1, -1.0));
  instance.box = BoundingBox::centered(1, 100.0);
  UncertainConstraintSet set;
  set.nominal = Matrix::Constant(1, 1, 1.0);
  set.radius = Matrix::Constant(1, 1, 0.5);
  set.rhs = Vector::Constant(1, 1.0);
  set.owner = 0;
  instance.sets.push_back(std::move(set));
  return instance;
}

}  // namespace

TEST_CASE("config text parses with defaults and overrides") {
  const auto cfg = parse_config(
      "# comment\n"
      "agents = 4\n"
      "rows = 9\n"
      "dimension = 3\n"
      "radius = 0.1   # trailing comment\n"
      "schedule = ring\n"
      "mode = sync\n"
      "stop = first\n"
      "halt_threshold = auto\n"
      "n_val = 500\n");
  CHECK(cfg.agents == 4);
  CHECK(cfg.rows == 9);
  CHECK(cfg.radius == 0.1);
  CHECK(cfg.schedule == ScheduleKind::RingOneEdgePerTick);
  CHECK_FALSE(cfg.deferred_delivery);
  CHECK(cfg.stop_at_first_halt);
  CHECK(cfg.halt_threshold == 0);
  CHECK(cfg.n_val == 500);
  // untouched fields keep their defaults
  CHECK(cfg.eps_total == 0.1);
  CHECK(cfg.round_cap == 100000);
}

TEST_CASE("config errors carry the offending line") {
  auto expect_error = [](const std::string& text, const std::string& what) {
    try {
      (void)parse_config(text);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(what) != std::string::npos);
    }
  };
  expect_error("agents 4\n", "line 1");
  expect_error("bogus_key = 3\n", "bogus_key");
  expect_error("agents = 4\nrows = x\n", "line 2");
  expect_error("schedule = mesh\n", "static");
  expect_error("agents = 0\n", "agents");
  expect_error("eps_total = 1.5\n", "eps_total");
}

TEST_CASE("radius-zero experiments have zero violation and suboptimality") {
  auto cfg = small_config();
  cfg.radius = 0.0;
  cfg.n_val = 500;
  const auto result = run_experiment(cfg);
  CHECK(result.metrics.violation_fraction == 0.0);
  CHECK(result.metrics.subopt_fraction == 0.0);
  CHECK(result.metrics.consensus_residual <= 1e-9);
}

TEST_CASE("small experiments halt, agree and are probabilistically safe") {
  const auto cfg = small_config();
  const auto result = run_experiment(cfg);
  const auto& m = result.metrics;

  CHECK(m.rounds > 0);
  CHECK(m.consensus_residual <= 1e-9);
  CHECK(m.basis_cost_spread <= 1e-9 * std::max(1.0, std::abs(m.final_cost)));
  CHECK(m.violation_fraction >= 0.0);
  CHECK(m.violation_fraction <= cfg.eps_total);
  CHECK(m.subopt_fraction <= m.violation_fraction + 0.05);
  CHECK(m.transmissions.size() == 6);
  CHECK(m.final_k.size() == 6);
  for (const auto k : m.final_k) {
    CHECK(k >= 1);
  }

  // Every agent's cost series is non-decreasing and ends at the final cost.
  std::map<int, double> last;
  for (const auto& record : result.trace) {
    const auto it = last.find(record.agent);
    if (it != last.end()) {
      CHECK(record.cost >= it->second);
    }
    last[record.agent] = record.cost;
  }
  for (const auto& [agent, cost] : last) {
    CHECK(cost == doctest::Approx(m.final_cost).epsilon(1e-9));
  }
}

TEST_CASE("identical seeds reproduce identical metrics and traces") {
  const auto cfg = small_config();
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);

  CHECK(a.metrics.rounds == b.metrics.rounds);
  CHECK(a.metrics.theta_sol == b.metrics.theta_sol);
  CHECK(a.metrics.violation_fraction == b.metrics.violation_fraction);
  CHECK(a.metrics.subopt_fraction == b.metrics.subopt_fraction);
  CHECK(a.metrics.transmissions == b.metrics.transmissions);
  CHECK(a.metrics.final_k == b.metrics.final_k);

  std::ostringstream ta, tb;
  write_trace_jsonl(ta, a.trace);
  write_trace_jsonl(tb, b.trace);
  CHECK(ta.str() == tb.str());

  std::ostringstream ma, mb;
  write_metrics_row(ma, cfg, a.metrics);
  write_metrics_row(mb, cfg, b.metrics);
  CHECK(ma.str() == mb.str());
}

TEST_CASE("experiments can run from a saved instance file") {
  auto cfg = small_config();
  cfg.n_val = 200;
  const auto direct = run_experiment(cfg);

  const std::string path = "harness_instance_tmp.txt";
  save_instance_file(direct.instance, path);
  auto from_file = cfg;
  from_file.instance_file = path;
  const auto replay = run_experiment(from_file);
  std::remove(path.c_str());

  CHECK(replay.metrics.theta_sol == direct.metrics.theta_sol);
  CHECK(replay.metrics.rounds == direct.metrics.rounds);
}

TEST_CASE("validators report exact extremes") {
  const auto cfg = small_config();
  const auto result = run_experiment(cfg);

  SUBCASE("an infeasible point violates every trial") {
    const Vector far = Vector::Constant(3, 1e7);  // outside all row norms
    CHECK(validate_solution(result.instance, far, 300, 1) == 1.0);
  }
  SUBCASE("joint and per-agent coupling agree within noise") {
    const auto joint = validate_solution(result.instance,
                                         result.solution.theta, 4000, 11,
                                         ValidationCoupling::Joint);
    const auto split = validate_solution(result.instance,
                                         result.solution.theta, 4000, 11,
                                         ValidationCoupling::PerAgent);
    CHECK(std::abs(joint - split) <= 0.05);
  }
}

TEST_CASE("closed-form half-probability family matches both validators") {
  const auto instance = half_violation_instance();
  const Vector theta = Vector::Constant(1, 1.0);

  Basis basis(1);
  Halfspace row;
  row.normal = Vector::Constant(1, 1.0);
  row.offset = 1.0;
  row.id = {0, 0, ConstraintId::kNominalTag};
  basis.add(row);

  const std::int64_t n_val = 4000;
  const double sigma = std::sqrt(0.25 / static_cast<double>(n_val));
  const double violation = validate_solution(instance, theta, n_val, 21);
  const double subopt = validate_basis(instance, basis, theta, n_val, 22);
  CHECK(std::abs(violation - 0.5) <= 3.0 * sigma);
  CHECK(std::abs(subopt - 0.5) <= 3.0 * sigma);
  // Strict raising equals violation for this non-degenerate family.
  CHECK(subopt <= violation + 3.0 * sigma);
}

TEST_CASE("solution files round-trip") {
  Solution solution;
  solution.theta = (Vector(2) << 1.5, -0.25).finished();
  solution.cost = -3.25;
  solution.eps_total = 0.1;
  solution.delta_total = 1e-8;
  solution.basis = Basis(2);
  Halfspace h;
  h.normal = (Vector(2) << 0.5, -2.0).finished();
  h.offset = 1.25;
  h.id = {3, 7, 0xdeadbeefULL};
  solution.basis.add(h);

  std::stringstream stream;
  save_solution(solution, stream);
  const auto loaded = load_solution(stream);
  CHECK(loaded.theta == solution.theta);
  CHECK(loaded.cost == solution.cost);
  CHECK(loaded.eps_total == solution.eps_total);
  REQUIRE(loaded.basis.size() == 1);
  CHECK(loaded.basis[0].id == solution.basis[0].id);
  CHECK(loaded.basis[0].normal == solution.basis[0].normal);
  CHECK(loaded.basis[0].offset == solution.basis[0].offset);
}

TEST_CASE("trace records round-trip through the line format") {
  auto cfg = small_config();
  cfg.n_val = 100;
  const auto result = run_experiment(cfg);

  std::stringstream stream;
  write_trace_jsonl(stream, result.trace);
  const auto loaded = load_trace_jsonl(stream);
  REQUIRE(loaded.size() == result.trace.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].t == result.trace[i].t);
    CHECK(loaded[i].agent == result.trace[i].agent);
    CHECK(loaded[i].cost == result.trace[i].cost);
    CHECK(loaded[i].dist == result.trace[i].dist);
    CHECK(loaded[i].basis_ids == result.trace[i].basis_ids);
  }
}

TEST_CASE("round cap failures are distinct and reported") {
  auto cfg = small_config();
  cfg.round_cap = 2;  // far too small to converge
  CHECK_THROWS_AS((void)run_experiment(cfg), RoundCapExceeded);
}

TEST_CASE("ring schedules run under the time-varying halt rule") {
  auto cfg = small_config();
  cfg.agents = 4;
  cfg.rows = 8;
  cfg.schedule = ScheduleKind::RingOneEdgePerTick;
  cfg.n_val = 200;

  SUBCASE("same-round visibility uses 2nL+1 directly") {
    cfg.deferred_delivery = false;
    const auto result = run_experiment(cfg);
    CHECK(result.metrics.halt_threshold == 33);  // L = n = 4
    CHECK(result.metrics.consensus_residual <= 1e-9);
  }
  SUBCASE("deferred delivery widens the automatic threshold") {
    const auto result = run_experiment(cfg);
    CHECK(result.metrics.halt_threshold == 41);  // L replaced by L+1
    CHECK(result.metrics.consensus_residual <= 1e-9);
  }
}
