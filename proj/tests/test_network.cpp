#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rcc/graph.hpp"

using namespace rcc;

TEST_CASE("strong connectivity on rings and near-rings") {
  const auto ring = Digraph::ring(5);
  CHECK(is_strongly_connected(ring));

  Digraph broken(5);
  for (int i = 0; i < 4; ++i) {
    broken.add_edge(i, (i + 1) % 5);  // drop the closing edge 4 -> 0
  }
  CHECK_FALSE(is_strongly_connected(broken));

  CHECK(is_strongly_connected(Digraph(1)));  // vacuous single node
}

TEST_CASE("diameter of canonical graphs") {
  CHECK(diameter(Digraph::ring(4)) == 3);
  CHECK(diameter(Digraph::ring(9)) == 8);
  CHECK(diameter(Digraph::complete(6)) == 1);

  Digraph broken(3);
  broken.add_edge(0, 1);
  broken.add_edge(1, 2);
  CHECK_THROWS_AS(diameter(broken), std::invalid_argument);
}

TEST_CASE("self-loops and bad endpoints are rejected") {
  Digraph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::invalid_argument);
}

TEST_CASE("static schedule validation") {
  const auto good = Schedule::fixed(Digraph::ring(4));
  CHECK(validate_schedule(good, 100));

  const auto empty = Schedule::fixed(Digraph(4));
  CHECK_FALSE(validate_schedule(empty, 100));
}

TEST_CASE("one-edge-per-tick ring covers the cycle within L = n ticks") {
  const int n = 6;
  const auto schedule = Schedule::ring_one_edge_per_tick(n);
  CHECK(schedule.window() == n);
  CHECK(schedule.period() == n);
  CHECK(validate_schedule(schedule, 10 * n));
  for (std::int64_t t = 0; t < 3 * n; ++t) {
    CHECK(schedule.at(t).num_edges() == 1);
  }
}

TEST_CASE("under-length windows fail validation") {
  // Two alternating half-rings need both frames to connect the graph.
  Digraph forward(4);
  forward.add_edge(0, 1);
  forward.add_edge(1, 2);
  Digraph backward(4);
  backward.add_edge(2, 3);
  backward.add_edge(3, 0);
  auto split = Schedule::periodic({forward, backward}, 1);
  CHECK_FALSE(validate_schedule(split, 50));
  auto joined = Schedule::periodic({forward, backward}, 2);
  CHECK(validate_schedule(joined, 50));
}

TEST_CASE("random digraphs have the exact in-degree and connect strongly") {
  RandomStream rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = generate_random_digraph(10, 3, rng);
    CHECK(is_strongly_connected(g));
    for (int node = 0; node < 10; ++node) {
      CHECK(g.in_neighbors(node).size() == 3);
    }
  }
}

TEST_CASE("two nodes with in-degree one force the 2-cycle") {
  RandomStream rng(11);
  const auto g = generate_random_digraph(2, 1, rng);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
}

TEST_CASE("generation is deterministic in the seed") {
  RandomStream a(99);
  RandomStream b(99);
  const auto ga = generate_random_digraph(12, 4, a);
  const auto gb = generate_random_digraph(12, 4, b);
  CHECK(ga.edges() == gb.edges());
}

TEST_CASE("larger generated graphs stay strongly connected") {
  RandomStream rng(123);
  int diameter_sum = 0;
  const int repeats = 20;
  for (int trial = 0; trial < repeats; ++trial) {
    const auto g = generate_random_digraph(100, 7, rng);
    CHECK(is_strongly_connected(g));
    diameter_sum += diameter(g);
  }
  // Sparse 100-node graphs are a few hops across.
  CHECK(diameter_sum >= 2 * repeats);
  CHECK(diameter_sum <= 6 * repeats);
}
