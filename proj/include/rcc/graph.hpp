#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rcc/rng.hpp"

namespace rcc {

// Directed communication graph; an edge (i, j) means i transmits to j.
// Nodes are 0-based. Self-loops are rejected.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : n_(n), out_(n), in_(n) {}

  int size() const { return n_; }
  void add_edge(int from, int to);
  bool has_edge(int from, int to) const;
  int num_edges() const { return num_edges_; }

  const std::vector<int>& out_neighbors(int node) const { return out_[node]; }
  const std::vector<int>& in_neighbors(int node) const { return in_[node]; }

  std::vector<std::pair<int, int>> edges() const;

  static Digraph ring(int n);
  static Digraph complete(int n);

 private:
  int n_ = 0;
  int num_edges_ = 0;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

// True iff every node reaches every other along directed edges.
bool is_strongly_connected(const Digraph& g);

// Longest shortest directed path over ordered pairs; requires strong
// connectivity.
int diameter(const Digraph& g);

// Communication schedule over universal time. Static schedules repeat one
// graph; periodic ones cycle through explicit per-tick frames. Assumption:
// the union of edges over any window of L consecutive ticks is strongly
// connected, which validate_schedule checks.
class Schedule {
 public:
  enum class Kind { Static, Periodic };

  static Schedule fixed(Digraph g);
  static Schedule periodic(std::vector<Digraph> frames, int window);
  // One ring edge per tick: edge (t mod n) -> (t+1 mod n); window L = n.
  static Schedule ring_one_edge_per_tick(int n);

  Kind kind() const { return kind_; }
  int window() const { return window_; }
  int period() const { return static_cast<int>(frames_.size()); }
  int nodes() const { return nodes_; }
  const Digraph& at(std::int64_t t) const;

 private:
  Kind kind_ = Kind::Static;
  int window_ = 1;
  int nodes_ = 0;
  std::vector<Digraph> frames_;
};

// Checks window-union strong connectivity for every window start in
// [0, horizon - L]; for periodic schedules one period of starts suffices.
bool validate_schedule(const Schedule& schedule, std::int64_t horizon);

// Random digraph in which every node has exactly `in_degree` distinct
// in-neighbors; resamples until strongly connected.
Digraph generate_random_digraph(int n, int in_degree, RandomStream& rng,
                                int max_attempts = 10000);

}  // namespace rcc
