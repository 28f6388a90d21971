#include "rcc/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace rcc {

void Digraph::add_edge(int from, int to) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (from == to) {
    throw std::invalid_argument("self-loops are not allowed");
  }
  if (has_edge(from, to)) {
    return;
  }
  out_[from].push_back(to);
  in_[to].push_back(from);
  ++num_edges_;
}

bool Digraph::has_edge(int from, int to) const {
  const auto& row = out_[from];
  return std::find(row.begin(), row.end(), to) != row.end();
}

std::vector<std::pair<int, int>> Digraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(num_edges_);
  for (int i = 0; i < n_; ++i) {
    for (int j : out_[i]) {
      out.emplace_back(i, j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Digraph Digraph::ring(int n) {
  Digraph g(n);
  for (int i = 0; i < n; ++i) {
    g.add_edge(i, (i + 1) % n);
  }
  return g;
}

Digraph Digraph::complete(int n) {
  Digraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        g.add_edge(i, j);
      }
    }
  }
  return g;
}

namespace {

int reachable_count(const Digraph& g, int start, bool reversed) {
  std::vector<char> seen(g.size(), 0);
  std::queue<int> frontier;
  frontier.push(start);
  seen[start] = 1;
  int count = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    const auto& next = reversed ? g.in_neighbors(u) : g.out_neighbors(u);
    for (int v : next) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        frontier.push(v);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
  if (g.size() <= 1) {
    return true;
  }
  return reachable_count(g, 0, false) == g.size() &&
         reachable_count(g, 0, true) == g.size();
}

int diameter(const Digraph& g) {
  if (!is_strongly_connected(g)) {
    throw std::invalid_argument("diameter requires a strongly connected graph");
  }
  int best = 0;
  std::vector<int> dist(g.size());
  for (int s = 0; s < g.size(); ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> frontier;
    frontier.push(s);
    dist[s] = 0;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : g.out_neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
    best = std::max(best, *std::max_element(dist.begin(), dist.end()));
  }
  return best;
}

Schedule Schedule::fixed(Digraph g) {
  Schedule s;
  s.kind_ = Kind::Static;
  s.window_ = 1;
  s.nodes_ = g.size();
  s.frames_.push_back(std::move(g));
  return s;
}

Schedule Schedule::periodic(std::vector<Digraph> frames, int window) {
  if (frames.empty() || window < 1) {
    throw std::invalid_argument("periodic schedule needs frames and L >= 1");
  }
  const int n = frames.front().size();
  for (const auto& f : frames) {
    if (f.size() != n) {
      throw std::invalid_argument("schedule frames differ in node count");
    }
  }
  Schedule s;
  s.kind_ = Kind::Periodic;
  s.window_ = window;
  s.nodes_ = n;
  s.frames_ = std::move(frames);
  return s;
}

Schedule Schedule::ring_one_edge_per_tick(int n) {
  if (n < 2) {
    throw std::invalid_argument("ring schedule needs n >= 2");
  }
  std::vector<Digraph> frames;
  frames.reserve(n);
  for (int t = 0; t < n; ++t) {
    Digraph g(n);
    g.add_edge(t, (t + 1) % n);
    frames.push_back(std::move(g));
  }
  return periodic(std::move(frames), n);
}

const Digraph& Schedule::at(std::int64_t t) const {
  if (kind_ == Kind::Static) {
    return frames_.front();
  }
  return frames_[static_cast<std::size_t>(t % frames_.size())];
}

bool validate_schedule(const Schedule& schedule, std::int64_t horizon) {
  const int window = schedule.window();
  if (horizon < window) {
    throw std::invalid_argument("horizon shorter than the window length");
  }
  std::int64_t last_start = horizon - window;
  if (schedule.kind() == Schedule::Kind::Static) {
    last_start = 0;
  } else {
    last_start = std::min<std::int64_t>(last_start, schedule.period() - 1);
  }
  for (std::int64_t t = 0; t <= last_start; ++t) {
    Digraph window_union(schedule.nodes());
    for (int offset = 0; offset < window; ++offset) {
      for (const auto& [from, to] : schedule.at(t + offset).edges()) {
        window_union.add_edge(from, to);
      }
    }
    if (!is_strongly_connected(window_union)) {
      return false;
    }
  }
  return true;
}

Digraph generate_random_digraph(int n, int in_degree, RandomStream& rng,
                                int max_attempts) {
  if (n < 2 || in_degree < 1 || in_degree >= n) {
    throw std::invalid_argument("need n >= 2 and 1 <= in_degree < n");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Digraph g(n);
    std::vector<int> pool(n);
    for (int node = 0; node < n; ++node) {
      // Partial Fisher-Yates over the other n-1 nodes.
      int size = 0;
      for (int v = 0; v < n; ++v) {
        if (v != node) {
          pool[size++] = v;
        }
      }
      for (int pick = 0; pick < in_degree; ++pick) {
        const int swap_with =
            pick + static_cast<int>(rng.next_below(size - pick));
        std::swap(pool[pick], pool[swap_with]);
        g.add_edge(pool[pick], node);
      }
    }
    if (is_strongly_connected(g)) {
      return g;
    }
  }
  throw std::runtime_error(
      "failed to sample a strongly connected digraph after " +
      std::to_string(max_attempts) + " attempts");
}

}  // namespace rcc
