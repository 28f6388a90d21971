#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rcc/constraints.hpp"
#include "rcc/uncertainty.hpp"

namespace rcc {

// Parameters of one randomly generated distributed robust LP.
struct InstanceSpec {
  int agents = 10;
  int rows_per_agent = 100;
  int dimension = 5;
  double radius = 0.2;  // interval half-width, replicated entrywise
  std::uint64_t seed = 0;
  double box_limit = 1e6;

  void validate() const;
};

// A full problem: shared objective, one uncertain constraint set per agent,
// and the bounding box housing every local solve.
struct Instance {
  Objective objective{Vector::Zero(1)};
  std::vector<UncertainConstraintSet> sets;
  BoundingBox box;

  int dimension() const { return objective.dimension(); }
  int agents() const { return static_cast<int>(sets.size()); }
};

// Random instance following the feasible-by-construction recipe: nominal
// entries and the objective are standard normal, and each right-hand side is
// the Euclidean norm of its nominal row, which keeps the origin feasible for
// every agent at every uncertainty realization with radius below one.
Instance generate(const InstanceSpec& spec);

// Smallest slack b - a . theta over all nominal rows of all agents and the
// box faces; positive iff strictly feasible everywhere.
double feasibility_margin(const Instance& instance, const Vector& theta);

// Plain-text serialization, full round-trip precision.
void save_instance(const Instance& instance, std::ostream& out);
void save_instance_file(const Instance& instance, const std::string& path);
Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);

}  // namespace rcc
