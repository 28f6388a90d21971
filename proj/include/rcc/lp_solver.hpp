#pragma once

#include "rcc/constraints.hpp"

namespace rcc {

enum class LpStatus { Optimal, Unbounded, Infeasible };

// Result of one LP solve. point/basis/cost are meaningful iff status is
// Optimal; the point is then feasible for every input halfspace within the
// relative tolerance, cost equals c . point, and the basis is the
// lexicographically smallest minimal subset of tight rows certifying the
// optimum (removing any member strictly lowers the optimal cost).
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vector point;
  Basis basis;
  double cost = 0.0;
  bool box_in_basis = false;
};

struct LpSettings {
  double feasibility_tol = 1e-9;  // relative; same scale rule as is_feasible
  double pivot_tol = 1e-10;
  int max_pivots = 100000;
};

// The solvelp primitive: minimizes c . theta over the intersection of the
// constraint set with the bounding box. Dual simplex over constraint rows
// with Bland's pivot rule keyed on constraint ids, so identical inputs give
// bit-identical outputs. Box faces enter the returned basis only when the
// problem restricted to the input rows leaves the optimum unbounded in some
// direction.
LpOutcome solve_lp(const ConstraintSet& set, const Objective& objective,
                   const BoundingBox& box, const LpSettings& settings = {});

// Optimal cost of the same LP; +infinity when infeasible.
double cost_of(const ConstraintSet& set, const Objective& objective,
               const BoundingBox& box, const LpSettings& settings = {});

}  // namespace rcc
