#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace rcc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Stable identity of one linear constraint within an experiment run.
// Ordering is the canonical ordering used everywhere: merged sets are sorted
// by id and all pivot tie-breaking is id-based. Bounding-box faces use the
// reserved owner value, which sorts after every agent id so that box rows are
// only kept in a basis when no agent row can replace them.
struct ConstraintId {
  static constexpr std::int32_t kBoxOwner =
      std::numeric_limits<std::int32_t>::max();
  static constexpr std::uint64_t kNominalTag = 0;

  std::int32_t owner = 0;          // originating agent, or kBoxOwner
  std::int32_t row = 0;            // row index within the owner's set
  std::uint64_t tag = kNominalTag; // 0 = nominal, else hash of the sample

  auto operator<=>(const ConstraintId&) const = default;

  bool is_box() const { return owner == kBoxOwner; }
  std::string str() const;
  static ConstraintId parse(const std::string& text);

  static ConstraintId box_face(std::int32_t face) {
    return {kBoxOwner, face, kNominalTag};
  }
};

// One closed halfspace normal . theta <= offset.
struct Halfspace {
  Vector normal;
  double offset = 0.0;
  ConstraintId id;

  int dimension() const { return static_cast<int>(normal.size()); }
  double evaluate(const Vector& point) const {
    return normal.dot(point) - offset;
  }
};

// Ordered, identity-tagged collection of halfspaces sharing one dimension.
// Union of collections corresponds to intersection of feasible regions.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(int dimension) : dimension_(dimension) {}
  ConstraintSet(int dimension, std::vector<Halfspace> rows);

  int dimension() const { return dimension_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const Halfspace& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<Halfspace>& rows() const { return rows_; }

  // Rejects dimension mismatches and duplicate ids.
  void add(Halfspace h);

  std::vector<ConstraintId> ids() const;
  bool same_ids(const ConstraintSet& other) const;

  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

 private:
  int dimension_ = 0;
  std::vector<Halfspace> rows_;
};

// A minimal certifying subset of constraints (at most d members); structurally
// a constraint set whose extra invariants are enforced by the solver.
using Basis = ConstraintSet;

// Objective direction of min c . theta; shared by all agents in a run.
struct Objective {
  Vector c;

  explicit Objective(Vector coeffs);
  int dimension() const { return static_cast<int>(c.size()); }
  double value(const Vector& point) const { return c.dot(point); }
};

// Finite axis-aligned box housing every local LP so it is always bounded.
struct BoundingBox {
  Vector lo;
  Vector hi;

  static BoundingBox centered(int dimension, double limit);
  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& point, double tol) const;

  // The 2d box faces as halfspaces with reserved ids. Face 2j is the upper
  // face of coordinate j, face 2j+1 the lower one.
  std::vector<Halfspace> faces() const;
};

// True iff a . point <= b + tol * scale for every halfspace, with
// scale = max(1, |b|, ||a|| * ||point||).
bool is_feasible(const Vector& point, const ConstraintSet& set, double tol);
bool is_feasible(const Vector& point, const Halfspace& h, double point_norm,
                 double tol);

// Union with deduplication by id, sorted by id. Dimension mismatch is a
// programming error and throws.
ConstraintSet merge(std::span<const ConstraintSet* const> sets);
ConstraintSet merge(std::initializer_list<const ConstraintSet*> sets);

}  // namespace rcc
