#include "rcc/lp_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rcc {
namespace {

// Dense row store for the solve: input rows first, then the 2d box faces.
struct RowTable {
  Matrix normals;               // one constraint per row
  Vector offsets;
  Vector row_norms;
  std::vector<ConstraintId> ids;
  int num_input = 0;

  int total() const { return static_cast<int>(offsets.size()); }
};

RowTable build_rows(const ConstraintSet& set, const BoundingBox& box) {
  const int d = box.dimension();
  const auto faces = box.faces();
  const int m = static_cast<int>(set.size());
  const int total = m + static_cast<int>(faces.size());

  RowTable t;
  t.num_input = m;
  t.normals.resize(total, d);
  t.offsets.resize(total);
  t.row_norms.resize(total);
  t.ids.resize(total);
  for (int r = 0; r < m; ++r) {
    t.normals.row(r) = set[r].normal.transpose();
    t.offsets[r] = set[r].offset;
    t.ids[r] = set[r].id;
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const int r = m + static_cast<int>(f);
    t.normals.row(r) = faces[f].normal.transpose();
    t.offsets[r] = faces[f].offset;
    t.ids[r] = faces[f].id;
  }
  for (int r = 0; r < total; ++r) {
    t.row_norms[r] = t.normals.row(r).norm();
  }
  return t;
}

// Vertex defined by d basis rows, kept sorted by constraint id so the same
// basis always produces the same factorization and the same point bits.
struct BasisState {
  std::vector<int> rows;  // indices into the RowTable, sorted by id
  Matrix a;               // d x d, normals of basis rows
  Vector b;               // offsets
  Eigen::PartialPivLU<Matrix> lu;

  void refactor(const RowTable& t) {
    const int d = static_cast<int>(rows.size());
    a.resize(d, d);
    b.resize(d);
    for (int i = 0; i < d; ++i) {
      a.row(i) = t.normals.row(rows[i]);
      b[i] = t.offsets[rows[i]];
    }
    lu.compute(a);
  }
};

// Relative violation of row r at point x; positive means infeasible beyond
// the tolerance scale.
double scaled_violation(const RowTable& t, int r, const Vector& x,
                        double x_norm) {
  const double scale =
      std::max({1.0, std::abs(t.offsets[r]), t.row_norms[r] * x_norm});
  return (t.normals.row(r).dot(x) - t.offsets[r]) / scale;
}

// Lexicographically smallest minimal certifying subset of the tight rows:
// the first subset, in id order, whose rows are linearly independent and
// carry strictly positive multipliers for -c. Independence plus strict
// positivity is exactly minimality.
class MinimalBasisSearch {
 public:
  MinimalBasisSearch(const RowTable& t, const Vector& c, double pivot_tol)
      : table_(t), c_(c), c_norm_(c.norm()), pivot_tol_(pivot_tol) {}

  // candidates must be sorted by id.
  std::vector<int> run(const std::vector<int>& candidates, int max_size) {
    candidates_ = &candidates;
    max_size_ = max_size;
    chosen_.clear();
    found_.clear();
    if (c_norm_ <= pivot_tol_) {
      return {};  // zero objective: the empty set certifies any feasible point
    }
    positivity_floor_ = 1e-9 * c_norm_;
    if (!descend(0)) {
      // Near-degenerate multipliers: accept any strictly positive weights.
      positivity_floor_ = 0.0;
      descend(0);
    }
    return found_;
  }

 private:
  bool descend(std::size_t from) {
    if (!chosen_.empty() && spans()) {
      found_ = chosen_;
      return true;
    }
    if (chosen_.size() == static_cast<std::size_t>(max_size_)) {
      return false;
    }
    for (std::size_t i = from; i < candidates_->size(); ++i) {
      chosen_.push_back((*candidates_)[i]);
      if (independent() && descend(i + 1)) {
        return true;
      }
      chosen_.pop_back();
    }
    return false;
  }

  bool independent() const {
    const int k = static_cast<int>(chosen_.size());
    Matrix rows(k, c_.size());
    for (int i = 0; i < k; ++i) {
      rows.row(i) = table_.normals.row(chosen_[i]).normalized();
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(rows.transpose());
    return qr.rank() == k;
  }

  bool spans() const {
    const int k = static_cast<int>(chosen_.size());
    Matrix at(c_.size(), k);  // columns are unit row normals
    for (int i = 0; i < k; ++i) {
      at.col(i) = table_.normals.row(chosen_[i]).normalized().transpose();
    }
    const Vector mu = at.colPivHouseholderQr().solve(-c_);
    if ((at * mu + c_).norm() > 1e-9 * c_norm_) {
      return false;
    }
    return (mu.array() > positivity_floor_).all();
  }

  const RowTable& table_;
  const Vector& c_;
  double c_norm_;
  double pivot_tol_;
  double positivity_floor_ = 0.0;
  const std::vector<int>* candidates_ = nullptr;
  int max_size_ = 0;
  std::vector<int> chosen_;
  std::vector<int> found_;
};

}  // namespace

LpOutcome solve_lp(const ConstraintSet& set, const Objective& objective,
                   const BoundingBox& box, const LpSettings& settings) {
  const int d = box.dimension();
  if (objective.dimension() != d ||
      (!set.empty() && set.dimension() != d)) {
    throw std::invalid_argument(
        "solve_lp: constraint, objective and box dimensions must agree");
  }

  const RowTable t = build_rows(set, box);
  const Vector& c = objective.c;

  // Initial dual-feasible basis: the box corner minimizing c, one face per
  // coordinate (lower face when c_j >= 0, upper face otherwise).
  BasisState basis;
  basis.rows.reserve(d);
  for (int j = 0; j < d; ++j) {
    const int face = c[j] >= 0.0 ? 2 * j + 1 : 2 * j;
    basis.rows.push_back(t.num_input + face);
  }
  auto id_less = [&t](int lhs, int rhs) { return t.ids[lhs] < t.ids[rhs]; };
  std::sort(basis.rows.begin(), basis.rows.end(), id_less);
  basis.refactor(t);

  // Row order for Bland's rule: ascending constraint id.
  std::vector<int> by_id(t.total());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), id_less);

  std::vector<char> in_basis(t.total(), 0);
  for (int r : basis.rows) {
    in_basis[r] = 1;
  }

  Vector x = basis.lu.solve(basis.b);
  for (int pivot = 0;; ++pivot) {
    if (pivot >= settings.max_pivots) {
      throw std::runtime_error("solve_lp: pivot limit exceeded");
    }
    const double x_norm = x.norm();

    int entering = -1;
    for (int r : by_id) {
      if (!in_basis[r] &&
          scaled_violation(t, r, x, x_norm) > settings.feasibility_tol) {
        entering = r;
        break;
      }
    }
    if (entering < 0) {
      break;  // every row satisfied: x is optimal
    }

    const Vector lambda = basis.lu.transpose().solve(-c);
    const Vector w =
        basis.lu.transpose().solve(t.normals.row(entering).transpose());

    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      if (w[i] > settings.pivot_tol) {
        min_ratio = std::min(min_ratio, std::max(lambda[i], 0.0) / w[i]);
      }
    }
    // basis.rows is sorted by id, so the first row within tolerance of the
    // minimum ratio is Bland's choice.
    int leaving = -1;
    if (std::isfinite(min_ratio)) {
      for (int i = 0; i < d; ++i) {
        if (w[i] > settings.pivot_tol &&
            std::max(lambda[i], 0.0) / w[i] <= min_ratio + settings.pivot_tol) {
          leaving = i;
          break;
        }
      }
    }
    if (leaving < 0) {
      // The entering row is violated yet lies in the cone of the current
      // basis with nonpositive weights: no point satisfies all rows.
      LpOutcome out;
      out.status = LpStatus::Infeasible;
      return out;
    }

    in_basis[basis.rows[leaving]] = 0;
    in_basis[entering] = 1;
    basis.rows[leaving] = entering;
    std::sort(basis.rows.begin(), basis.rows.end(), id_less);
    basis.refactor(t);
    x = basis.lu.solve(basis.b);
  }

  // Tight rows at the optimum, in id order, are the basis candidates.
  const double x_norm = x.norm();
  std::vector<int> tight;
  for (int r : by_id) {
    if (std::abs(scaled_violation(t, r, x, x_norm)) <=
        settings.feasibility_tol) {
      tight.push_back(r);
    }
  }

  MinimalBasisSearch search(t, c, settings.pivot_tol);
  const std::vector<int> chosen = search.run(tight, d);

  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.point = x;
  out.cost = c.dot(x);
  out.basis = Basis(d);
  for (int r : chosen) {
    Halfspace h;
    h.normal = t.normals.row(r).transpose();
    h.offset = t.offsets[r];
    h.id = t.ids[r];
    out.box_in_basis = out.box_in_basis || h.id.is_box();
    out.basis.add(std::move(h));
  }
  return out;
}

double cost_of(const ConstraintSet& set, const Objective& objective,
               const BoundingBox& box, const LpSettings& settings) {
  const LpOutcome out = solve_lp(set, objective, box, settings);
  return out.status == LpStatus::Optimal
             ? out.cost
             : std::numeric_limits<double>::infinity();
}

}  // namespace rcc
