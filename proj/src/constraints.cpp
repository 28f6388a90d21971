#include "rcc/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rcc {

std::string ConstraintId::str() const {
  if (is_box()) {
    return "box:" + std::to_string(row);
  }
  std::string s = std::to_string(owner) + ":" + std::to_string(row);
  if (tag != kNominalTag) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "#%016llx",
                  static_cast<unsigned long long>(tag));
    s += buf;
  }
  return s;
}

ConstraintId ConstraintId::parse(const std::string& text) {
  ConstraintId id;
  std::string body = text;
  const auto hash_pos = body.find('#');
  if (hash_pos != std::string::npos) {
    id.tag = std::stoull(body.substr(hash_pos + 1), nullptr, 16);
    body.erase(hash_pos);
  }
  const auto colon = body.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("malformed constraint id '" + text + "'");
  }
  const std::string owner_part = body.substr(0, colon);
  id.owner = owner_part == "box" ? kBoxOwner
                                 : static_cast<std::int32_t>(
                                       std::stol(owner_part));
  id.row = static_cast<std::int32_t>(std::stol(body.substr(colon + 1)));
  return id;
}

ConstraintSet::ConstraintSet(int dimension, std::vector<Halfspace> rows)
    : dimension_(dimension) {
  for (auto& h : rows) {
    add(std::move(h));
  }
}

void ConstraintSet::add(Halfspace h) {
  if (dimension_ == 0) {
    dimension_ = h.dimension();
  }
  if (h.dimension() != dimension_) {
    throw std::invalid_argument("constraint dimension mismatch: expected " +
                                std::to_string(dimension_) + ", got " +
                                std::to_string(h.dimension()));
  }
  if (!h.normal.allFinite() || h.normal.isZero(0.0)) {
    throw std::invalid_argument("halfspace normal must be finite and nonzero");
  }
  for (const auto& existing : rows_) {
    if (existing.id == h.id) {
      throw std::invalid_argument("duplicate constraint id " + h.id.str());
    }
  }
  rows_.push_back(std::move(h));
}

std::vector<ConstraintId> ConstraintSet::ids() const {
  std::vector<ConstraintId> out;
  out.reserve(rows_.size());
  for (const auto& h : rows_) {
    out.push_back(h.id);
  }
  return out;
}

bool ConstraintSet::same_ids(const ConstraintSet& other) const {
  if (rows_.size() != other.rows_.size()) {
    return false;
  }
  auto a = ids();
  auto b = other.ids();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Objective::Objective(Vector coeffs) : c(std::move(coeffs)) {
  if (!c.allFinite()) {
    throw std::invalid_argument("objective direction must be finite");
  }
}

BoundingBox BoundingBox::centered(int dimension, double limit) {
  if (dimension < 1 || !(limit > 0.0) || !std::isfinite(limit)) {
    throw std::invalid_argument("bounding box needs dimension >= 1 and a "
                                "finite positive limit");
  }
  BoundingBox box;
  box.lo = Vector::Constant(dimension, -limit);
  box.hi = Vector::Constant(dimension, limit);
  return box;
}

bool BoundingBox::contains(const Vector& point, double tol) const {
  for (int j = 0; j < dimension(); ++j) {
    if (point[j] > hi[j] + tol || point[j] < lo[j] - tol) {
      return false;
    }
  }
  return true;
}

std::vector<Halfspace> BoundingBox::faces() const {
  const int d = dimension();
  std::vector<Halfspace> out;
  out.reserve(2 * static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    Halfspace upper;
    upper.normal = Vector::Zero(d);
    upper.normal[j] = 1.0;
    upper.offset = hi[j];
    upper.id = ConstraintId::box_face(2 * j);
    out.push_back(std::move(upper));

    Halfspace lower;
    lower.normal = Vector::Zero(d);
    lower.normal[j] = -1.0;
    lower.offset = -lo[j];
    lower.id = ConstraintId::box_face(2 * j + 1);
    out.push_back(std::move(lower));
  }
  return out;
}

bool is_feasible(const Vector& point, const Halfspace& h, double point_norm,
                 double tol) {
  const double scale =
      std::max({1.0, std::abs(h.offset), h.normal.norm() * point_norm});
  return h.evaluate(point) <= tol * scale;
}

bool is_feasible(const Vector& point, const ConstraintSet& set, double tol) {
  if (point.size() != set.dimension() && !set.empty()) {
    throw std::invalid_argument("point dimension does not match constraints");
  }
  const double point_norm = point.norm();
  for (const auto& h : set) {
    if (!is_feasible(point, h, point_norm, tol)) {
      return false;
    }
  }
  return true;
}

ConstraintSet merge(std::span<const ConstraintSet* const> sets) {
  int dim = 0;
  for (const auto* s : sets) {
    if (s == nullptr || s->empty()) {
      continue;
    }
    if (dim == 0) {
      dim = s->dimension();
    } else if (s->dimension() != dim) {
      throw std::invalid_argument("merge: constraint sets differ in dimension");
    }
  }
  std::map<ConstraintId, const Halfspace*> by_id;
  for (const auto* s : sets) {
    if (s == nullptr) {
      continue;
    }
    for (const auto& h : *s) {
      by_id.emplace(h.id, &h);  // first occurrence wins; ids are identical rows
    }
  }
  ConstraintSet out(dim);
  for (const auto& [id, h] : by_id) {
    out.add(*h);
  }
  return out;
}

ConstraintSet merge(std::initializer_list<const ConstraintSet*> sets) {
  std::vector<const ConstraintSet*> v(sets);
  return merge(std::span<const ConstraintSet* const>(v));
}

}  // namespace rcc
