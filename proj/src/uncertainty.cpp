#include "rcc/uncertainty.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rcc {
namespace {

constexpr double kVerifyTol = 1e-9;

std::uint64_t fnv1a_hash(const Matrix& entries) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < entries.cols(); ++c) {
      const double v = entries(r, c);
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      for (int byte = 0; byte < 8; ++byte) {
        h ^= (bits >> (8 * byte)) & 0xffULL;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace

std::uint64_t sample_tag(const Matrix& entries) {
  if (entries.isZero(0.0)) {
    return ConstraintId::kNominalTag;
  }
  const std::uint64_t h = fnv1a_hash(entries);
  // The nominal tag is reserved for q = 0.
  return h == ConstraintId::kNominalTag ? 1 : h;
}

void ProbabilisticLevels::validate() const {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1]");
  }
}

std::int64_t sample_size(std::int64_t k, const ProbabilisticLevels& levels) {
  if (k < 1) {
    throw std::invalid_argument("verification counter k must be >= 1");
  }
  levels.validate();
  const double numerator = 2.3 + 1.1 * std::log(static_cast<double>(k)) +
                           std::log(1.0 / levels.delta);
  const double denominator = std::log(1.0 / (1.0 - levels.epsilon));
  return static_cast<std::int64_t>(std::ceil(numerator / denominator));
}

void UncertainConstraintSet::validate() const {
  const int m = rows();
  const int d = dimension();
  if (m < d) {
    throw std::invalid_argument("uncertain set needs at least d rows");
  }
  if (radius.rows() != m || radius.cols() != d ||
      rhs.size() != m) {
    throw std::invalid_argument("uncertain set shapes disagree");
  }
  if (!nominal.allFinite() || !radius.allFinite() || !rhs.allFinite()) {
    throw std::invalid_argument("uncertain set entries must be finite");
  }
  if ((radius.array() < 0.0).any()) {
    throw std::invalid_argument("radius entries must be non-negative");
  }
}

UncertaintySample UncertaintyDistribution::draw(
    const UncertainConstraintSet& set, RandomStream& rng) const {
  UncertaintySample sample;
  fill(set, rng, sample.entries);
  sample.tag = sample_tag(sample.entries);
  return sample;
}

void UniformIntervalDistribution::fill(const UncertainConstraintSet& set,
                                       RandomStream& rng,
                                       Matrix& entries) const {
  entries.resize(set.rows(), set.dimension());
  for (int r = 0; r < set.rows(); ++r) {
    for (int c = 0; c < set.dimension(); ++c) {
      entries(r, c) = rng.next_symmetric(set.radius(r, c));
    }
  }
}

const UncertaintyDistribution& uniform_interval_distribution() {
  static const UniformIntervalDistribution dist;
  return dist;
}

UncertaintySample draw_sample(const UncertainConstraintSet& set,
                              RandomStream& rng) {
  return uniform_interval_distribution().draw(set, rng);
}

UncertaintySample nominal_sample(const UncertainConstraintSet& set) {
  UncertaintySample sample;
  sample.entries = Matrix::Zero(set.rows(), set.dimension());
  sample.tag = ConstraintId::kNominalTag;
  return sample;
}

ConstraintSet instantiate(const UncertainConstraintSet& set,
                          const UncertaintySample& sample) {
  if (sample.entries.rows() != set.rows() ||
      sample.entries.cols() != set.dimension()) {
    throw std::invalid_argument("sample shape does not match the set");
  }
  ConstraintSet out(set.dimension());
  for (int r = 0; r < set.rows(); ++r) {
    Halfspace h;
    h.normal = (set.nominal.row(r) + sample.entries.row(r)).transpose();
    h.offset = set.rhs[r];
    h.id = {set.owner, r, sample.tag};
    out.add(std::move(h));
  }
  return out;
}

FeasibilityProbe::FeasibilityProbe(const UncertainConstraintSet& set,
                                   Vector theta, double tol)
    : set_(&set),
      theta_(std::move(theta)),
      nominal_dot_(set.nominal * theta_),
      theta_norm_(theta_.norm()),
      tol_(tol) {
  if (!theta_.allFinite() || theta_.size() != set.dimension()) {
    throw std::invalid_argument("candidate point must be finite and match d");
  }
}

bool FeasibilityProbe::feasible(const Matrix& entries) const {
  const auto& set = *set_;
  for (int r = 0; r < set.rows(); ++r) {
    const double value = nominal_dot_[r] + entries.row(r).dot(theta_);
    const double row_norm = (set.nominal.row(r) + entries.row(r)).norm();
    const double scale =
        std::max({1.0, std::abs(set.rhs[r]), row_norm * theta_norm_});
    if (value - set.rhs[r] > tol_ * scale) {
      return false;
    }
  }
  return true;
}

VerificationResult verify(const Vector& theta, const UncertainConstraintSet& set,
                          std::int64_t k, const ProbabilisticLevels& levels,
                          RandomStream& rng,
                          const UncertaintyDistribution& distribution) {
  const std::int64_t budget = sample_size(k, levels);
  const FeasibilityProbe probe(set, theta, kVerifyTol);

  VerificationResult result;
  for (std::int64_t s = 0; s < budget; ++s) {
    const UncertaintySample sample = distribution.draw(set, rng);
    ++result.samples_used;
    if (!probe.feasible(sample.entries)) {
      result.verified = false;
      result.certificate = instantiate(set, sample);
      return result;
    }
  }
  result.verified = true;
  return result;
}

}  // namespace rcc
