#pragma once

#include <cstdint>
#include <memory>

#include "rcc/constraints.hpp"
#include "rcc/rng.hpp"

namespace rcc {

// Per-agent accuracy and confidence levels. Network-level levels are the
// sums over agents, computed by the harness.
struct ProbabilisticLevels {
  double epsilon = 0.0;  // in (0,1)
  double delta = 0.0;    // in (0,1]

  void validate() const;
};

// Smallest sample count M satisfying
//   M >= (2.3 + 1.1 ln k + ln(1/delta)) / ln(1/(1-epsilon)),
// i.e. the ceiling of the right-hand side.
std::int64_t sample_size(std::int64_t k, const ProbabilisticLevels& levels);

// One agent's uncertain constraint set (A0 + Aq) theta <= b, with Aq an
// interval matrix bounded entrywise by +-radius.
struct UncertainConstraintSet {
  Matrix nominal;  // m x d
  Matrix radius;   // m x d, entrywise >= 0
  Vector rhs;      // m
  std::int32_t owner = 0;

  int rows() const { return static_cast<int>(nominal.rows()); }
  int dimension() const { return static_cast<int>(nominal.cols()); }
  void validate() const;
};

// A realization of the interval matrix; tag is the stable hash that ends up
// in the instantiated constraint ids (zero matrix maps to the nominal tag).
struct UncertaintySample {
  Matrix entries;
  std::uint64_t tag = ConstraintId::kNominalTag;
};

// Stable identity hash of a realization; the zero matrix gets the reserved
// nominal tag.
std::uint64_t sample_tag(const Matrix& entries);

// Probability measure over the uncertainty box. The algorithm only needs
// i.i.d. draws, so alternative measures can be plugged in here. fill() is
// the sampling core; draw() adds the identity tag on top.
class UncertaintyDistribution {
 public:
  virtual ~UncertaintyDistribution() = default;
  virtual void fill(const UncertainConstraintSet& set, RandomStream& rng,
                    Matrix& entries) const = 0;
  UncertaintySample draw(const UncertainConstraintSet& set,
                         RandomStream& rng) const;
};

// Entrywise uniform on [-radius, +radius], independent per entry.
class UniformIntervalDistribution final : public UncertaintyDistribution {
 public:
  void fill(const UncertainConstraintSet& set, RandomStream& rng,
            Matrix& entries) const override;
};

const UncertaintyDistribution& uniform_interval_distribution();

UncertaintySample draw_sample(const UncertainConstraintSet& set,
                              RandomStream& rng);

UncertaintySample nominal_sample(const UncertainConstraintSet& set);

// Constraint set at one realization: row r becomes
// (nominal_r + entries_r) . theta <= rhs_r with id (owner, r, tag).
ConstraintSet instantiate(const UncertainConstraintSet& set,
                          const UncertaintySample& sample);

// Feasibility of one fixed candidate against realizations of one uncertain
// set, with the nominal products hoisted out of the per-sample loop. Uses
// the same relative scale rule as is_feasible.
class FeasibilityProbe {
 public:
  FeasibilityProbe(const UncertainConstraintSet& set, Vector theta,
                   double tol);
  bool feasible(const Matrix& entries) const;

 private:
  const UncertainConstraintSet* set_;
  Vector theta_;
  Vector nominal_dot_;
  double theta_norm_;
  double tol_;
};

struct VerificationResult {
  bool verified = false;
  ConstraintSet certificate;  // full instantiated set at the first violating
                              // sample; empty when verified
  std::int64_t samples_used = 0;
};

// Monte Carlo verification step: draws exactly sample_size(k, levels)
// realizations in order and checks the candidate against each, stopping at
// the first violation. Uses the relative feasibility tolerance of lp_core.
VerificationResult verify(const Vector& theta, const UncertainConstraintSet& set,
                          std::int64_t k, const ProbabilisticLevels& levels,
                          RandomStream& rng,
                          const UncertaintyDistribution& distribution =
                              uniform_interval_distribution());

}  // namespace rcc
