#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rcc/uncertainty.hpp"

using namespace rcc;

namespace {

UncertainConstraintSet box_set(int m, int d, double radius_value,
                               std::int32_t owner = 0) {
  UncertainConstraintSet set;
  set.nominal = Matrix::Zero(m, d);
  for (int r = 0; r < m; ++r) {
    set.nominal(r, r % d) = 1.0;  // every row has a nonzero normal
  }
  set.radius = Matrix::Constant(m, d, radius_value);
  set.rhs = Vector::Constant(m, 1.0);
  set.owner = owner;
  return set;
}

}  // namespace

TEST_CASE("sample bound matches the closed form") {
  // delta = 1 zeroes the confidence term; epsilon = 1 - 1/e makes the
  // denominator exactly ln e = 1, so the bound is ceil(2.3).
  CHECK(sample_size(1, {1.0 - std::exp(-1.0), 1.0}) == 3);
  CHECK(sample_size(1, {0.01, 1e-9}) == 2291);
  CHECK(sample_size(2, {0.01, 1e-9}) == 2367);
}

TEST_CASE("sample bound rejects out-of-range levels") {
  CHECK_THROWS_AS(sample_size(0, {0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1, {0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1, {1.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1, {0.1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1, {0.1, 1.5}), std::invalid_argument);
}

TEST_CASE("sample bound is monotone and diverges as epsilon shrinks") {
  std::int64_t prev = 0;
  for (std::int64_t k = 1; k <= 64; k *= 2) {
    const auto m = sample_size(k, {0.05, 1e-6});
    CHECK(m >= prev);
    prev = m;
  }
  prev = 0;
  for (double delta = 0.5; delta >= 1e-12; delta *= 1e-3) {
    const auto m = sample_size(3, {0.05, delta});
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(sample_size(1, {1e-6, 0.5}) > 1000000);
}

TEST_CASE("uniform draws respect the interval support") {
  auto set = box_set(3, 3, 0.25);
  set.radius(1, 2) = 0.0;
  RandomStream rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto s = draw_sample(set, rng);
    CHECK((s.entries.array().abs() <= set.radius.array() + 0.0).all());
    CHECK(s.entries(1, 2) == 0.0);
  }
}

TEST_CASE("zero radius draws the zero sample with the nominal tag") {
  const auto set = box_set(2, 2, 0.0);
  RandomStream rng(5);
  const auto s = draw_sample(set, rng);
  CHECK(s.entries.isZero(0.0));
  CHECK(s.tag == ConstraintId::kNominalTag);
}

TEST_CASE("empirical mean of each entry vanishes") {
  const double radius = 0.2;
  const auto set = box_set(1, 2, radius);
  RandomStream rng(1234);
  const int n = 100000;
  Matrix sum = Matrix::Zero(1, 2);
  for (int i = 0; i < n; ++i) {
    sum += draw_sample(set, rng).entries;
  }
  const double sigma = radius / std::sqrt(3.0);
  const double bound = 5.0 * sigma / std::sqrt(static_cast<double>(n));
  CHECK((sum / n).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("instantiation at zero reproduces the nominal set") {
  const auto set = box_set(3, 2, 0.3, 7);
  const auto nominal = instantiate(set, nominal_sample(set));
  REQUIRE(nominal.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(nominal[r].id == ConstraintId{7, r, ConstraintId::kNominalTag});
    CHECK(nominal[r].normal == set.nominal.row(r).transpose());
    CHECK(nominal[r].offset == set.rhs[r]);
  }
}

TEST_CASE("instantiation is deterministic in the sample") {
  const auto set = box_set(2, 2, 0.3);
  RandomStream rng(88);
  const auto sample = draw_sample(set, rng);
  const auto a = instantiate(set, sample);
  const auto b = instantiate(set, sample);
  CHECK(a.same_ids(b));
  CHECK(a[0].id.tag == sample.tag);
  CHECK(sample.tag != ConstraintId::kNominalTag);
}

TEST_CASE("instantiated feasibility matches direct matrix arithmetic") {
  const auto set = box_set(4, 3, 0.4);
  RandomStream rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sample = draw_sample(set, rng);
    const auto instance = instantiate(set, sample);
    Vector theta(3);
    for (int j = 0; j < 3; ++j) {
      theta[j] = rng.next_symmetric(2.0);
    }
    const Vector lhs = (set.nominal + sample.entries) * theta;
    const bool direct = (lhs.array() <= set.rhs.array()).all();
    // Strict separation from the tolerance band keeps both routes aligned.
    const double margin = (set.rhs - lhs).cwiseAbs().minCoeff();
    if (margin > 1e-6) {
      CHECK(is_feasible(theta, instance, 1e-9) == direct);
    }
  }
}

TEST_CASE("verification passes a robustly feasible point") {
  UncertainConstraintSet set;
  set.nominal = (Matrix(1, 2) << 1.0, 0.0).finished();
  set.radius = Matrix::Constant(1, 2, 0.1);
  set.rhs = Vector::Constant(1, 5.0);
  set.owner = 0;
  // worst case (1.1, 0.1) . (1, 1) = 1.2 <= 5
  const Vector theta = Vector::Constant(2, 1.0);

  const ProbabilisticLevels levels{0.1, 0.01};
  const auto budget = sample_size(4, levels);
  RandomStream rng(5150);
  const auto result = verify(theta, set, 4, levels, rng);
  CHECK(result.verified);
  CHECK(result.samples_used == budget);
  CHECK(result.certificate.empty());

  // Replay from the same seed: every drawn sample must have been feasible.
  RandomStream replay(5150);
  for (std::int64_t s = 0; s < budget; ++s) {
    const auto q = draw_sample(set, replay);
    CHECK(is_feasible(theta, instantiate(set, q), 1e-9));
  }
}

TEST_CASE("zero-radius verification is exact") {
  const auto set = box_set(2, 2, 0.0);
  const ProbabilisticLevels levels{0.2, 0.1};
  RandomStream rng(3);

  SUBCASE("feasible point uses the whole budget") {
    const auto r = verify(Vector::Zero(2), set, 1, levels, rng);
    CHECK(r.verified);
    CHECK(r.samples_used == sample_size(1, levels));
  }
  SUBCASE("infeasible point is caught at the first sample") {
    const auto r = verify(Vector::Constant(2, 2.0), set, 1, levels, rng);
    CHECK_FALSE(r.verified);
    CHECK(r.samples_used == 1);
    REQUIRE(r.certificate.size() == 2);
    CHECK_FALSE(is_feasible(Vector::Constant(2, 2.0), r.certificate, 1e-9));
  }
}

TEST_CASE("violation detection rate follows the geometric tail") {
  // (1 + q) * theta <= 1 with theta = 1 is violated exactly when q > 0,
  // so each sample violates with probability one half.
  UncertainConstraintSet set;
  set.nominal = Matrix::Constant(1, 1, 1.0);
  set.radius = Matrix::Constant(1, 1, 0.5);
  set.rhs = Vector::Constant(1, 1.0);

  const ProbabilisticLevels levels{0.5, 0.5};
  const auto m = sample_size(1, levels);
  REQUIRE(m == 5);
  const double hit_probability = 1.0 - std::pow(0.5, static_cast<double>(m));

  RandomStream rng(424242);
  int violated = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto r = verify(Vector::Constant(1, 1.0), set, 1, levels, rng);
    if (!r.verified) {
      ++violated;
      CHECK(r.samples_used <= m);
      CHECK_FALSE(is_feasible(Vector::Constant(1, 1.0), r.certificate, 1e-9));
    } else {
      CHECK(r.samples_used == m);
    }
  }
  const double sigma =
      std::sqrt(hit_probability * (1.0 - hit_probability) / trials);
  CHECK(static_cast<double>(violated) / trials >= hit_probability - 3.0 * sigma);
}

TEST_CASE("shape and range validation") {
  auto set = box_set(3, 3, 0.1);
  CHECK_THROWS_AS(box_set(3, 3, -0.1).validate(), std::invalid_argument);
  set.validate();
  UncertainConstraintSet thin;
  thin.nominal = Matrix::Identity(1, 2);
  thin.radius = Matrix::Zero(1, 2);
  thin.rhs = Vector::Zero(1);
  CHECK_THROWS_AS(thin.validate(), std::invalid_argument);  // m < d
}
