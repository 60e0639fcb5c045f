#include <gtest/gtest.h>

#include "padic_orth/norm.hpp"
#include "padic_orth/oracle.hpp"
#include "support.hpp"

using namespace padic_orth;
using namespace padic_orth::testing;

TEST(Exponent, Examples) {
  EXPECT_EQ(sup(3, 2).exponent(vec({"6", "1/3"})), NormExponent(-1));
  const WeightedCoordinateNorm weighted(Prime(2), QMatrix::identity(2), {Rational(1, 2), Rational(0)}, 2);
  EXPECT_EQ(weighted.exponent(ivec({1, 0})), NormExponent(Rational(1, 2)));
  EXPECT_TRUE(weighted.exponent(ivec({0, 0})).is_infinite());
  EXPECT_THROW(weighted.exponent(ivec({1, 0, 0})), Error);
}

TEST(Exponent, SymbolicValues) {
  const Prime p(2);
  EXPECT_EQ(NormExponent(Rational(3, 2)).symbolic(p), "2^(-3/2)");
  EXPECT_EQ(NormExponent(0).symbolic(p), "1");
  EXPECT_EQ(NormExponent::infinity().symbolic(p), "0");
  EXPECT_EQ(NormExponent(-2).to_string(), "-2");
  EXPECT_THROW(NormExponent::infinity().value(), Error);
}

TEST(WeightedNorm, RejectsBadParameters) {
  EXPECT_THROW(WeightedCoordinateNorm(Prime(2), QMatrix(2, 3), {0, 0}), Error);
  EXPECT_THROW(WeightedCoordinateNorm(Prime(2), QMatrix::identity(2), {0}), Error);
  EXPECT_THROW(WeightedCoordinateNorm(Prime(2), QMatrix::from_rows({ivec({1, 1}), ivec({1, 1})}), {0, 0}), Error);
  // weight 1/3 is not in (1/2)Z
  EXPECT_THROW(WeightedCoordinateNorm(Prime(2), QMatrix::identity(2), {Rational(1, 3), 0}, 2), Error);
  EXPECT_THROW(WeightedCoordinateNorm(Prime(2), QMatrix::identity(2), {0, 0}, 7), Error);
  EXPECT_NO_THROW(WeightedCoordinateNorm(Prime(2), QMatrix::identity(2), {0, 0}, 7, 8));
}

TEST(Normalize, Examples) {
  const auto a = normalize_vector(sup(2, 2), ivec({1, 3}));
  EXPECT_EQ(a.shift, 0);
  EXPECT_EQ(a.vector, ivec({1, 3}));
  const auto b = normalize_vector(sup(3, 1), vec({"1/9"}));
  EXPECT_EQ(b.shift, 2);
  EXPECT_EQ(b.exponent, NormExponent(0));
  EXPECT_EQ(b.vector, ivec({1}));
  const WeightedCoordinateNorm half(Prime(3), QMatrix::identity(1), {Rational(1, 2)}, 2);
  const auto c = normalize_vector(half, vec({"1/9"}));  // w = -3/2
  EXPECT_EQ(c.shift, 2);
  EXPECT_EQ(c.exponent, NormExponent(Rational(1, 2)));
  EXPECT_THROW(normalize_vector(sup(2, 2), ivec({0, 0})), Error);
}

TEST(Normalize, LandsInUnitInterval) {
  Rng rng(8);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Instance inst = small_instance(21, k);
    for (int i = 0; i < 20; ++i) {
      const QVector v = random_rational_vector(rng, inst.dimension(), 500);
      if (is_zero(v)) continue;
      const auto out = normalize_vector(inst.norm, v);
      EXPECT_TRUE(is_normalized_exponent(out.exponent));
      EXPECT_EQ(inst.norm.exponent(out.vector), out.exponent);
    }
  }
}

TEST(NormAxioms, HomogeneityUltrametricAndTwoSum) {
  Rng rng(13);
  std::size_t equal_cases = 0, strict_cases = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Instance inst = small_instance(99, k);
    const auto& norm = inst.norm;
    const Prime& p = norm.prime();
    for (int i = 0; i < 500; ++i) {
      const QVector v = random_rational_vector(rng, norm.dimension(), 60);
      QVector u = random_rational_vector(rng, norm.dimension(), 60);
      if (i % 3 == 0) u = Rational(static_cast<long>(p.value())) * v + u;  // bias toward cancellation
      const Rational x = random_nonzero_rational(rng, 60);
      const NormExponent wv = norm.exponent(v), wu = norm.exponent(u), ws = norm.exponent(v + u);

      if (!wv.is_infinite()) {
        EXPECT_EQ(norm.exponent(x * v), wv.shifted(Rational(valuation(x, p).value())));
      }
      EXPECT_GE(ws, std::min(wv, wu));
      if (wv != wu) {
        EXPECT_EQ(ws, std::min(wv, wu));
      }
      // N(v + u) = max(N(v), N(u)) exactly when N(v + u) >= N(v), for N(u) <= N(v)
      if (wu >= wv && !wv.is_infinite()) {
        const bool max_equality = ws == std::min(wv, wu);
        EXPECT_EQ(max_equality, ws <= wv);
        (max_equality ? equal_cases : strict_cases) += 1;
      }
    }
  }
  EXPECT_GT(equal_cases, 0u);
  EXPECT_GT(strict_cases, 0u);
}

TEST(InducedNorm, Examples) {
  const auto standard = lattice_induced_norm({ivec({1, 0}), ivec({0, 1})}, Prime(2));
  EXPECT_EQ(standard.exponent(ivec({1, 1})), NormExponent(0));
  const auto scaled = lattice_induced_norm({ivec({2, 0}), ivec({0, 1})}, Prime(2));
  EXPECT_EQ(scaled.exponent(ivec({1, 1})), NormExponent(-1));
  EXPECT_EQ(scaled.exponent(ivec({2, 0})), NormExponent(0));
  EXPECT_EQ(scaled.exponent(ivec({0, 1})), NormExponent(0));
}

TEST(InducedNorm, Errors) {
  try {
    lattice_induced_norm({ivec({1, 0, 0}), ivec({0, 1, 0})}, Prime(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFullRank);
  }
  try {
    lattice_induced_norm({ivec({1, 2}), ivec({2, 4})}, Prime(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
}

TEST(InducedNorm, BasisIsOrthogonalWithUnitNorms) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    const Instance inst = small_instance(5, k);
    const auto induced = lattice_induced_norm(inst.basis, inst.prime());
    for (const auto& b : inst.basis) EXPECT_EQ(induced.exponent(b), NormExponent(0));
    EXPECT_TRUE(oracle::check_orthogonal_determinant(induced, inst.basis).orthogonal);
  }
}

TEST(NormPair, RequiresSamePrimeAndDimension) {
  EXPECT_THROW(NormPair<WeightedCoordinateNorm>(sup(2, 2), sup(3, 2)), Error);
  EXPECT_THROW(NormPair<WeightedCoordinateNorm>(sup(2, 2), sup(2, 3)), Error);
  EXPECT_NO_THROW(NormPair<WeightedCoordinateNorm>(sup(2, 2), sup(2, 2)));
}
