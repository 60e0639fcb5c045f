#include <gtest/gtest.h>

#include "padic_orth/lattice.hpp"
#include "padic_orth/oracle.hpp"
#include "support.hpp"

using namespace padic_orth;
using namespace padic_orth::testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::VerificationFailure;
}

std::vector<QVector> tail(const std::vector<QVector>& b) { return {b.begin() + 1, b.end()}; }

}  // namespace

TEST(Lattice, MembershipAndCombine) {
  const PAdicLattice l(Prime(2), {ivec({2, 0}), ivec({0, 1})});
  EXPECT_TRUE(l.contains(ivec({2, 5})));
  EXPECT_TRUE(l.contains(vec({"2/3", "1/5"})));  // 3 and 5 are units
  EXPECT_FALSE(l.contains(ivec({1, 0})));
  EXPECT_EQ(l.combine(std::vector<Integer>{3, 4}), ivec({6, 4}));
  EXPECT_EQ(kind_of([] { PAdicLattice(Prime(2), {ivec({1, 2}), ivec({2, 4})}); }), ErrorKind::DependentBasis);
}

TEST(Cvp, Examples) {
  const auto n = sup(2, 2);
  const CVPResult a = solve_cvp(n, PAdicLattice(Prime(2), {ivec({1, 1})}), ivec({1, 0}));
  EXPECT_EQ(a.distance, NormExponent(0));
  EXPECT_EQ(a.closest, ivec({0, 0}));

  const CVPResult b = solve_cvp(n, PAdicLattice(Prime(2), {ivec({1, 0})}), ivec({1, 2}));
  EXPECT_EQ(b.distance, NormExponent(1));
  EXPECT_EQ(b.closest, ivec({1, 0}));

  const CVPResult c = solve_cvp(n, PAdicLattice(Prime(2), {ivec({1, 0})}), ivec({0, 1}));
  EXPECT_EQ(c.distance, NormExponent(0));
  EXPECT_EQ(c.closest, ivec({0, 0}));
}

TEST(Cvp, Errors) {
  const auto n = sup(2, 2);
  const PAdicLattice l(Prime(2), {ivec({1, 0})});
  EXPECT_EQ(kind_of([&] { solve_cvp(n, l, ivec({3, 0})); }), ErrorKind::TargetInLattice);
  EXPECT_EQ(kind_of([&] { solve_cvp(n, l, vec({"1/5", "0"})); }), ErrorKind::TargetInLattice);
  EXPECT_EQ(kind_of([&] { solve_cvp(sup(2, 3), l, ivec({1, 2})); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { solve_cvp(sup(3, 2), l, ivec({1, 2})); }), ErrorKind::InvalidParameters);
  // (1, 2^10) is only resolved at level 10
  SearchOptions tight;
  tight.max_level = 3;
  EXPECT_EQ(kind_of([&] { solve_cvp(n, l, ivec({1, 1024}), tight); }), ErrorKind::ResourceExhausted);
}

TEST(Cvp, ResultIsCorrectAndDeterministic) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    const Instance inst = small_instance(31, k);
    const auto basis = normalized(inst.norm, inst.basis);
    const PAdicLattice l(inst.prime(), tail(basis));
    const CVPResult r = solve_cvp(inst.norm, l, basis.front());
    EXPECT_TRUE(l.contains(r.closest));
    EXPECT_EQ(l.combine(r.coefficients), r.closest);
    EXPECT_EQ(inst.norm.exponent(basis.front() - r.closest), r.distance);
    const CVPResult again = solve_cvp(inst.norm, l, basis.front());
    EXPECT_EQ(again.closest, r.closest);
    EXPECT_EQ(again.stats.nodes_explored, r.stats.nodes_explored);
  }
}

TEST(Cvp, FrozenBranchesKeepTheirNorm) {
  Rng rng(17);
  std::size_t frozen_seen = 0;
  for (std::uint64_t k = 0; k < 40; ++k) {
    const Instance inst = small_instance(77, k);
    const auto basis = normalized(inst.norm, inst.basis);
    const PAdicLattice l(inst.prime(), tail(basis));
    const QVector& t = basis.front();
    const Rational c = detail::min_basis_exponent(inst.norm, l);
    for (unsigned level = 0; level < 5; ++level) {
      const Integer modulus = prime_power(inst.prime(), level).get_num();
      for (int draw = 0; draw < 5; ++draw) {
        std::vector<Integer> a(l.rank());
        for (auto& x : a) x = uniform_integer_below(rng, modulus);
        const QVector residual = t - l.combine(a);
        const NormExponent w = inst.norm.exponent(residual);
        if (!detail::frozen(w, level, c)) continue;
        ++frozen_seen;
        for (int ext = 0; ext < 100; ++ext) {
          std::vector<Integer> u(l.rank());
          for (auto& x : u) x = uniform_integer_below(rng, Integer(1000));
          const QVector extended = residual - Rational(modulus) * l.combine(u);
          ASSERT_EQ(inst.norm.exponent(extended), w);
        }
      }
    }
  }
  EXPECT_GT(frozen_seen, 100u);
}

TEST(Cosets, Examples) {
  const auto n = sup(2, 2);
  const auto a = coset_norm_values(n, PAdicLattice(Prime(2), {ivec({1, 1})}), ivec({1, 0}));
  ASSERT_EQ(a.entries.size(), 1u);
  EXPECT_EQ(a.entries[0].exponent, NormExponent(0));

  const auto b = coset_norm_values(n, PAdicLattice(Prime(2), {ivec({1, 0})}), ivec({1, 2}));
  ASSERT_EQ(b.entries.size(), 2u);
  EXPECT_EQ(b.entries[0].exponent, NormExponent(0));
  EXPECT_EQ(b.entries[1].exponent, NormExponent(1));
  EXPECT_EQ(b.closest().exponent, NormExponent(1));
}

TEST(Cosets, StableUnderDeepeningAndMatchesCvp) {
  for (std::uint64_t k = 0; k < 40; ++k) {
    const Instance inst = small_instance(41, k);
    const auto basis = normalized(inst.norm, inst.basis);
    const PAdicLattice l(inst.prime(), tail(basis));
    const auto table = coset_norm_values(inst.norm, l, basis.front());
    const auto deeper = coset_norm_values(inst.norm, l, basis.front(), 1);
    ASSERT_EQ(table.entries.size(), deeper.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
      EXPECT_EQ(table.entries[i].exponent, deeper.entries[i].exponent);
      EXPECT_EQ(inst.norm.exponent(table.entries[i].representative), table.entries[i].exponent);
      EXPECT_TRUE(l.contains(basis.front() - table.entries[i].representative));
    }
    EXPECT_EQ(table.closest().exponent, solve_cvp(inst.norm, l, basis.front()).distance);
  }
}

TEST(RatioMaximizer, Examples) {
  const NormPair<WeightedCoordinateNorm> same(sup(2, 2), sup(2, 2));
  const auto a = maximize_norm_ratio(same, {ivec({2, 2}), ivec({0, 1})});
  EXPECT_EQ(a.ratio_exponent, Rational(0));
  EXPECT_EQ(a.coset_index, 0u);
  EXPECT_EQ(a.vector, ivec({1, 1}));

  const WeightedCoordinateNorm shifted(Prime(2), QMatrix::identity(2), {1, 0});
  const NormPair<WeightedCoordinateNorm> pair(sup(2, 2), shifted);
  const auto b = maximize_norm_ratio(pair, {ivec({1, 1}), ivec({0, 1})});
  EXPECT_EQ(b.ratio_exponent, Rational(-1));
  EXPECT_LT(valuation(b.vector[0], Prime(2)), valuation(b.vector[1], Prime(2)));

  const auto c = maximize_norm_ratio(pair, {ivec({1, 0})});
  EXPECT_EQ(c.vector, ivec({1, 0}));
}

TEST(RatioMaximizer, BeatsRandomVectors) {
  Rng rng(23);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Instance inst = small_instance(51, k, true);
    const NormPair<WeightedCoordinateNorm> pair(inst.norm, *inst.second_norm);
    const auto best = maximize_norm_ratio(pair, inst.basis);
    EXPECT_EQ(inst.norm.exponent(best.vector).value() - inst.second_norm->exponent(best.vector).value(),
              best.ratio_exponent);
    for (int i = 0; i < 500; ++i) {
      const QVector v = random_rational_vector(rng, inst.dimension(), 200);
      if (is_zero(v)) continue;
      EXPECT_LE(best.ratio_exponent, inst.norm.exponent(v).value() - inst.second_norm->exponent(v).value());
    }
  }
}

TEST(RatioMaximizer, Errors) {
  const NormPair<WeightedCoordinateNorm> pair(sup(2, 2), sup(2, 2));
  EXPECT_EQ(kind_of([&] { maximize_norm_ratio(pair, {ivec({1, 2}), ivec({2, 4})}); }), ErrorKind::DependentBasis);
  EXPECT_EQ(kind_of([&] { maximize_norm_ratio(pair, {ivec({1, 2, 3})}); }), ErrorKind::DimensionMismatch);
}

TEST(Lvp, Examples) {
  const auto a = solve_lvp(sup(3, 2), PAdicLattice(Prime(3), {ivec({1, 0}), ivec({0, 9})}));
  EXPECT_EQ(a.longest, ivec({1, 0}));
  EXPECT_EQ(a.exponent, NormExponent(0));
  const auto b = solve_lvp(sup(3, 2), PAdicLattice(Prime(3), {ivec({3, 3})}));
  EXPECT_EQ(b.longest, ivec({3, 3}));
  const auto c = solve_lvp(sup(2, 2), PAdicLattice(Prime(2), {ivec({2, 0}), ivec({0, 4})}));
  EXPECT_EQ(c.longest, ivec({2, 0}));
  EXPECT_EQ(c.exponent, NormExponent(1));
}

TEST(Lvp, NoSampledVectorIsLonger) {
  Rng rng(29);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Instance inst = small_instance(61, k);
    const PAdicLattice l(inst.prime(), inst.basis);
    const auto best = solve_lvp(inst.norm, l);
    EXPECT_EQ(inst.norm.exponent(best.longest), best.exponent);
    std::vector<Integer> a(l.rank());
    for (int i = 0; i < 500; ++i) {
      for (auto& x : a) x = uniform_int(rng, -1000, 1000);
      EXPECT_GE(inst.norm.exponent(l.combine(a)), best.exponent);
    }
  }
}

TEST(BlackBox, SearchesOnlyNeedEvaluation) {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Instance inst = small_instance(71, k);
    const BlackBoxNorm box(inst.norm);
    const auto basis = normalized(inst.norm, inst.basis);
    const PAdicLattice l(inst.prime(), tail(basis));
    EXPECT_EQ(solve_cvp(box, l, basis.front()).closest, solve_cvp(inst.norm, l, basis.front()).closest);
    EXPECT_EQ(coset_norm_values(box, l, basis.front()).entries.size(),
              coset_norm_values(inst.norm, l, basis.front()).entries.size());
    EXPECT_EQ(solve_lvp(box, l).index, solve_lvp(inst.norm, l).index);
  }
}
