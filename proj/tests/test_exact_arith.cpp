#include <gtest/gtest.h>

#include "padic_orth/linalg.hpp"
#include "padic_orth/random.hpp"
#include "padic_orth/rational.hpp"
#include "support.hpp"

using namespace padic_orth;
using namespace padic_orth::testing;

namespace {

QMatrix random_matrix(Rng& rng, std::size_t n, long bound) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform_int(rng, -bound, bound);
  return m;
}

}  // namespace

TEST(Prime, RejectsComposites) {
  EXPECT_NO_THROW(Prime(2));
  EXPECT_NO_THROW(Prime(97));
  EXPECT_THROW(Prime(1), Error);
  EXPECT_THROW(Prime(0), Error);
  EXPECT_THROW(Prime(91), Error);
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(Rational(12), Prime(2)), ExtInt(2));
  EXPECT_EQ(valuation(Rational(0), Prime(5)), ExtInt::infinity());
  EXPECT_EQ(valuation(Rational(9, 10), Prime(5)), ExtInt(-1));
  EXPECT_EQ(valuation(Rational(-1, 8), Prime(2)), ExtInt(-3));
}

TEST(Valuation, MultiplicativeAndUltrametric) {
  Rng rng(11);
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    const Prime P(p);
    for (int i = 0; i < 2000; ++i) {
      const Rational x = random_nonzero_rational(rng, 200);
      const Rational y = random_nonzero_rational(rng, 200);
      EXPECT_EQ(valuation(Rational(x * y), P), valuation(x, P) + valuation(y, P));
      const ExtInt vx = valuation(x, P), vy = valuation(y, P), vs = valuation(Rational(x + y), P);
      EXPECT_GE(vs, std::min(vx, vy));
      if (vx != vy) {
        EXPECT_EQ(vs, std::min(vx, vy));
      }
    }
  }
}

TEST(ExtInt, InfinityOrdersLast) {
  EXPECT_LT(ExtInt(1000000), ExtInt::infinity());
  EXPECT_EQ(ExtInt(3) + ExtInt::infinity(), ExtInt::infinity());
  EXPECT_EQ(ExtInt::infinity().to_string(), "inf");
}

TEST(ParseRational, AcceptsCanonicalForms) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(to_string(parse_rational("4/6")), "2/3");
  for (const char* bad : {"", "1/0", "a", "1.5", "1/", "/2", "--1", "1/-2", " 3"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(PrimePower, NegativeExponents) {
  EXPECT_EQ(prime_power(Prime(3), 2), Rational(9));
  EXPECT_EQ(prime_power(Prime(3), -2), Rational(1, 9));
  EXPECT_EQ(prime_power(Prime(3), 0), Rational(1));
}

TEST(FloorOf, RoundsTowardMinusInfinity) {
  EXPECT_EQ(floor_of(Rational(-3, 2)), Integer(-2));
  EXPECT_EQ(floor_of(Rational(3, 2)), Integer(1));
  EXPECT_EQ(floor_of(Rational(-4)), Integer(-4));
}

TEST(Det, Examples) {
  EXPECT_EQ(det(QMatrix::identity(3)), Rational(1));
  EXPECT_EQ(det(QMatrix::from_rows({ivec({2, 4}), ivec({1, 3})})), Rational(2));
  EXPECT_EQ(det(QMatrix::from_rows({ivec({1, 2, 3}), ivec({4, 5, 6}), ivec({1, 2, 3})})), Rational(0));
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(QMatrix::identity(3)), QMatrix::identity(3));
  EXPECT_EQ(invert(QMatrix::from_rows({ivec({2, 0}), ivec({0, 1})})),
            QMatrix::from_rows({vec({"1/2", "0"}), vec({"0", "1"})}));
  try {
    invert(QMatrix::from_rows({ivec({1, 1}), ivec({2, 2})}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
}

TEST(Solve, Examples) {
  const QVector b = vec({"1", "3"});
  EXPECT_EQ(solve(QMatrix::identity(2), b), b);
  EXPECT_EQ(solve(QMatrix::from_rows({ivec({2, 0}), ivec({0, 1})}), b), vec({"1/2", "3"}));
  EXPECT_THROW(solve(QMatrix::from_rows({ivec({1, 1}), ivec({2, 2})}), b), Error);
}

TEST(LinearAlgebra, RandomizedIdentities) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const QMatrix a = random_matrix(rng, n, 6);
    const QMatrix b = random_matrix(rng, n, 6);
    EXPECT_EQ(det(a * b), det(a) * det(b));
    if (sgn(det(a)) == 0) continue;
    EXPECT_EQ(invert(invert(a)), a);
    EXPECT_EQ(a * invert(a), QMatrix::identity(n));
    const QVector rhs = random_rational_vector(rng, n, 30);
    EXPECT_EQ(a * solve(a, rhs), rhs);
  }
}

TEST(LinearAlgebra, RankAndCoordinates) {
  EXPECT_EQ(rank({ivec({1, 2, 3}), ivec({2, 4, 6})}), 1u);
  EXPECT_TRUE(linearly_independent({ivec({1, 0, 0}), ivec({1, 1, 0})}));
  const auto c = coordinates({ivec({1, 0, 0}), ivec({1, 1, 0})}, ivec({3, 2, 0}));
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, ivec({1, 2}));
  EXPECT_FALSE(coordinates({ivec({1, 0, 0}), ivec({1, 1, 0})}, ivec({0, 0, 1})));
}

TEST(LinearAlgebra, ShapeErrors) {
  EXPECT_THROW(det(QMatrix(2, 3)), Error);
  EXPECT_THROW(ivec({1, 2}) + ivec({1, 2, 3}), Error);
}

TEST(Random, BoundedDrawsStayInRange) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(uniform_below(rng, 7), 7u);
    const auto x = uniform_int(rng, -3, 3);
    EXPECT_GE(x, -3);
    EXPECT_LE(x, 3);
    const Integer big = uniform_integer_below(rng, Integer("1000000000000000000000"));
    EXPECT_GE(big, 0);
    EXPECT_LT(big, Integer("1000000000000000000000"));
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}
