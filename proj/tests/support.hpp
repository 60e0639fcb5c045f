#pragma once

#include <string>
#include <vector>

#include "padic_orth/generator.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/rational.hpp"
#include "padic_orth/selftest.hpp"

namespace padic_orth::testing {

using selftest::detail::normalized;
using selftest::detail::random_integer_vector;
using selftest::detail::random_nonzero_rational;
using selftest::detail::random_rational_vector;

inline QVector vec(std::initializer_list<const char*> xs) {
  QVector v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return v;
}

inline QVector ivec(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

inline WeightedCoordinateNorm sup(unsigned long p, std::size_t n) {
  return WeightedCoordinateNorm::sup_norm(Prime(p), n);
}

/// Only what EvaluableNorm asks for; the algorithms must not need more.
class BlackBoxNorm {
 public:
  explicit BlackBoxNorm(WeightedCoordinateNorm inner) : inner_(std::move(inner)) {}
  NormExponent exponent(const QVector& v) const { return inner_.exponent(v); }
  Prime prime() const { return inner_.prime(); }
  std::size_t dimension() const { return inner_.dimension(); }
  unsigned long value_denominator() const { return inner_.value_denominator(); }

 private:
  WeightedCoordinateNorm inner_;
};

static_assert(EvaluableNorm<BlackBoxNorm>);

/// Generated instances cycling p in {2, 3} and n in {2, 3}.
inline Instance small_instance(std::uint64_t seed, std::uint64_t k, bool dual = false) {
  GenerationParams g;
  g.p = k % 2 == 0 ? 2 : 3;
  g.n = 2 + (k / 2) % 2;
  g.weight_denominator = 1 + (k / 4) % 2;
  g.entry_bound = 20;
  g.dual = dual;
  return generate_instance(derive_seed(seed, k), g);
}

}  // namespace padic_orth::testing
