#pragma once

// Seeded problem instances. Instance i of a corpus is drawn from an
// mt19937_64 seeded with derive_seed(corpus_seed, i), so every instance can be
// regenerated on its own from (seed, parameters).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/random.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth {

struct GenerationParams {
  unsigned long p = 2;
  std::size_t n = 2;
  unsigned long weight_denominator = 1;
  long entry_bound = 50;
  std::size_t rank = 0;  // basis size; 0 means n
  bool dual = false;     // also draw a second norm

  std::size_t basis_size() const { return rank == 0 ? n : rank; }
  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

struct Instance {
  WeightedCoordinateNorm norm;
  std::optional<WeightedCoordinateNorm> second_norm;
  std::vector<QVector> basis;
  std::optional<QVector> target;
  std::optional<std::uint64_t> seed;
  std::optional<GenerationParams> params;

  const Prime& prime() const { return norm.prime(); }
  std::size_t dimension() const { return norm.dimension(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

namespace detail {

inline void validate(const GenerationParams& params) {
  if (!Prime::is_prime(params.p)) throw Error(ErrorKind::InvalidParameters, std::to_string(params.p) + " is not prime");
  if (params.n < 1) throw Error(ErrorKind::InvalidParameters, "dimension must be at least 1");
  if (params.weight_denominator < 1) throw Error(ErrorKind::InvalidParameters, "weight denominator must be >= 1");
  if (params.entry_bound < 1) throw Error(ErrorKind::InvalidParameters, "entry bound must be >= 1");
  if (params.basis_size() > params.n) throw Error(ErrorKind::InvalidParameters, "rank exceeds dimension");
}

/// Elementary row operations with multipliers in [-2, 2] (unit determinant),
/// times a diagonal of p^0 or p^1 on the right.
inline WeightedCoordinateNorm random_norm(Rng& rng, const GenerationParams& params, unsigned long max_denominator) {
  const std::size_t n = params.n;
  const Prime p(params.p);
  QMatrix m = QMatrix::identity(n);
  if (n > 1) {
    for (std::size_t step = 0; step < 2 * n; ++step) {
      const auto i = static_cast<std::size_t>(uniform_below(rng, n));
      auto j = static_cast<std::size_t>(uniform_below(rng, n - 1));
      if (j >= i) ++j;
      std::int64_t c = uniform_int(rng, -2, 1);
      if (c >= 0) ++c;  // c in {-2, -1, 1, 2}
      for (std::size_t k = 0; k < n; ++k) m(i, k) += Rational(static_cast<long>(c)) * m(j, k);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (uniform_below(rng, 2) == 1) {
      for (std::size_t i = 0; i < n; ++i) m(i, k) *= p.value();
    }
  }
  const auto d = static_cast<long>(params.weight_denominator);
  std::vector<Rational> weights(n);
  for (auto& e : weights) {
    e = Rational(static_cast<long>(uniform_int(rng, -2 * d, 2 * d)), d);
    e.canonicalize();
  }
  return WeightedCoordinateNorm(p, std::move(m), std::move(weights), params.weight_denominator, max_denominator);
}

inline std::vector<QVector> random_basis(Rng& rng, const GenerationParams& params) {
  const std::size_t m = params.basis_size();
  for (;;) {
    std::vector<QVector> basis(m, QVector(params.n));
    for (auto& v : basis) {
      for (auto& x : v) x = static_cast<long>(uniform_int(rng, -params.entry_bound, params.entry_bound));
    }
    if (linearly_independent(basis)) return basis;
  }
}

}  // namespace detail

inline Instance generate_instance(std::uint64_t seed, const GenerationParams& params,
                                  unsigned long max_denominator = kDefaultMaxWeightDenominator) {
  detail::validate(params);
  Rng rng(seed);
  WeightedCoordinateNorm norm = detail::random_norm(rng, params, max_denominator);
  std::optional<WeightedCoordinateNorm> second;
  if (params.dual) second = detail::random_norm(rng, params, max_denominator);
  std::vector<QVector> basis = detail::random_basis(rng, params);
  return Instance{std::move(norm), std::move(second), std::move(basis), std::nullopt, seed, params};
}

inline std::vector<Instance> generate_instances(std::uint64_t seed, const GenerationParams& params, std::size_t count,
                                                unsigned long max_denominator = kDefaultMaxWeightDenominator) {
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(generate_instance(derive_seed(seed, i), params, max_denominator));
  }
  return out;
}

/// Regenerates a generated instance from its recorded seed and parameters.
inline Instance regenerate(const Instance& instance) {
  if (!instance.seed || !instance.params) {
    throw Error(ErrorKind::InvalidParameters, "instance carries no generation record");
  }
  return generate_instance(*instance.seed, *instance.params,
                           std::max(kDefaultMaxWeightDenominator, instance.params->weight_denominator));
}

}  // namespace padic_orth
