#pragma once

// Ground-truth checks that do not share code paths with the searches they
// verify: brute-force closest vectors, and an exact determinant criterion for
// orthogonality that reads the norm's coordinate structure.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/lattice.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth::oracle {

namespace detail {

/// Level-major digit string of a coefficient tuple modulo p^level.
inline std::vector<unsigned long> digit_string(const std::vector<Integer>& coefficients, unsigned long p,
                                               unsigned level) {
  std::vector<unsigned long> out;
  out.reserve(coefficients.size() * level);
  std::vector<Integer> rest = coefficients;
  for (unsigned j = 0; j < level; ++j) {
    for (auto& c : rest) {
      out.push_back(mpz_fdiv_q_ui(c.get_mpz_t(), c.get_mpz_t(), p));
    }
  }
  return out;
}

}  // namespace detail

/// Enumerates every coefficient tuple modulo p^k, for k = start_level, ...,
/// until the best exponent found is below k + c_L (so every branch at level
/// k is frozen and no refinement can do better). Ties are broken on the
/// level-major digit string. nodes_explored counts every tuple evaluated,
/// over all levels tried.
template <EvaluableNorm N>
CVPResult exhaustive_cvp(const N& norm, const PAdicLattice& lattice, const QVector& target, unsigned start_level = 0,
                         const SearchOptions& options = {}) {
  const Prime p = norm.prime();
  if (target.size() != lattice.ambient_dimension() || norm.dimension() != target.size()) {
    throw Error(ErrorKind::DimensionMismatch, "norm, lattice, and target dimensions differ");
  }
  if (auto c = coordinates(lattice.basis(), target)) {
    const bool integral = std::all_of(c->begin(), c->end(), [&](const Rational& x) {
      return sgn(x) == 0 || valuation(x, p).value() >= 0;
    });
    if (integral) throw Error(ErrorKind::TargetInLattice, "target vector lies in the lattice");
  }

  const std::size_t m = lattice.rank();
  Rational c_l;
  for (std::size_t j = 0; j < m; ++j) {
    const Rational w = norm.exponent(lattice.basis()[j]).value();
    if (j == 0 || w < c_l) c_l = w;
  }

  CVPResult result;
  result.stats.calls = 1;
  for (unsigned level = start_level;; ++level) {
    if (level > options.max_level) throw Error(ErrorKind::ResourceExhausted, "exhaustive search hit the level cap");
    const Integer modulus = prime_power(p, static_cast<long>(level)).get_num();

    std::vector<Integer> a(m, Integer(0));
    QVector residual = target;
    std::optional<NormExponent> best;
    std::vector<Integer> best_coeffs;
    std::vector<unsigned long> best_key;
    for (;;) {
      result.stats.nodes_explored += 1;
      result.stats.norm_evaluations += 1;
      if (result.stats.nodes_explored > options.max_nodes) {
        throw Error(ErrorKind::ResourceExhausted, "exhaustive search exceeded its node budget");
      }
      NormExponent w = norm.exponent(residual);
      if (w.is_infinite()) throw Error(ErrorKind::TargetInLattice, "a lattice vector equals the target");
      if (!best || w > *best) {
        best = std::move(w);
        best_coeffs = a;
        best_key = detail::digit_string(a, p.value(), level);
      } else if (w == *best) {
        auto key = detail::digit_string(a, p.value(), level);
        if (key < best_key) {
          best_coeffs = a;
          best_key = std::move(key);
        }
      }
      // Odometer step over [0, modulus)^m, last coefficient fastest.
      std::size_t i = m;
      while (i > 0) {
        --i;
        a[i] += 1;
        if (a[i] < modulus) {
          axpy(residual, Rational(-1), lattice.basis()[i]);
          break;
        }
        axpy(residual, Rational(modulus - 1), lattice.basis()[i]);
        a[i] = 0;
        if (i == 0) {
          i = m + 1;  // wrapped around completely
          break;
        }
      }
      if (i == m + 1 || m == 0) break;
    }

    if (best->value() < Rational(static_cast<long>(level)) + c_l) {
      result.level = level;
      result.stats.terminal_level = level;
      result.coefficients = std::move(best_coeffs);
      result.closest = lattice.combine(result.coefficients);
      result.distance = std::move(*best);
      return result;
    }
  }
}

struct DeterminantCheck {
  bool orthogonal = false;
  Rational determinant_exponent;  // min over row subsets S of val(det Y_S) + sum_{i in S} e_i
  Rational exponent_sum;          // sum_j w(v_j)
};

/// Exact orthogonality criterion for a weighted coordinate norm. With
/// Y = M [v_1 .. v_m], the Hadamard-type bound gives
///   min_S ( val det Y_S + sum_{i in S} e_i ) >= sum_j w(v_j)
/// over all m-row subsets S, with equality exactly when v_1..v_m are
/// N-orthogonal.
inline DeterminantCheck check_orthogonal_determinant(const WeightedCoordinateNorm& norm,
                                                     const std::vector<QVector>& vectors) {
  DeterminantCheck out;
  const std::size_t n = norm.dimension();
  const std::size_t m = vectors.size();
  if (m == 0) throw Error(ErrorKind::InvalidParameters, "no vectors to check");
  for (const auto& v : vectors) {
    if (v.size() != n) throw Error(ErrorKind::DimensionMismatch, "vector size vs norm");
  }
  if (m > n) throw Error(ErrorKind::DependentInput, "more vectors than dimensions");

  const QMatrix y = norm.matrix() * QMatrix::from_columns(vectors);
  const Prime& p = norm.prime();

  std::optional<Rational> best;
  std::vector<bool> chosen(n, false);
  std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    QMatrix minor(m, m);
    Rational weight = 0;
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i]) continue;
      for (std::size_t j = 0; j < m; ++j) minor(r, j) = y(i, j);
      weight += norm.weights()[i];
      ++r;
    }
    const Rational d = det(minor);
    if (sgn(d) != 0) {
      Rational w = weight + valuation(d, p).value();
      if (!best || w < *best) best = std::move(w);
    }
  } while (std::prev_permutation(chosen.begin(), chosen.end()));

  if (!best) throw Error(ErrorKind::DependentInput, "vectors are linearly dependent");
  out.determinant_exponent = *best;
  out.exponent_sum = 0;
  for (const auto& v : vectors) out.exponent_sum += norm.exponent(v).value();
  out.orthogonal = out.determinant_exponent == out.exponent_sum;
  return out;
}

}  // namespace padic_orth::oracle
