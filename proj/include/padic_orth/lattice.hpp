#pragma once

// p-adic lattices and the digit-refinement search behind CVP, coset norm
// tables, the norm-ratio maximizer, and LVP.
//
// A search branch at level k fixes every lattice coefficient modulo p^k; it
// stands for { w + p^k u : u in L } where w is the branch representative with
// coefficients in [0, p^k). With c_L = min_j w(b_j) every p^k u has exponent
// >= k + c_L, so once w(t - w) < k + c_L the ultrametric equality pins
// N(t - w - p^k u) = N(t - w) for the whole branch: the branch is frozen.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/random.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth {

/// L = { sum a_i b_i : a_i in Z_p } for linearly independent b_1..b_m.
class PAdicLattice {
 public:
  PAdicLattice(Prime p, std::vector<QVector> basis) : p_(p), basis_(std::move(basis)) {
    if (basis_.empty()) throw Error(ErrorKind::InvalidParameters, "lattice needs at least one basis vector");
    const std::size_t n = basis_.front().size();
    if (n == 0) throw Error(ErrorKind::InvalidParameters, "zero-length basis vector");
    for (const auto& b : basis_) {
      if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "lattice basis vectors of different sizes");
    }
    if (basis_.size() > n || !linearly_independent(basis_)) {
      throw Error(ErrorKind::DependentBasis, "lattice basis is linearly dependent");
    }
  }

  const Prime& prime() const noexcept { return p_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  std::size_t ambient_dimension() const noexcept { return basis_.front().size(); }
  const std::vector<QVector>& basis() const noexcept { return basis_; }

  /// Q-coordinates of v in the basis, or nullopt when v is outside the span.
  std::optional<QVector> coordinates(const QVector& v) const {
    if (v.size() != ambient_dimension()) throw Error(ErrorKind::DimensionMismatch, "vector size vs lattice");
    return padic_orth::coordinates(basis_, v);
  }

  /// v in L iff v is in the span with all coordinates in Z_p.
  bool contains(const QVector& v) const {
    auto c = coordinates(v);
    if (!c) return false;
    return std::all_of(c->begin(), c->end(), [&](const Rational& x) { return valuation(x, p_) >= ExtInt(0); });
  }

  QVector combine(std::span<const Integer> coefficients) const {
    if (coefficients.size() != rank()) throw Error(ErrorKind::DimensionMismatch, "coefficient count vs rank");
    QVector v = zero_vector(ambient_dimension());
    for (std::size_t i = 0; i < rank(); ++i) {
      if (sgn(coefficients[i]) != 0) axpy(v, Rational(coefficients[i]), basis_[i]);
    }
    return v;
  }

 private:
  Prime p_;
  std::vector<QVector> basis_;
};

struct SearchOptions {
  unsigned max_level = 64;
  std::uint64_t max_nodes = 20'000'000;
};

struct SearchStats {
  std::uint64_t calls = 0;
  std::uint64_t nodes_explored = 0;
  std::uint64_t norm_evaluations = 0;
  unsigned terminal_level = 0;  // deepest terminal level over all calls

  SearchStats& operator+=(const SearchStats& o) {
    calls += o.calls;
    nodes_explored += o.nodes_explored;
    norm_evaluations += o.norm_evaluations;
    terminal_level = std::max(terminal_level, o.terminal_level);
    return *this;
  }
};

struct CVPResult {
  QVector closest;                    // w0 in L
  std::vector<Integer> coefficients;  // w0 = sum coefficients_i b_i, each in [0, p^level)
  NormExponent distance = NormExponent::infinity();  // w(t - w0)
  unsigned level = 0;
  SearchStats stats;
};

struct CosetValue {
  NormExponent exponent;
  QVector representative;  // an element t - w of the coset achieving the exponent
};

/// The finite set { w(t + x) : x in L }, ascending by exponent.
struct CosetValueTable {
  std::vector<CosetValue> entries;
  SearchStats stats;

  /// Entry of minimal norm, i.e. maximal exponent.
  const CosetValue& closest() const { return entries.back(); }
};

namespace detail {

struct Branch {
  std::vector<Integer> coefficients;
  QVector residual;  // t - sum coefficients_i b_i
  NormExponent exponent = NormExponent::infinity();
};

inline void require_compatible(const Prime& norm_prime, std::size_t norm_dim, const PAdicLattice& lattice,
                               const QVector& target) {
  if (!(norm_prime == lattice.prime())) {
    throw Error(ErrorKind::InvalidParameters, "norm and lattice use different primes");
  }
  if (target.size() != lattice.ambient_dimension() || norm_dim != target.size()) {
    throw Error(ErrorKind::DimensionMismatch, "norm, lattice, and target dimensions differ");
  }
}

inline void require_outside(const PAdicLattice& lattice, const QVector& target) {
  if (lattice.contains(target)) throw Error(ErrorKind::TargetInLattice, "target vector lies in the lattice");
}

template <EvaluableNorm N>
Rational min_basis_exponent(const N& norm, const PAdicLattice& lattice) {
  std::optional<Rational> c;
  for (const auto& b : lattice.basis()) {
    const NormExponent w = norm.exponent(b);
    if (!c || w.value() < *c) c = w.value();
  }
  return *c;
}

/// True when exponent w is frozen at level k: w < k + c.
inline bool frozen(const NormExponent& w, unsigned level, const Rational& c) {
  return !w.is_infinite() && w.value() < Rational(static_cast<long>(level)) + c;
}

/// Calls visit(coefficients, residual) for each child of `parent`, with digit
/// tuples in lexicographic order (first coefficient most significant).
/// scaled_i = step * b_i where step = p^(child_level - 1).
template <class Visit>
void for_each_child(const Branch& parent, const std::vector<QVector>& scaled, const Integer& step,
                    unsigned long p, Visit&& visit) {
  const std::size_t m = scaled.size();
  std::vector<Integer> coeffs = parent.coefficients;
  // partial[i] is the residual with digits for positions 0..i-1 applied.
  std::vector<QVector> partial(m + 1);
  partial[0] = parent.residual;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      visit(coeffs, partial[m]);
      return;
    }
    const Integer base = coeffs[i];
    partial[i + 1] = partial[i];
    for (unsigned long d = 0; d < p; ++d) {
      if (d > 0) {
        for (std::size_t k = 0; k < partial[i + 1].size(); ++k) partial[i + 1][k] -= scaled[i][k];
        coeffs[i] += step;
      }
      self(self, i + 1);
    }
    coeffs[i] = base;
  };
  recurse(recurse, 0);
}

inline std::uint64_t children_per_node(unsigned long p, std::size_t rank) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < rank; ++i) c *= p;
  return c;
}

inline std::vector<QVector> scaled_basis(const PAdicLattice& lattice, const Rational& scale) {
  std::vector<QVector> out;
  out.reserve(lattice.rank());
  for (const auto& b : lattice.basis()) out.push_back(scale * b);
  return out;
}

inline void charge_nodes(SearchStats& stats, std::uint64_t count, const SearchOptions& options) {
  stats.nodes_explored += count;
  if (stats.nodes_explored > options.max_nodes) {
    throw Error(ErrorKind::ResourceExhausted,
                "search exceeded " + std::to_string(options.max_nodes) + " nodes");
  }
}

inline void check_level(unsigned level, const SearchOptions& options) {
  if (level > options.max_level) {
    throw Error(ErrorKind::ResourceExhausted,
                "search exceeded the level cap of " + std::to_string(options.max_level));
  }
}

}  // namespace detail

/// Closest vector: w0 in L minimizing N(t - w0), found by breadth-first digit
/// refinement. Frozen branches are never expanded; a level that still has an
/// unfrozen branch discards its frozen ones, since every value reachable from
/// an unfrozen branch is strictly smaller in norm. Among minimizers the first
/// in breadth-first order wins, which is the lexicographically smallest digit
/// string (level-major, coefficient index minor).
template <EvaluableNorm N>
CVPResult solve_cvp(const N& norm, const PAdicLattice& lattice, const QVector& target,
                    const SearchOptions& options = {}) {
  const Prime p = norm.prime();
  detail::require_compatible(p, norm.dimension(), lattice, target);
  detail::require_outside(lattice, target);

  CVPResult result;
  SearchStats& stats = result.stats;
  stats.calls = 1;
  const Rational c_l = detail::min_basis_exponent(norm, lattice);
  stats.norm_evaluations += lattice.rank();

  detail::Branch root{std::vector<Integer>(lattice.rank(), Integer(0)), target, norm.exponent(target)};
  ++stats.norm_evaluations;
  detail::charge_nodes(stats, 1, options);

  std::vector<detail::Branch> frontier;
  std::optional<detail::Branch> best;
  unsigned level = 0;
  if (detail::frozen(root.exponent, 0, c_l)) {
    best = std::move(root);
  } else {
    frontier.push_back(std::move(root));
  }

  while (!frontier.empty()) {
    ++level;
    detail::check_level(level, options);
    const Rational scale = prime_power(p, static_cast<long>(level) - 1);
    const std::vector<QVector> scaled = detail::scaled_basis(lattice, scale);
    const Integer step(scale.get_num());

    std::vector<detail::Branch> next;
    std::optional<detail::Branch> best_frozen;
    for (const auto& parent : frontier) {
      detail::charge_nodes(stats, detail::children_per_node(p.value(), lattice.rank()), options);
      detail::for_each_child(parent, scaled, step, p.value(), [&](const std::vector<Integer>& c, const QVector& r) {
        NormExponent w = norm.exponent(r);
        ++stats.norm_evaluations;
        if (w.is_infinite()) throw Error(ErrorKind::TargetInLattice, "a lattice vector equals the target");
        if (!detail::frozen(w, level, c_l)) {
          next.push_back(detail::Branch{c, r, std::move(w)});
        } else if (next.empty() && (!best_frozen || w > best_frozen->exponent)) {
          best_frozen = detail::Branch{c, r, std::move(w)};
        }
      });
    }
    if (next.empty()) best = std::move(best_frozen);
    frontier = std::move(next);
  }

  stats.terminal_level = level;
  result.level = level;
  result.coefficients = std::move(best->coefficients);
  result.closest = lattice.combine(result.coefficients);
  result.distance = std::move(best->exponent);
  return result;
}

/// Every norm value taken on the coset t + L, each with a representative.
/// The search runs without value pruning until every branch freezes. With
/// extra_levels > 0 each frozen branch is additionally refined that many more
/// levels and every descendant's value is recorded; by the freeze rule this
/// cannot change the table.
template <EvaluableNorm N>
CosetValueTable coset_norm_values(const N& norm, const PAdicLattice& lattice, const QVector& target,
                                  unsigned extra_levels = 0, const SearchOptions& options = {}) {
  const Prime p = norm.prime();
  detail::require_compatible(p, norm.dimension(), lattice, target);
  detail::require_outside(lattice, target);

  CosetValueTable table;
  SearchStats& stats = table.stats;
  stats.calls = 1;
  const Rational c_l = detail::min_basis_exponent(norm, lattice);
  stats.norm_evaluations += lattice.rank();
  const auto children_per_node = detail::children_per_node(p.value(), lattice.rank());

  std::map<NormExponent, QVector> values;
  auto record = [&](const NormExponent& w, const QVector& r) { values.try_emplace(w, r); };

  // Refines a frozen branch `depth` more levels, recording every descendant.
  auto deepen = [&](const detail::Branch& b, unsigned level, unsigned depth) {
    std::vector<detail::Branch> layer{b};
    for (unsigned extra = 1; extra <= depth; ++extra) {
      const Rational scale = prime_power(p, static_cast<long>(level + extra) - 1);
      const std::vector<QVector> scaled = detail::scaled_basis(lattice, scale);
      const Integer step(scale.get_num());
      std::vector<detail::Branch> next;
      for (const auto& parent : layer) {
        detail::charge_nodes(stats, children_per_node, options);
        detail::for_each_child(parent, scaled, step, p.value(), [&](const std::vector<Integer>& c, const QVector& r) {
          NormExponent w = norm.exponent(r);
          ++stats.norm_evaluations;
          record(w, r);
          next.push_back(detail::Branch{c, r, std::move(w)});
        });
      }
      layer = std::move(next);
    }
  };

  detail::Branch root{std::vector<Integer>(lattice.rank(), Integer(0)), target, norm.exponent(target)};
  ++stats.norm_evaluations;
  detail::charge_nodes(stats, 1, options);
  std::vector<detail::Branch> frontier;
  unsigned level = 0;
  if (detail::frozen(root.exponent, 0, c_l)) {
    record(root.exponent, root.residual);
    if (extra_levels > 0) deepen(root, 0, extra_levels);
  } else {
    frontier.push_back(std::move(root));
  }

  while (!frontier.empty()) {
    ++level;
    detail::check_level(level, options);
    const Rational scale = prime_power(p, static_cast<long>(level) - 1);
    const std::vector<QVector> scaled = detail::scaled_basis(lattice, scale);
    const Integer step(scale.get_num());
    std::vector<detail::Branch> next;
    std::vector<detail::Branch> frozen_here;
    for (const auto& parent : frontier) {
      detail::charge_nodes(stats, children_per_node, options);
      detail::for_each_child(parent, scaled, step, p.value(), [&](const std::vector<Integer>& c, const QVector& r) {
        NormExponent w = norm.exponent(r);
        ++stats.norm_evaluations;
        if (w.is_infinite()) throw Error(ErrorKind::TargetInLattice, "a lattice vector equals the target");
        detail::Branch b{c, r, std::move(w)};
        if (detail::frozen(b.exponent, level, c_l)) {
          record(b.exponent, b.residual);
          if (extra_levels > 0) frozen_here.push_back(std::move(b));
        } else {
          next.push_back(std::move(b));
        }
      });
    }
    for (const auto& b : frozen_here) deepen(b, level, extra_levels);
    frontier = std::move(next);
  }
  stats.terminal_level = level;

  table.entries.reserve(values.size());
  for (auto& [w, r] : values) table.entries.push_back(CosetValue{w, std::move(r)});
  return table;
}

struct RatioMaximizer {
  QVector vector;            // v1, an element u_j - w of one of the cosets
  Rational ratio_exponent;   // w_N(v1) - w_N'(v1); N/N' = p^(-ratio_exponent)
  std::size_t coset_index = 0;
  SearchStats stats;
};

/// A nonzero v1 in span(basis) maximizing N(v)/N'(v).
///
/// Every nonzero v divided by its largest coordinate a_j (in |.|_p) lies in
/// u_j + L_j, L_j the Z_p-span of the other basis vectors, and the ratio is
/// scale invariant. Each coset is refined until every branch is frozen under
/// both norms, at which point the ratio is constant on the branch. Basis
/// vectors are first normalized under the first norm. Ties go to the smallest
/// j, then breadth-first order.
template <EvaluableNorm N1, EvaluableNorm N2>
RatioMaximizer maximize_norm_ratio(const NormPair<N1, N2>& pair, const std::vector<QVector>& basis,
                                   const SearchOptions& options = {}) {
  const N1& first = pair.first;
  const N2& second = pair.second;
  const Prime p = first.prime();
  if (basis.empty()) throw Error(ErrorKind::InvalidParameters, "empty basis");
  for (const auto& b : basis) {
    if (b.size() != first.dimension()) throw Error(ErrorKind::DimensionMismatch, "basis vector size vs norm");
  }
  if (!linearly_independent(basis)) throw Error(ErrorKind::DependentBasis, "basis is linearly dependent");

  std::vector<QVector> normalized;
  normalized.reserve(basis.size());
  for (const auto& b : basis) normalized.push_back(normalize_vector(first, b).vector);

  RatioMaximizer best;
  bool have_best = false;
  auto consider = [&](const QVector& v, const Rational& diff, std::size_t j) {
    if (!have_best || diff < best.ratio_exponent) {
      best.vector = v;
      best.ratio_exponent = diff;
      best.coset_index = j;
      have_best = true;
    }
  };

  for (std::size_t j = 0; j < normalized.size(); ++j) {
    const QVector& target = normalized[j];
    SearchStats& stats = best.stats;
    ++stats.calls;
    if (normalized.size() == 1) {
      const NormExponent w1 = first.exponent(target);
      const NormExponent w2 = second.exponent(target);
      stats.norm_evaluations += 2;
      consider(target, w1.value() - w2.value(), j);
      continue;
    }
    std::vector<QVector> others;
    for (std::size_t i = 0; i < normalized.size(); ++i) {
      if (i != j) others.push_back(normalized[i]);
    }
    const PAdicLattice lattice(p, std::move(others));
    const Rational c1 = detail::min_basis_exponent(first, lattice);
    const Rational c2 = detail::min_basis_exponent(second, lattice);
    stats.norm_evaluations += 2 * lattice.rank();
    const auto children_per_node = detail::children_per_node(p.value(), lattice.rank());

    auto settle = [&](const QVector& r, unsigned level, std::vector<detail::Branch>& next,
                      const std::vector<Integer>& c) {
      NormExponent w1 = first.exponent(r);
      const NormExponent w2 = second.exponent(r);
      stats.norm_evaluations += 2;
      if (w1.is_infinite()) throw Error(ErrorKind::DependentBasis, "coset meets zero");
      if (detail::frozen(w1, level, c1) && detail::frozen(w2, level, c2)) {
        consider(r, w1.value() - w2.value(), j);
      } else {
        next.push_back(detail::Branch{c, r, std::move(w1)});
      }
    };

    std::vector<detail::Branch> frontier;
    detail::charge_nodes(stats, 1, options);
    settle(target, 0, frontier, std::vector<Integer>(lattice.rank(), Integer(0)));
    unsigned level = 0;
    while (!frontier.empty()) {
      ++level;
      detail::check_level(level, options);
      const Rational scale = prime_power(p, static_cast<long>(level) - 1);
      const std::vector<QVector> scaled = detail::scaled_basis(lattice, scale);
      const Integer step(scale.get_num());
      std::vector<detail::Branch> next;
      for (const auto& parent : frontier) {
        detail::charge_nodes(stats, children_per_node, options);
        detail::for_each_child(parent, scaled, step, p.value(),
                               [&](const std::vector<Integer>& c, const QVector& r) { settle(r, level, next, c); });
      }
      frontier = std::move(next);
    }
    stats.terminal_level = std::max(stats.terminal_level, level);
  }
  return best;
}

struct LVPResult {
  QVector longest;
  NormExponent exponent = NormExponent::infinity();
  std::size_t index = 0;
};

/// A lattice vector of maximal norm. The ultrametric inequality bounds every
/// lattice vector by max_j N(b_j), so the answer is the basis vector of largest
/// norm (lowest index on ties). The bound is spot-checked on sampled
/// coefficient tuples before returning.
template <EvaluableNorm N>
LVPResult solve_lvp(const N& norm, const PAdicLattice& lattice, unsigned samples = 32) {
  if (norm.dimension() != lattice.ambient_dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "norm and lattice dimensions differ");
  }
  LVPResult out;
  for (std::size_t j = 0; j < lattice.rank(); ++j) {
    NormExponent w = norm.exponent(lattice.basis()[j]);
    if (j == 0 || w < out.exponent) {
      out.exponent = std::move(w);
      out.index = j;
    }
  }
  out.longest = lattice.basis()[out.index];

  Rng rng(0x4c5650ULL);
  const Integer modulus = Integer(lattice.prime().value()) * lattice.prime().value() * lattice.prime().value();
  std::vector<Integer> coeffs(lattice.rank());
  for (unsigned s = 0; s < samples; ++s) {
    for (auto& c : coeffs) c = uniform_integer_below(rng, modulus);
    if (norm.exponent(lattice.combine(coeffs)) < out.exponent) {
      throw Error(ErrorKind::VerificationFailure, "lattice vector longer than every basis vector");
    }
  }
  return out;
}

}  // namespace padic_orth
