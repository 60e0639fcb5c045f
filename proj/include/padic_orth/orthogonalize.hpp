#pragma once

// Norm-orthogonal bases over Q_p.
//
//   orthogonalize               one norm, any subspace basis
//   orthogonalize_simultaneous  a basis orthogonal for two norms at once
//   orthogonalize_rank2_lattice a basis of the same Z_p-lattice (rank 2)
//
// All of them reduce to closest-vector searches and consume norms only
// through the EvaluableNorm contract.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/lattice.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/random.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth {

struct OrthogonalBasisReport {
  std::vector<QVector> vectors;
  /// exponents[k][j] is the exponent of vectors[j] under the k-th norm.
  std::vector<std::vector<NormExponent>> exponents;
  /// Column j holds the coordinates of vectors[j] in the input basis.
  QMatrix change_of_basis;
  SearchStats stats;
};

struct OrthogonalVector {
  QVector vector;      // normalized, N-orthogonal to span(W)
  QVector correction;  // w0 from the closest-vector search
  NormExponent residual_exponent = NormExponent::infinity();  // w(u - w0)
  SearchStats stats;
};

/// Given an N-orthogonal basis of W with exponents in [0, 1) and a normalized
/// u outside W, returns normalize(u - w0) where w0 is the closest vector to u
/// in the Z_p-lattice spanned by that basis. The residual u - w0 attains the
/// minimum of N on u + L, hence N(u - w0 + x) = max(N(u - w0), N(x)) for
/// x in L; vectors of W outside L are longer than 1 >= N(u - w0).
template <EvaluableNorm N>
OrthogonalVector find_orthogonal_vector(const N& norm, const std::vector<QVector>& w_basis, const QVector& u,
                                        const SearchOptions& options = {}) {
  if (u.size() != norm.dimension()) throw Error(ErrorKind::DimensionMismatch, "vector size vs norm");
  for (const auto& b : w_basis) {
    if (b.size() != u.size()) throw Error(ErrorKind::DimensionMismatch, "basis vector size vs norm");
    if (!is_normalized_exponent(norm.exponent(b))) {
      throw Error(ErrorKind::NotNormalized, "hyperplane basis vector exponent outside [0, 1)");
    }
  }
  if (!is_normalized_exponent(norm.exponent(u))) {
    throw Error(ErrorKind::NotNormalized, "target exponent outside [0, 1)");
  }
  std::vector<QVector> all = w_basis;
  all.push_back(u);
  if (!linearly_independent(all)) throw Error(ErrorKind::DependentInput, "target depends on the hyperplane basis");

  OrthogonalVector out;
  if (w_basis.empty()) {
    out.vector = u;
    out.correction = zero_vector(u.size());
    out.residual_exponent = norm.exponent(u);
    return out;
  }
  const PAdicLattice lattice(norm.prime(), w_basis);
  CVPResult cvp = solve_cvp(norm, lattice, u, options);
  out.stats = cvp.stats;
  out.correction = std::move(cvp.closest);
  out.residual_exponent = cvp.distance;
  out.vector = normalize_vector(norm, u - out.correction).vector;
  return out;
}

namespace detail {

template <EvaluableNorm N>
std::vector<QVector> orthogonalize_span(const N& norm, const std::vector<QVector>& basis, SearchStats& stats,
                                        const SearchOptions& options) {
  if (basis.size() == 1) return {normalize_vector(norm, basis.front()).vector};
  const std::vector<QVector> tail_input(basis.begin() + 1, basis.end());
  std::vector<QVector> tail = orthogonalize_span(norm, tail_input, stats, options);
  const QVector head = normalize_vector(norm, basis.front()).vector;
  OrthogonalVector v1 = find_orthogonal_vector(norm, tail, head, options);
  stats += v1.stats;
  std::vector<QVector> out;
  out.reserve(basis.size());
  out.push_back(std::move(v1.vector));
  for (auto& v : tail) out.push_back(std::move(v));
  return out;
}

inline QMatrix change_of_basis(const std::vector<QVector>& input, const std::vector<QVector>& output) {
  QMatrix c(input.size(), output.size());
  for (std::size_t j = 0; j < output.size(); ++j) {
    auto coords = coordinates(input, output[j]);
    if (!coords) throw Error(ErrorKind::VerificationFailure, "output vector left the input span");
    for (std::size_t i = 0; i < input.size(); ++i) c(i, j) = (*coords)[i];
  }
  return c;
}

inline void require_basis(const std::vector<QVector>& basis, std::size_t dimension) {
  if (basis.empty()) throw Error(ErrorKind::InvalidParameters, "empty basis");
  for (const auto& b : basis) {
    if (b.size() != dimension) throw Error(ErrorKind::DimensionMismatch, "basis vector size vs norm");
  }
  if (basis.size() > dimension || !linearly_independent(basis)) {
    throw Error(ErrorKind::DependentBasis, "basis is linearly dependent");
  }
}

template <EvaluableNorm N>
std::vector<NormExponent> exponents_of(const N& norm, const std::vector<QVector>& vectors) {
  std::vector<NormExponent> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(norm.exponent(v));
  return out;
}

}  // namespace detail

/// An N-orthogonal basis of span(basis), every vector normalized to exponent
/// in [0, 1). The tail u_2..u_n is orthogonalized first, then u_1 is corrected
/// against it.
template <EvaluableNorm N>
OrthogonalBasisReport orthogonalize(const N& norm, const std::vector<QVector>& basis,
                                    const SearchOptions& options = {}) {
  detail::require_basis(basis, norm.dimension());
  OrthogonalBasisReport report;
  report.vectors = detail::orthogonalize_span(norm, basis, report.stats, options);
  report.exponents.push_back(detail::exponents_of(norm, report.vectors));
  report.change_of_basis = detail::change_of_basis(basis, report.vectors);
  return report;
}

struct Hyperplane {
  std::vector<QVector> vectors;
  SearchStats stats;
};

namespace detail {

template <EvaluableNorm N>
std::vector<QVector> hyperplane_span(const N& norm, const std::vector<QVector>& basis, const QVector& v1,
                                     SearchStats& stats, const SearchOptions& options) {
  const std::size_t n = basis.size();
  if (n == 1) return {};
  auto coords = coordinates(basis, v1);
  if (!coords) throw Error(ErrorKind::InvalidParameters, "vector is outside the span of the basis");

  // Replace the basis vector whose coefficient has the largest |.|_p (lowest
  // index on ties) by v1; correct the first remaining vector against V'.
  const Prime p = norm.prime();
  std::size_t replaced = n;
  ExtInt best = ExtInt::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const ExtInt v = valuation((*coords)[i], p);
    if (!v.is_infinite() && (replaced == n || v < best)) {
      best = v;
      replaced = i;
    }
  }
  const std::size_t excluded = replaced == 0 ? 1 : 0;

  std::vector<QVector> sub;
  sub.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != replaced && i != excluded) sub.push_back(basis[i]);
  }
  sub.push_back(v1);

  std::vector<QVector> inner = hyperplane_span(norm, sub, v1, stats, options);
  std::vector<QVector> sub_orthogonal = orthogonalize_span(norm, sub, stats, options);
  const QVector target = normalize_vector(norm, basis[excluded]).vector;
  OrthogonalVector u1 = find_orthogonal_vector(norm, sub_orthogonal, target, options);
  stats += u1.stats;

  std::vector<QVector> out;
  out.reserve(n - 1);
  out.push_back(std::move(u1.vector));
  for (auto& v : inner) out.push_back(std::move(v));
  return out;
}

}  // namespace detail

/// A basis of a hyperplane W of span(basis) with W N-orthogonal to v1.
template <EvaluableNorm N>
Hyperplane find_orthogonal_hyperplane(const N& norm, const std::vector<QVector>& basis, const QVector& v1,
                                      const SearchOptions& options = {}) {
  detail::require_basis(basis, norm.dimension());
  if (v1.size() != norm.dimension()) throw Error(ErrorKind::DimensionMismatch, "vector size vs norm");
  if (is_zero(v1)) throw Error(ErrorKind::ZeroVector, "hyperplane of the zero vector");
  Hyperplane out;
  out.vectors = detail::hyperplane_span(norm, basis, v1, out.stats, options);
  return out;
}

namespace detail {

template <EvaluableNorm N1, EvaluableNorm N2>
std::vector<QVector> simultaneous_span(const NormPair<N1, N2>& pair, const std::vector<QVector>& basis,
                                       SearchStats& stats, const SearchOptions& options) {
  if (basis.size() == 1) return {normalize_vector(pair.first, basis.front()).vector};
  RatioMaximizer top = maximize_norm_ratio(pair, basis, options);
  stats += top.stats;
  std::vector<QVector> w = hyperplane_span(pair.first, basis, top.vector, stats, options);
  std::vector<QVector> rest = simultaneous_span(pair, w, stats, options);
  std::vector<QVector> out;
  out.reserve(basis.size());
  out.push_back(normalize_vector(pair.first, top.vector).vector);
  for (auto& v : rest) out.push_back(std::move(v));
  return out;
}

}  // namespace detail

/// A basis orthogonal for both norms: v1 maximizes N/N', the rest is a
/// simultaneous basis of a hyperplane N-orthogonal to v1 (which is then also
/// N'-orthogonal to it). Vectors are normalized under the first norm.
template <EvaluableNorm N1, EvaluableNorm N2>
OrthogonalBasisReport orthogonalize_simultaneous(const NormPair<N1, N2>& pair, const std::vector<QVector>& basis,
                                                 const SearchOptions& options = {}) {
  detail::require_basis(basis, pair.first.dimension());
  OrthogonalBasisReport report;
  report.vectors = detail::simultaneous_span(pair, basis, report.stats, options);
  report.exponents.push_back(detail::exponents_of(pair.first, report.vectors));
  report.exponents.push_back(detail::exponents_of(pair.second, report.vectors));
  report.change_of_basis = detail::change_of_basis(basis, report.vectors);
  return report;
}

struct Rank2LatticeBasis {
  QVector alpha;
  QVector beta;
  /// Columns are the coordinates of alpha', beta' in (alpha, beta).
  QMatrix change_of_basis;
  SearchStats stats;
};

/// An N-orthogonal basis (alpha', beta') of the lattice Z_p alpha + Z_p beta:
/// alpha' is the closest element of alpha + Z_p beta to zero, beta' the
/// closest element of beta + Z_p alpha'. Nothing is rescaled.
template <EvaluableNorm N>
Rank2LatticeBasis orthogonalize_rank2_lattice(const N& norm, const QVector& alpha, const QVector& beta,
                                              const SearchOptions& options = {}) {
  if (alpha.size() != norm.dimension() || beta.size() != norm.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "vector size vs norm");
  }
  if (!linearly_independent({alpha, beta})) throw Error(ErrorKind::DependentInput, "alpha and beta are dependent");
  const Prime p = norm.prime();
  Rank2LatticeBasis out;

  CVPResult first = solve_cvp(norm, PAdicLattice(p, {beta}), alpha, options);
  out.alpha = alpha - first.closest;
  CVPResult second = solve_cvp(norm, PAdicLattice(p, {out.alpha}), beta, options);
  out.beta = beta - second.closest;
  out.stats += first.stats;
  out.stats += second.stats;

  // alpha' = alpha - k beta, beta' = beta - l alpha' = -l alpha + (1 + k l) beta.
  const Rational k(first.coefficients.front());
  const Rational l(second.coefficients.front());
  out.change_of_basis = QMatrix(2, 2);
  out.change_of_basis(0, 0) = 1;
  out.change_of_basis(1, 0) = -k;
  out.change_of_basis(0, 1) = -l;
  out.change_of_basis(1, 1) = 1 + k * l;
  return out;
}

struct SampledCheck {
  bool orthogonal = true;
  std::vector<Integer> witness;  // coefficients of a violating combination
  NormExponent witness_sum = NormExponent::infinity();    // w(sum a_i v_i)
  NormExponent witness_parts = NormExponent::infinity();  // min_i w(a_i v_i)
  std::uint64_t trials_run = 0;
};

/// One-sided check of the finite orthogonality criterion: for combinations
/// with one coefficient equal to 1 and the others in Z_p, the norm of the sum
/// must equal the largest norm of the parts. Trial t fixes coefficient t mod m
/// to 1 and draws the others uniformly from [0, p^depth).
template <EvaluableNorm N>
SampledCheck check_orthogonal_sampled(const N& norm, const std::vector<QVector>& vectors, std::uint64_t trials,
                                      unsigned depth, std::uint64_t seed = 0x6f7274686fULL) {
  SampledCheck out;
  if (vectors.empty()) return out;
  const Prime p = norm.prime();
  const Integer modulus = prime_power(p, static_cast<long>(depth)).get_num();
  std::vector<NormExponent> own = detail::exponents_of(norm, vectors);
  Rng rng(seed);
  std::vector<Integer> a(vectors.size());
  QVector sum(norm.dimension());
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t fixed = static_cast<std::size_t>(t % vectors.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = i == fixed ? Integer(1) : uniform_integer_below(rng, modulus);
    std::fill(sum.begin(), sum.end(), Rational(0));
    NormExponent parts = NormExponent::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (sgn(a[i]) == 0) continue;
      axpy(sum, Rational(a[i]), vectors[i]);
      NormExponent part = own[i].shifted(Rational(valuation(a[i], p)));
      if (part < parts) parts = std::move(part);
    }
    ++out.trials_run;
    NormExponent total = norm.exponent(sum);
    if (total != parts) {
      out.orthogonal = false;
      out.witness = a;
      out.witness_sum = std::move(total);
      out.witness_parts = std::move(parts);
      return out;
    }
  }
  return out;
}

}  // namespace padic_orth
