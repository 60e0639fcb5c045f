#pragma once

// Norms on Q_p^n, their exact exponents, and normalization into (1/p, 1].
//
// A norm value N(v) is never materialized as a real number. It is stored as
// the exponent w(v) = -log_p N(v), an exact rational (or +infinity for the
// zero vector). Larger norm means smaller exponent.

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth {

class NormExponent {
 public:
  NormExponent(Rational w) : w_(std::move(w)) {}  // NOLINT(google-explicit-constructor)
  NormExponent(long w) : w_(Rational(w)) {}       // NOLINT(google-explicit-constructor)
  static NormExponent infinity() { return NormExponent(); }

  bool is_infinite() const noexcept { return !w_.has_value(); }
  const Rational& value() const {
    if (!w_) throw Error(ErrorKind::ZeroVector, "exponent of the zero vector is infinite");
    return *w_;
  }

  /// Exponent of p^s * v given the exponent of v.
  NormExponent shifted(const Rational& s) const {
    if (!w_) return *this;
    return NormExponent(*w_ + s);
  }

  friend bool operator==(const NormExponent& a, const NormExponent& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.w_ == *b.w_;
  }
  friend std::strong_ordering operator<=>(const NormExponent& a, const NormExponent& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    const int c = cmp(*a.w_, *b.w_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const { return w_ ? padic_orth::to_string(*w_) : "inf"; }

  /// "p^(-w)" with p substituted, e.g. "2^(-3/2)"; "0" for the zero vector.
  std::string symbolic(const Prime& p) const {
    if (!w_) return "0";
    if (sgn(*w_) == 0) return "1";
    return std::to_string(p.value()) + "^(" + padic_orth::to_string(-*w_) + ")";
  }

 private:
  NormExponent() = default;
  std::optional<Rational> w_;
};

/// The evaluation-only contract every search and orthogonalization routine
/// consumes: exponent of a vector, the prime, the dimension, and the
/// denominator d of the value group p^((1/d)Z).
template <class N>
concept EvaluableNorm = requires(const N& norm, const QVector& v) {
  { norm.exponent(v) } -> std::same_as<NormExponent>;
  { norm.prime() } -> std::convertible_to<Prime>;
  { norm.dimension() } -> std::convertible_to<std::size_t>;
  { norm.value_denominator() } -> std::convertible_to<unsigned long>;
};

inline constexpr unsigned long kDefaultMaxWeightDenominator = 6;

/// N(v) = max_i p^(-e_i) * |(M v)_i|_p for an invertible rational M.
class WeightedCoordinateNorm {
 public:
  WeightedCoordinateNorm(Prime p, QMatrix matrix, std::vector<Rational> weights,
                         unsigned long weight_denominator = 1,
                         unsigned long max_weight_denominator = kDefaultMaxWeightDenominator)
      : p_(p), matrix_(std::move(matrix)), weights_(std::move(weights)), denominator_(weight_denominator) {
    if (!matrix_.is_square() || matrix_.rows() == 0) {
      throw Error(ErrorKind::InvalidParameters, "norm matrix must be square and nonempty");
    }
    if (weights_.size() != matrix_.rows()) {
      throw Error(ErrorKind::DimensionMismatch, "one weight per coordinate required");
    }
    if (denominator_ < 1 || denominator_ > max_weight_denominator) {
      throw Error(ErrorKind::InvalidParameters,
                  "weight denominator " + std::to_string(denominator_) + " outside [1, " +
                      std::to_string(max_weight_denominator) + "]");
    }
    for (auto& e : weights_) {
      e.canonicalize();
      if (!mpz_divisible_p(Integer(denominator_).get_mpz_t(), e.get_den_mpz_t())) {
        throw Error(ErrorKind::InvalidParameters,
                    "weight " + padic_orth::to_string(e) + " not in (1/" + std::to_string(denominator_) + ")Z");
      }
    }
    inverse_ = invert(matrix_);  // SingularMatrix when M is not invertible
  }

  static WeightedCoordinateNorm sup_norm(Prime p, std::size_t n) {
    return WeightedCoordinateNorm(p, QMatrix::identity(n), std::vector<Rational>(n, Rational(0)));
  }

  NormExponent exponent(const QVector& v) const {
    const std::size_t n = dimension();
    if (v.size() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "vector of size " + std::to_string(v.size()) + " for a norm on Q_p^" + std::to_string(n));
    }
    std::optional<Rational> best;
    Rational coord;
    for (std::size_t i = 0; i < n; ++i) {
      coord = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& mij = matrix_(i, j);
        if (sgn(mij) != 0 && sgn(v[j]) != 0) coord += mij * v[j];
      }
      if (sgn(coord) == 0) continue;
      Rational w = weights_[i] + valuation(coord, p_).value();
      if (!best || w < *best) best = std::move(w);
    }
    if (!best) return NormExponent::infinity();
    return NormExponent(std::move(*best));
  }

  const Prime& prime() const noexcept { return p_; }
  std::size_t dimension() const noexcept { return matrix_.rows(); }
  unsigned long value_denominator() const noexcept { return denominator_; }

  // Structure below is for the oracle, generator, and serialization only.
  const QMatrix& matrix() const noexcept { return matrix_; }
  const QMatrix& inverse() const noexcept { return inverse_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  friend bool operator==(const WeightedCoordinateNorm& a, const WeightedCoordinateNorm& b) {
    return a.p_ == b.p_ && a.matrix_ == b.matrix_ && a.weights_ == b.weights_ &&
           a.denominator_ == b.denominator_;
  }

 private:
  Prime p_;
  QMatrix matrix_;
  QMatrix inverse_;
  std::vector<Rational> weights_;
  unsigned long denominator_;
};

static_assert(EvaluableNorm<WeightedCoordinateNorm>);

/// Two norms on the same space over the same prime.
template <EvaluableNorm N1, EvaluableNorm N2 = N1>
struct NormPair {
  NormPair(N1 a, N2 b) : first(std::move(a)), second(std::move(b)) {
    if (!(Prime(first.prime()) == Prime(second.prime()))) {
      throw Error(ErrorKind::InvalidParameters, "norm pair over different primes");
    }
    if (first.dimension() != second.dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "norm pair over different dimensions");
    }
  }
  N1 first;
  N2 second;
};

/// v' = p^shift * v with exponent of v' in [0, 1), i.e. N(v') in (1/p, 1].
struct NormalizedVector {
  QVector vector;
  long shift = 0;
  NormExponent exponent = NormExponent::infinity();
};

template <EvaluableNorm N>
NormalizedVector normalize_vector(const N& norm, const QVector& v) {
  const NormExponent w = norm.exponent(v);
  if (w.is_infinite()) throw Error(ErrorKind::ZeroVector, "cannot normalize the zero vector");
  const Integer fl = floor_of(w.value());
  const long shift = -fl.get_si();
  const Prime p = norm.prime();
  NormalizedVector out;
  out.vector = shift == 0 ? v : prime_power(p, shift) * v;
  out.shift = shift;
  out.exponent = w.shifted(Rational(shift));
  return out;
}

/// Exponent lies in [0, 1).
inline bool is_normalized_exponent(const NormExponent& w) {
  return !w.is_infinite() && sgn(w.value()) >= 0 && w.value() < 1;
}

/// The norm N'(v) = inf { |x|_p^(-1) : x v in L } of a full-rank lattice with
/// the given basis. In coordinates c with v = sum c_i B_i it is max_i |c_i|_p,
/// so it is the weighted coordinate norm with M = B^(-1) and zero weights.
inline WeightedCoordinateNorm lattice_induced_norm(const std::vector<QVector>& basis, Prime p) {
  if (basis.empty()) throw Error(ErrorKind::InvalidParameters, "empty basis");
  const std::size_t n = basis.front().size();
  for (const auto& b : basis) {
    if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "basis vectors of different sizes");
  }
  if (basis.size() > n) throw Error(ErrorKind::SingularMatrix, "more basis vectors than dimensions");
  if (basis.size() < n) {
    throw Error(ErrorKind::NotFullRank,
                "induced norm needs a full-rank basis (" + std::to_string(basis.size()) + " < " + std::to_string(n) + ")");
  }
  QMatrix inv = invert(QMatrix::from_columns(basis));
  return WeightedCoordinateNorm(p, std::move(inv), std::vector<Rational>(n, Rational(0)));
}

}  // namespace padic_orth
