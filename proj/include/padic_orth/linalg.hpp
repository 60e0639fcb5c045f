#pragma once

// Exact rational vectors and matrices.
//
// Elimination always takes the first nonzero pivot at or below the current
// row, so results never depend on anything but the input.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "padic_orth/error.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth {

using QVector = std::vector<Rational>;

inline QVector zero_vector(std::size_t n) { return QVector(n, Rational(0)); }

inline bool is_zero(std::span<const Rational> v) {
  for (const auto& x : v) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

inline void require_same_size(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
}

inline QVector operator+(const QVector& a, const QVector& b) {
  require_same_size(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVector operator-(const QVector& a, const QVector& b) {
  require_same_size(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVector operator-(const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline QVector operator*(const Rational& s, const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

/// acc += s * a, in place.
inline void axpy(QVector& acc, const Rational& s, const QVector& a) {
  require_same_size(acc, a);
  for (std::size_t i = 0; i < a.size(); ++i) acc[i] += s * a[i];
}

/// Dense row-major rational matrix.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static QMatrix from_rows(const std::vector<QVector>& rows) {
    if (rows.empty()) return {};
    QMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Each vector becomes one column.
  static QMatrix from_columns(const std::vector<QVector>& cols) {
    if (cols.empty()) return {};
    QMatrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector row(std::size_t i) const { return QVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  QVector column(std::size_t j) const {
    QVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<QVector> columns() const {
    std::vector<QVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product shapes");
    QMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend QVector operator*(const QMatrix& a, const QVector& v) {
    if (a.cols_ != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector shapes");
    QVector r(a.rows_, Rational(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

inline std::optional<std::size_t> find_pivot(const QMatrix& m, std::size_t col, std::size_t from_row) {
  for (std::size_t r = from_row; r < m.rows(); ++r) {
    if (sgn(m(r, col)) != 0) return r;
  }
  return std::nullopt;
}

inline void swap_rows(QMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void require_square(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "square matrix required");
}

}  // namespace detail

inline Rational det(QMatrix m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  Rational result = 1;
  for (std::size_t c = 0; c < n; ++c) {
    auto piv = detail::find_pivot(m, c, c);
    if (!piv) return 0;
    if (*piv != c) {
      detail::swap_rows(m, *piv, c);
      result = -result;
    }
    const Rational p = m(c, c);
    result *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m(r, c)) == 0) continue;
      const Rational f = m(r, c) / p;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return result;
}

inline QMatrix invert(const QMatrix& input) {
  detail::require_square(input);
  const std::size_t n = input.rows();
  QMatrix m = input;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto piv = detail::find_pivot(m, c, c);
    if (!piv) throw Error(ErrorKind::SingularMatrix, "matrix is not invertible");
    detail::swap_rows(m, *piv, c);
    detail::swap_rows(inv, *piv, c);
    const Rational p = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(m(r, c)) == 0) continue;
      const Rational f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline QVector solve(const QMatrix& a, const QVector& b) {
  detail::require_square(a);
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side size");
  const std::size_t n = a.rows();
  QMatrix m = a;
  QVector x = b;
  for (std::size_t c = 0; c < n; ++c) {
    auto piv = detail::find_pivot(m, c, c);
    if (!piv) throw Error(ErrorKind::SingularMatrix, "system matrix is singular");
    if (*piv != c) {
      detail::swap_rows(m, *piv, c);
      std::swap(x[*piv], x[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m(r, c)) == 0) continue;
      const Rational f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
      x[r] -= f * x[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    Rational s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

/// Rank of a family of vectors (all of one length).
inline std::size_t rank(const std::vector<QVector>& vectors) {
  if (vectors.empty()) return 0;
  QMatrix m = QMatrix::from_rows(vectors);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    auto piv = detail::find_pivot(m, c, r);
    if (!piv) continue;
    detail::swap_rows(m, *piv, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

inline bool linearly_independent(const std::vector<QVector>& vectors) {
  return rank(vectors) == vectors.size();
}

/// Coefficients c with sum_j c_j * basis_j = v, or nullopt when v is outside
/// the span. The basis must be linearly independent (DependentBasis otherwise).
inline std::optional<QVector> coordinates(const std::vector<QVector>& basis, const QVector& v) {
  const std::size_t m = basis.size();
  if (m == 0) return is_zero(v) ? std::optional<QVector>(QVector{}) : std::nullopt;
  for (const auto& b : basis) require_same_size(b, v);
  const std::size_t n = v.size();
  // Augmented n x (m+1) system.
  QMatrix a(n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = basis[j][i];
    a(i, m) = v[i];
  }
  std::size_t r = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < m; ++c) {
    auto piv = detail::find_pivot(a, c, r);
    if (!piv) throw Error(ErrorKind::DependentBasis, "basis vectors are linearly dependent");
    detail::swap_rows(a, *piv, r);
    const Rational p = a(r, c);
    for (std::size_t j = c; j <= m; ++j) a(r, j) /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j <= m; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  for (std::size_t i = m; i < n; ++i) {
    if (sgn(a(i, m)) != 0) return std::nullopt;
  }
  QVector x(m);
  for (std::size_t j = 0; j < m; ++j) x[j] = a(j, m);
  return x;
}

}  // namespace padic_orth
