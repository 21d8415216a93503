#pragma once

// Dense matrices over an exact field. Subspaces are passed around as
// matrices whose rows form a basis.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "sheafstrata/field.hpp"

namespace sheafstrata {

template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<K>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  K& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<K> row(std::size_t i) const {
    return std::vector<K>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void append_row(const std::vector<K>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<K> apply(const std::vector<K>& x) const {
    std::vector<K> y(rows_, K(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(x[j] == 0)) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // Rows of a on top of rows of b.
  static Matrix stack(const Matrix& a, const Matrix& b) {
    if (a.rows_ == 0) return b;
    if (b.rows_ == 0) return a;
    Matrix m = a;
    m.data_.insert(m.data_.end(), b.data_.begin(), b.data_.end());
    m.rows_ += b.rows_;
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<K> data_;
};

template <class K>
struct Echelon {
  Matrix<K> reduced;                // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column of each row
};

template <class K>
Echelon<K> row_echelon(Matrix<K> m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && m(piv, c) == 0) ++piv;
    if (piv == R) continue;
    if (piv != r)
      for (std::size_t j = 0; j < C; ++j) std::swap(m(piv, j), m(r, j));
    const K inv = K(1) / m(r, c);
    for (std::size_t j = c; j < C; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const K f = m(i, c);
      for (std::size_t j = c; j < C; ++j)
        if (!(m(r, j) == 0)) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix<K> out(r, C);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < C; ++j) out(i, j) = m(i, j);
  return {std::move(out), std::move(pivots)};
}

namespace detail {
template <class K>
std::size_t rank_by_elimination(Matrix<K> m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && m(piv, c) == 0) ++piv;
    if (piv == R) continue;
    if (piv != r)
      for (std::size_t j = c; j < C; ++j) std::swap(m(piv, j), m(r, j));
    const K inv = K(1) / m(r, c);
    for (std::size_t i = r + 1; i < R; ++i) {
      if (m(i, c) == 0) continue;
      const K f = m(i, c) * inv;
      for (std::size_t j = c; j < C; ++j)
        if (!(m(r, j) == 0)) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

inline constexpr std::uint32_t kRankPrime = 2147483647u;
}  // namespace detail

template <class K>
std::size_t rank(const Matrix<K>& m) {
  if constexpr (std::is_same_v<K, Rational>) {
    // Rank mod p never exceeds the rank over Q, so a full rank mod p is a proof.
    const std::size_t full = std::min(m.rows(), m.cols());
    if (full == 0) return 0;
    ModP::Context ctx(detail::kRankPrime);
    Matrix<ModP> mp(m.rows(), m.cols());
    bool ok = true;
    for (std::size_t i = 0; i < m.rows() && ok; ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j).get_den() % detail::kRankPrime == 0) {
          ok = false;
          break;
        }
        mp(i, j) = ModP::from_rational(m(i, j));
      }
    if (ok && detail::rank_by_elimination(std::move(mp)) == full) return full;
    return detail::rank_by_elimination(m);
  } else {
    return detail::rank_by_elimination(m);
  }
}

// Rows of the result span {x : m x = 0}.
template <class K>
Matrix<K> nullspace(const Matrix<K>& m) {
  const std::size_t C = m.cols();
  Echelon<K> e = row_echelon(m);
  std::vector<bool> is_pivot(C, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  Matrix<K> out(C - e.pivots.size(), C);
  std::size_t k = 0;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    out(k, f) = K(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) out(k, e.pivots[i]) = -e.reduced(i, f);
    ++k;
  }
  return out;
}

// Basis (as rows) of the row space.
template <class K>
Matrix<K> row_space(const Matrix<K>& m) {
  return row_echelon(m).reduced;
}

template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& a, const std::vector<K>& b) {
  const std::size_t R = a.rows(), C = a.cols();
  Matrix<K> aug(R, C + 1);
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < C; ++j) aug(i, j) = a(i, j);
    aug(i, C) = b[i];
  }
  Echelon<K> e = row_echelon(std::move(aug));
  std::vector<K> x(C, K(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == C) return std::nullopt;
    x[e.pivots[i]] = e.reduced(i, C);
  }
  return x;
}

template <class K>
K determinant(Matrix<K> m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorKind::precondition, "determinant of a non-square matrix");
  K det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return K(0);
    if (piv != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const K inv = K(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const K f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) return std::nullopt;
  Matrix<K> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = K(1);
  }
  Echelon<K> e = row_echelon(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] >= n) return std::nullopt;
  Matrix<K> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = e.reduced(i, n + j);
  return out;
}

// True when v lies in the row space spanned by basis (rows, assumed independent).
template <class K>
bool in_row_space(const Matrix<K>& basis, const std::vector<K>& v) {
  Matrix<K> m = basis;
  if (m.rows() == 0) return std::all_of(v.begin(), v.end(), [](const K& x) { return x == 0; });
  m.append_row(v);
  return rank(m) == basis.rows();
}

}  // namespace sheafstrata
