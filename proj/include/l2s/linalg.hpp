/**
 * Exact rank and determinant kernels.
 *
 * Ranks over Q use sparse row-echelon insertion on rationals. Ranks over Q(t)
 * use fraction-free (Bareiss) elimination directly in Q[t^+-1], which is an
 * integral domain, so every division step is exact. A cheaper evaluation
 * path is tried first: the rank of m(t0) never exceeds the rank over Q(t), so
 * an evaluation that already attains min(rows, cols) is conclusive.
 */
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace l2s {

namespace detail {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// a - f * b for rows sorted by column index.
inline SparseRow sub_scaled(const SparseRow& a, const Rational& f, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -f * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second - f * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

/// Incremental row echelon form over Q; rank() is the number of independent
/// vectors inserted so far.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t length) : pivots_(length) {}

  /// Returns true if v was independent of the vectors already inserted.
  bool insert(detail::SparseRow v) {
    while (!v.empty()) {
      const std::size_t lead = v.front().first;
      auto& pivot = pivots_[lead];
      if (!pivot) {
        const Rational inv = Rational(1) / v.front().second;
        for (auto& [c, x] : v) x *= inv;
        pivot = std::move(v);
        ++rank_;
        return true;
      }
      const Rational f = v.front().second;
      v = detail::sub_scaled(v, f, *pivot);
    }
    return false;
  }

  std::size_t rank() const { return rank_; }

 private:
  std::vector<std::optional<detail::SparseRow>> pivots_;
  std::size_t rank_ = 0;
};

inline std::size_t rank(const Matrix<Rational>& m) {
  const bool by_rows = m.rows() <= m.cols();
  const std::size_t count = by_rows ? m.rows() : m.cols();
  const std::size_t length = by_rows ? m.cols() : m.rows();
  EchelonBasis basis(length);
  for (std::size_t v = 0; v < count && basis.rank() < length; ++v) {
    detail::SparseRow row;
    for (std::size_t k = 0; k < length; ++k) {
      const Rational& x = by_rows ? m(v, k) : m(k, v);
      if (x != 0) row.emplace_back(k, x);
    }
    basis.insert(std::move(row));
  }
  return basis.rank();
}

inline std::size_t rank(const Matrix<Integer>& m) { return rank(convert<Rational>(m)); }

/// Basis of {x : m x = 0} over Q, via reduced row echelon form.
inline std::vector<std::vector<Rational>> nullspace(Matrix<Rational> m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t p = row;
    while (p < r && m(p, col) == 0) ++p;
    if (p == r) continue;
    for (std::size_t j = 0; j < c; ++j) std::swap(m(row, j), m(p, j));
    const Rational inv = Rational(1) / m(row, col);
    for (std::size_t j = 0; j < c; ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = 0; j < c; ++j) m(i, j) -= f * m(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  std::vector<bool> is_pivot(c, false);
  for (auto pc : pivot_cols) is_pivot[pc] = true;
  for (std::size_t free = 0; free < c; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(c, Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -m(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Laurent matrices

inline Matrix<Rational> evaluate(const LaurentMatrix& m, const Rational& t0) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).evaluate(t0);
  return out;
}

/// Fixed evaluation points for the fast path. Any nonzero rational works;
/// these avoid 0 and the roots of unity +-1.
inline const std::array<Rational, 3>& evaluation_points() {
  static const std::array<Rational, 3> pts{Rational(13, 7), Rational(-17, 11), Rational(29, 5)};
  return pts;
}

inline std::size_t evaluation_rank(const LaurentMatrix& m) {
  std::size_t best = 0;
  for (const auto& t0 : evaluation_points()) best = std::max(best, rank(evaluate(m, t0)));
  return best;
}

namespace detail {

/// Fraction-free elimination in place. Returns (rank, sign of the row
/// permutation); after return the last pivot equals the determinant up to
/// that sign when the matrix is square and of full rank.
inline std::pair<std::size_t, int> bareiss(LaurentMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  LaurentPolynomial prev(1);
  std::size_t row = 0;
  int sign = 1;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t best = r;
    for (std::size_t i = row; i < r; ++i)
      if (!m(i, col).is_zero() && (best == r || m(i, col).span() < m(best, col).span())) best = i;
    if (best == r) continue;
    if (best != row) {
      for (std::size_t j = 0; j < c; ++j) std::swap(m(row, j), m(best, j));
      sign = -sign;
    }
    const LaurentPolynomial pivot = m(row, col);
    for (std::size_t i = row + 1; i < r; ++i) {
      const LaurentPolynomial lead = m(i, col);
      for (std::size_t j = col + 1; j < c; ++j)
        m(i, j) = exact_divide(pivot * m(i, j) - lead * m(row, j), prev);
      m(i, col) = LaurentPolynomial();
    }
    prev = pivot;
    ++row;
  }
  return {row, sign};
}

}  // namespace detail

enum class RankMethod {
  Auto,   ///< evaluation fast path, exact elimination unless conclusive
  Exact,  ///< always fraction-free elimination over Q[t^+-1]
};

inline std::size_t exact_rank_laurent(LaurentMatrix m) { return detail::bareiss(m).first; }

/// Rank over Q(t).
inline std::size_t rank_laurent(const LaurentMatrix& m, RankMethod method = RankMethod::Auto) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (method == RankMethod::Auto) {
    const std::size_t fast = evaluation_rank(m);
    if (fast == std::min(m.rows(), m.cols())) return fast;
  }
  return exact_rank_laurent(m);
}

/// Exact determinant in Q[t^+-1].
inline LaurentPolynomial det_laurent(LaurentMatrix m) {
  if (m.rows() != m.cols()) throw ValidationError("det_laurent: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return LaurentPolynomial(1);
  auto [rk, sign] = detail::bareiss(m);
  if (rk < n) return {};
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

}  // namespace l2s
