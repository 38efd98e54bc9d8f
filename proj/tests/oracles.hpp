// Independent reference computations used to check the library.
// Nothing here calls the library's rank, specialization or cover code.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "l2s/l2s.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpz_class>>;

/// Fraction-free Bareiss elimination with row pivoting; returns the rank.
inline std::size_t bareiss_rank(Dense m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = v;
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

/// Determinant by cofactor expansion along the first row.
inline mpz_class cofactor_det(const Dense& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Dense minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    const mpz_class term = m[0][j] * cofactor_det(minor);
    s += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return s;
}

inline long exponent_sum(const l2s::Word& w, const std::vector<long>& phi) {
  long s = 0;
  for (int l : w.letters) s += l > 0 ? phi[static_cast<std::size_t>(l - 1)] : -phi[static_cast<std::size_t>(-l - 1)];
  return s;
}

/// The k-fold cyclic specialization along phi written out as circulant
/// blocks: a word w contributes the shift by phi(w) mod k.
inline Dense circulant(const l2s::GroupRingMatrix& m, const std::vector<long>& phi, long k) {
  const std::size_t n = static_cast<std::size_t>(k);
  Dense out(m.rows() * n, std::vector<mpz_class>(m.cols() * n, 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& t : m(i, j).terms()) {
        const long s = ((exponent_sum(t.word, phi) % k) + k) % k;
        for (long b = 0; b < k; ++b) {
          const std::size_t row = i * n + static_cast<std::size_t>((b + s) % k);
          out[row][j * n + static_cast<std::size_t>(b)] += t.coefficient;
        }
      }
  return out;
}

/// Unnormalized Betti numbers of the k-fold cyclic cover, by dense rank.
inline std::vector<std::int64_t> cyclic_betti(const l2s::EquivariantComplex& x, const std::vector<long>& phi, long k) {
  const std::size_t top = x.top_degree();
  std::vector<std::size_t> r(top + 2, 0);
  for (std::size_t d = 1; d <= top; ++d) r[d] = bareiss_rank(circulant(x.boundaries[d - 1], phi, k));
  std::vector<std::int64_t> b;
  for (std::size_t d = 0; d <= top; ++d)
    b.push_back(static_cast<std::int64_t>(x.cell_counts[d] * static_cast<std::size_t>(k)) -
                static_cast<std::int64_t>(r[d] + r[d + 1]));
  return b;
}

inline Dense random_dense(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Dense m(rows, std::vector<mpz_class>(cols));
  for (auto& row : m)
    for (auto& x : row) x = dist(rng);
  return m;
}

inline l2s::Matrix<l2s::Integer> to_matrix(const Dense& d) {
  l2s::Matrix<l2s::Integer> m(d.size(), d.empty() ? 0 : d[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = d[i][j];
  return m;
}

}  // namespace oracle
