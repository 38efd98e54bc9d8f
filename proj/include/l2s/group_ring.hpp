/**
 * Integral group ring elements and matrices over Z[G].
 *
 * Chain complexes are modelled as left Z[G]-modules. A boundary matrix D of
 * shape n_{d-1} x n_d stores in column j the boundary of cell j:
 *     d(c_j) = sum_i D(i, j) . c_i
 * With this convention the composite of two maps is not the naive matrix
 * product; compose() implements the correct one.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "core.hpp"
#include "matrix.hpp"
#include "word.hpp"

namespace l2s {

struct Term {
  Integer coefficient;
  Word word;

  bool operator==(const Term& o) const { return coefficient == o.coefficient && word == o.word; }
};

/// Finite sum of coefficient * word. Canonical form: words freely reduced,
/// sorted, pairwise distinct, coefficients nonzero.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  GroupRingElement(int c) {  // NOLINT(google-explicit-constructor): integers embed as c*[e]
    if (c != 0) terms_.push_back({Integer(c), Word{}});
  }

  static GroupRingElement from_terms(std::vector<Term> terms) {
    GroupRingElement e;
    e.terms_ = std::move(terms);
    e.canonicalize();
    return e;
  }
  static GroupRingElement monomial(const Integer& c, const Word& w) { return from_terms({{c, w}}); }
  static GroupRingElement word(const Word& w) { return monomial(Integer(1), w); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Applies fn to every word (e.g. renumbering generators, conjugating by a
  /// transport word) and re-canonicalizes.
  GroupRingElement map_words(const std::function<Word(const Word&)>& fn) const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) t.push_back({term.coefficient, fn(term.word)});
    return from_terms(std::move(t));
  }

  /// prefix * this * suffix
  GroupRingElement sandwich(const Word& prefix, const Word& suffix) const {
    return map_words([&](const Word& w) { return prefix * w * suffix; });
  }

  GroupRingElement operator-() const {
    GroupRingElement e = *this;
    for (auto& t : e.terms_) t.coefficient = -t.coefficient;
    return e;
  }
  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return from_terms(std::move(t));
  }
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a + (-b); }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    std::vector<Term> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) t.push_back({x.coefficient * y.coefficient, x.word * y.word});
    return from_terms(std::move(t));
  }
  GroupRingElement& operator+=(const GroupRingElement& b) { return *this = *this + b; }

  bool operator==(const GroupRingElement& o) const { return terms_ == o.terms_; }

 private:
  void canonicalize() {
    for (auto& t : terms_) t.word = free_reduce(t.word);
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.word < b.word; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().word == t.word)
        merged.back().coefficient += t.coefficient;
      else
        merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coefficient == 0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

/// Sum of coefficients: the image under Z[G] -> Z, g -> 1.
inline Integer augment(const GroupRingElement& e) {
  Integer s = 0;
  for (const auto& t : e.terms()) s += t.coefficient;
  return s;
}

inline std::string to_string(const GroupRingElement& e) {
  if (e.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < e.terms().size(); ++i) {
    const auto& t = e.terms()[i];
    if (i) s += " + ";
    s += t.coefficient.get_str() + "[" + to_string(t.word) + "]";
  }
  return s;
}

class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  GroupRingElement& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const GroupRingElement& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  GroupRingElement& at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw ValidationError("group ring matrix index out of range");
    return (*this)(i, j);
  }

  GroupRingMatrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
    GroupRingMatrix m(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j) m(i, j) = (*this)(row_idx[i], col_idx[j]);
    return m;
  }

  GroupRingMatrix map_entries(const std::function<GroupRingElement(const GroupRingElement&)>& fn) const {
    GroupRingMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = fn(entries_[k]);
    return m;
  }

  bool operator==(const GroupRingMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GroupRingElement> entries_;
};

/// Matrix of the composite map `after o before` of left-module maps:
/// (after o before)(i, k) = sum_j before(j, k) * after(i, j).
inline GroupRingMatrix compose(const GroupRingMatrix& after, const GroupRingMatrix& before) {
  if (after.cols() != before.rows()) throw ValidationError("compose: shape mismatch");
  GroupRingMatrix out(after.rows(), before.cols());
  for (std::size_t i = 0; i < after.rows(); ++i)
    for (std::size_t k = 0; k < before.cols(); ++k) {
      GroupRingElement s;
      for (std::size_t j = 0; j < after.cols(); ++j) {
        if (after(i, j).is_zero() || before(j, k).is_zero()) continue;
        s += before(j, k) * after(i, j);
      }
      out(i, k) = std::move(s);
    }
  return out;
}

inline Matrix<Integer> augment(const GroupRingMatrix& m) {
  Matrix<Integer> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = augment(m(i, j));
  return out;
}

}  // namespace l2s
