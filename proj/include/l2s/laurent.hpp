/**
 * Laurent polynomials over Q, i.e. elements of Q[t, t^-1].
 */
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "matrix.hpp"

namespace l2s {

/// Stored as t^low * (c_0 + c_1 t + ... + c_m t^m) with c_0 != 0 and c_m != 0;
/// the zero polynomial has no coefficients and low == 0.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(int c) : LaurentPolynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  LaurentPolynomial(const Rational& c) {                          // NOLINT(google-explicit-constructor)
    if (c != 0) coeffs_.push_back(c);
  }
  LaurentPolynomial(long low, std::vector<Rational> coeffs) : low_(low), coeffs_(std::move(coeffs)) { normalize(); }

  static LaurentPolynomial monomial(const Rational& c, long exponent) { return {exponent, {c}}; }
  static LaurentPolynomial t() { return monomial(1, 1); }

  bool is_zero() const { return coeffs_.empty(); }
  long low() const { return low_; }
  long high() const { return low_ + static_cast<long>(coeffs_.size()) - 1; }
  std::size_t span() const { return coeffs_.size(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  Rational coeff(long exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return 0;
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
  }

  Rational evaluate(const Rational& x) const {
    if (is_zero()) return 0;
    if (x == 0 && low_ < 0) throw ValidationError("cannot evaluate a Laurent polynomial with negative powers at 0");
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc * power(x, low_);
  }

  friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const long lo = std::min(a.low_, b.low_);
    const long hi = std::max(a.high(), b.high());
    std::vector<Rational> c(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[static_cast<std::size_t>(a.low_ - lo) + i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[static_cast<std::size_t>(b.low_ - lo) + i] += b.coeffs_[i];
    return {lo, std::move(c)};
  }
  LaurentPolynomial operator-() const {
    LaurentPolynomial r = *this;
    for (auto& x : r.coeffs_) x = -x;
    return r;
  }
  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a + (-b); }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return {a.low_ + b.low_, std::move(c)};
  }
  LaurentPolynomial& operator+=(const LaurentPolynomial& b) { return *this = *this + b; }
  LaurentPolynomial& operator-=(const LaurentPolynomial& b) { return *this = *this - b; }

  bool operator==(const LaurentPolynomial& o) const { return low_ == o.low_ && coeffs_ == o.coeffs_; }

  /// Quotient a / b in Q[t^+-1]; throws unless b divides a exactly.
  friend LaurentPolynomial exact_divide(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (b.is_zero()) throw std::domain_error("Laurent division by zero");
    if (a.is_zero()) return {};
    // Both coefficient vectors have nonzero constant terms, so divisibility in
    // the Laurent ring reduces to divisibility of ordinary polynomials.
    std::vector<Rational> rem = a.coeffs_;
    const std::size_t db = b.coeffs_.size() - 1;
    if (rem.size() - 1 < db) throw std::domain_error("Laurent division not exact");
    std::vector<Rational> q(rem.size() - db, Rational(0));
    for (std::size_t k = q.size(); k-- > 0;) {
      const Rational f = rem[k + db] / b.coeffs_[db];
      q[k] = f;
      if (f == 0) continue;
      for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * b.coeffs_[j];
    }
    for (const auto& r : rem)
      if (r != 0) throw std::domain_error("Laurent division not exact");
    return {a.low_ - b.low_, std::move(q)};
  }

 private:
  static Rational power(const Rational& x, long e) {
    Rational r = 1;
    Rational base = e < 0 ? Rational(1) / x : x;
    for (long k = e < 0 ? -e : e; k > 0; --k) r *= base;
    return r;
  }

  void normalize() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    std::size_t last = coeffs_.size();
    while (coeffs_[last - 1] == 0) --last;
    coeffs_ = std::vector<Rational>(coeffs_.begin() + static_cast<long>(first), coeffs_.begin() + static_cast<long>(last));
    low_ += static_cast<long>(first);
  }

  long low_ = 0;
  std::vector<Rational> coeffs_;
};

using LaurentMatrix = Matrix<LaurentPolynomial>;

/// Descending powers, e.g. "t^2 - t + 1", "2t^-1", "0".
inline std::string to_string(const LaurentPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (long e = p.high(); e >= p.low(); --e) {
    Rational c = p.coeff(e);
    if (c == 0) continue;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (s.empty())
      s += negative ? "-" : "";
    else
      s += negative ? " - " : " + ";
    const bool unit = (c == 1);
    if (!unit || e == 0) s += to_string(c);
    if (e != 0) {
      s += "t";
      if (e != 1) s += "^" + std::to_string(e);
    }
  }
  return s;
}

}  // namespace l2s
