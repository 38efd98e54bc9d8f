/**
 * Shared scalar types, error types and diagnostics for the l2s library.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l2s {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when input data violates a documented invariant (bad word, cocycle,
/// dimension mismatch, non-subcomplex, ...). The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of a check that reports instead of throwing.
struct Diagnostics {
  bool ok = true;
  std::vector<std::string> messages;

  void fail(std::string message) {
    ok = false;
    messages.push_back(std::move(message));
  }
  void note(std::string message) { messages.push_back(std::move(message)); }
  void merge(const Diagnostics& other, const std::string& prefix = {}) {
    ok = ok && other.ok;
    for (const auto& m : other.messages) messages.push_back(prefix + m);
  }
  explicit operator bool() const { return ok; }
};

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// num/den in lowest terms (mpq_class(num, den) does not reduce).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Rationals print as "p/q", integers without a denominator.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Integer parse_integer(const std::string& text) {
  Integer z;
  if (text.empty() || z.set_str(text, 10) != 0)
    throw ValidationError("malformed integer '" + text + "'");
  return z;
}

inline long to_long(const Integer& z, const char* what) {
  if (!z.fits_slong_p())
    throw ValidationError(std::string(what) + " out of machine range: " + z.get_str());
  return z.get_si();
}

}  // namespace l2s
