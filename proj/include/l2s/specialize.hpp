/**
 * The three computable specializations of Z[G]:
 *
 *  - augmentation   Z[G] -> Z,           g -> 1
 *  - phi-twist      Z[G] -> Q[t^+-1],    g -> t^phi(g)   for a cocycle phi
 *  - finite quotient Z[G] -> Mat_n(Z),   g -> permutation matrix of g on {0..n-1}
 *
 * Permutations act on the right, leftmost letter first: j.(uv) = (j.u).v.
 * The matrix P(w) sends basis vector e_j to e_{j.w}, so P(uv) = P(v) P(u).
 * That reversal is exactly what turns the left-module composite of
 * group_ring.hpp into an ordinary matrix product after specialization.
 */
#pragma once

#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "group_ring.hpp"
#include "laurent.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "word.hpp"

namespace l2s {

/// A class phi in H^1(G; Z), given by its values on generators.
struct Cocycle {
  std::vector<Integer> values;
  bool primitive = false;

  bool is_zero() const {
    for (const auto& v : values)
      if (v != 0) return false;
    return true;
  }

  Integer evaluate(const Word& w) const {
    Integer s = 0;
    for (int l : w.letters) {
      const std::size_t g = static_cast<std::size_t>(std::abs(l)) - 1;
      if (g >= values.size()) throw ValidationError("cocycle has no value for generator " + std::to_string(g + 1));
      if (l > 0)
        s += values[g];
      else
        s -= values[g];
    }
    return s;
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& v : values) g = gcd(g, v);
    return g;
  }

  bool operator==(const Cocycle&) const = default;
};

inline Cocycle make_cocycle(std::initializer_list<long> values, bool primitive = true) {
  Cocycle c;
  for (long v : values) c.values.emplace_back(v);
  c.primitive = primitive;
  return c;
}

inline Diagnostics validate_cocycle(const FpGroup& group, const Cocycle& phi) {
  Diagnostics d;
  if (phi.values.size() != static_cast<std::size_t>(group.generator_count)) {
    d.fail("cocycle has " + std::to_string(phi.values.size()) + " values, group has " +
           std::to_string(group.generator_count) + " generators");
    return d;
  }
  for (std::size_t i = 0; i < group.relators.size(); ++i) {
    const Integer s = phi.evaluate(group.relators[i]);
    if (s != 0) d.fail("relator " + std::to_string(i) + " (" + to_string(group.relators[i]) + ") sums to " + s.get_str());
  }
  if (phi.primitive && phi.content() != 1)
    d.fail("cocycle declared primitive but gcd of values is " + phi.content().get_str());
  return d;
}

/// Homomorphism G -> S_n given by generator images, points numbered from 0.
struct FiniteQuotient {
  std::size_t degree = 1;
  std::vector<std::vector<std::size_t>> perms;  ///< perms[g][j] = j.(generator g+1)

  std::size_t act(std::size_t point, const Word& w) const {
    for (int l : w.letters) {
      const auto& p = perms.at(static_cast<std::size_t>(std::abs(l)) - 1);
      if (l > 0) {
        point = p[point];
      } else {
        // inverse image; perms are small so a scan is fine
        std::size_t q = 0;
        while (p[q] != point) ++q;
        point = q;
      }
    }
    return point;
  }

  /// Image of every point under w.
  std::vector<std::size_t> permutation(const Word& w) const {
    std::vector<std::vector<std::size_t>> inverse(perms.size());
    for (std::size_t g = 0; g < perms.size(); ++g) {
      inverse[g].resize(degree);
      for (std::size_t j = 0; j < degree; ++j) inverse[g][perms[g][j]] = j;
    }
    std::vector<std::size_t> img(degree);
    std::iota(img.begin(), img.end(), std::size_t{0});
    for (int l : w.letters) {
      const std::size_t g = static_cast<std::size_t>(std::abs(l)) - 1;
      const auto& p = l > 0 ? perms.at(g) : inverse.at(g);
      for (auto& x : img) x = p[x];
    }
    return img;
  }

  bool is_transitive() const {
    // orbits of the generated group = components of the graph j -- p[j]
    std::vector<std::size_t> parent(degree);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = degree;
    for (const auto& p : perms)
      for (std::size_t j = 0; j < degree; ++j) {
        const std::size_t a = find(j), b = find(p[j]);
        if (a != b) {
          parent[a] = b;
          --components;
        }
      }
    return components == 1;
  }

  bool operator==(const FiniteQuotient&) const = default;
};

inline FiniteQuotient trivial_quotient(int generator_count) {
  return FiniteQuotient{1, std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(generator_count), {0})};
}

inline Diagnostics validate_quotient(const FpGroup& group, const FiniteQuotient& q, bool require_transitive = false) {
  Diagnostics d;
  if (q.degree == 0) {
    d.fail("quotient degree must be positive");
    return d;
  }
  if (q.perms.size() != static_cast<std::size_t>(group.generator_count)) {
    d.fail("quotient has " + std::to_string(q.perms.size()) + " generator images, group has " +
           std::to_string(group.generator_count) + " generators");
    return d;
  }
  for (std::size_t g = 0; g < q.perms.size(); ++g) {
    std::vector<bool> hit(q.degree, false);
    bool ok = q.perms[g].size() == q.degree;
    for (std::size_t j = 0; ok && j < q.perms[g].size(); ++j) {
      const std::size_t y = q.perms[g][j];
      if (y >= q.degree || hit[y]) ok = false;
      else hit[y] = true;
    }
    if (!ok) d.fail("image of generator " + std::to_string(g + 1) + " is not a permutation of " +
                    std::to_string(q.degree) + " points");
  }
  if (!d.ok) return d;
  for (std::size_t i = 0; i < group.relators.size(); ++i) {
    const auto img = q.permutation(group.relators[i]);
    for (std::size_t j = 0; j < q.degree; ++j)
      if (img[j] != j) {
        d.fail("relator " + std::to_string(i) + " (" + to_string(group.relators[i]) + ") moves point " +
               std::to_string(j + 1));
        break;
      }
  }
  if (require_transitive && !q.is_transitive()) d.fail("quotient action is not transitive (cover is disconnected)");
  return d;
}

struct Augmentation {
  bool operator==(const Augmentation&) const = default;
};

using Specialization = std::variant<Augmentation, Cocycle, FiniteQuotient>;

/// Rank of the specialized module per cell: n for a degree-n quotient, else 1.
inline std::size_t block_size(const Specialization& s) {
  if (const auto* q = std::get_if<FiniteQuotient>(&s)) return q->degree;
  return 1;
}

inline Diagnostics validate_specialization(const FpGroup& group, const Specialization& s) {
  if (const auto* phi = std::get_if<Cocycle>(&s)) return validate_cocycle(group, *phi);
  if (const auto* q = std::get_if<FiniteQuotient>(&s)) return validate_quotient(group, *q);
  return {};
}

inline std::string describe(const Specialization& s) {
  if (std::holds_alternative<Augmentation>(s)) return "augmentation (Q)";
  if (const auto* phi = std::get_if<Cocycle>(&s)) {
    std::string out = "phi-twist (Q(t)), phi = (";
    for (std::size_t i = 0; i < phi->values.size(); ++i) out += (i ? "," : "") + phi->values[i].get_str();
    return out + ")";
  }
  return "finite quotient of degree " + std::to_string(std::get<FiniteQuotient>(s).degree);
}

namespace detail {
inline void require_valid(const FpGroup& group, const Specialization& s) {
  const Diagnostics d = validate_specialization(group, s);
  if (!d.ok) throw ValidationError("invalid specialization: " + d.messages.front());
}
}  // namespace detail

/// Entrywise word -> t^phi(word). Assumes phi has already been validated.
inline LaurentMatrix specialize_phi_unchecked(const GroupRingMatrix& m, const Cocycle& phi) {
  LaurentMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      LaurentPolynomial p;
      for (const auto& t : m(i, j).terms())
        p += LaurentPolynomial::monomial(Rational(t.coefficient), to_long(phi.evaluate(t.word), "exponent"));
      out(i, j) = std::move(p);
    }
  return out;
}

inline LaurentMatrix specialize_phi(const GroupRingMatrix& m, const Cocycle& phi, const FpGroup& group) {
  detail::require_valid(group, phi);
  return specialize_phi_unchecked(m, phi);
}

/// Each entry becomes the n x n block sum coefficient * P(word).
inline Matrix<Rational> specialize_quotient_unchecked(const GroupRingMatrix& m, const FiniteQuotient& q) {
  const std::size_t n = q.degree;
  Matrix<Rational> out(m.rows() * n, m.cols() * n);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& t : m(i, j).terms()) {
        const auto img = q.permutation(t.word);
        for (std::size_t b = 0; b < n; ++b) out(i * n + img[b], j * n + b) += t.coefficient;
      }
  return out;
}

inline Matrix<Rational> specialize_quotient(const GroupRingMatrix& m, const FiniteQuotient& q, const FpGroup& group) {
  detail::require_valid(group, q);
  return specialize_quotient_unchecked(m, q);
}

/// Rank of the specialized matrix over Q (augmentation, quotient) or Q(t).
inline std::size_t specialized_rank(const GroupRingMatrix& m, const Specialization& s,
                                    RankMethod method = RankMethod::Auto) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (std::holds_alternative<Augmentation>(s)) return rank(augment(m));
  if (const auto* phi = std::get_if<Cocycle>(&s)) return rank_laurent(specialize_phi_unchecked(m, *phi), method);
  return rank(specialize_quotient_unchecked(m, std::get<FiniteQuotient>(s)));
}

/// True iff the specialization of `after o before` vanishes exactly.
inline bool specialized_composite_vanishes(const GroupRingMatrix& after, const GroupRingMatrix& before,
                                           const Specialization& s) {
  if (std::holds_alternative<Augmentation>(s)) return (augment(after) * augment(before)).is_zero();
  if (const auto* phi = std::get_if<Cocycle>(&s))
    return (specialize_phi_unchecked(after, *phi) * specialize_phi_unchecked(before, *phi)).is_zero();
  const auto& q = std::get<FiniteQuotient>(s);
  return (specialize_quotient_unchecked(after, q) * specialize_quotient_unchecked(before, q)).is_zero();
}

}  // namespace l2s
