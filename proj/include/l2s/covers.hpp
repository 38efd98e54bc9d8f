/**
 * Finite covers and approximation sequences.
 *
 * A finite quotient G -> S_n determines the n-sheeted cover whose Betti
 * numbers are betti(X, q). Dividing by n gives the normalized sequence that
 * approaches the l2-Betti numbers along a nested cofinal family.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chain.hpp"
#include "core.hpp"
#include "parallel.hpp"
#include "specialize.hpp"

namespace l2s {

/// g -> (k-cycle)^phi(g): point j goes to j + phi(g) mod k.
inline FiniteQuotient cyclic_quotient(const Cocycle& phi, std::size_t k) {
  if (k == 0) throw ValidationError("cyclic quotient degree must be positive");
  FiniteQuotient q;
  q.degree = k;
  const Integer kk(static_cast<unsigned long>(k));
  for (const auto& v : phi.values) {
    Integer shift = v % kk;
    if (shift < 0) shift += kk;
    const std::size_t s = shift.get_ui();
    std::vector<std::size_t> p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = (j + s) % k;
    q.perms.push_back(std::move(p));
  }
  return q;
}

struct QuotientSchedule {
  std::vector<FiniteQuotient> items;
};

inline QuotientSchedule cyclic_schedule(const Cocycle& phi, const std::vector<std::size_t>& ks) {
  QuotientSchedule s;
  for (auto k : ks) s.items.push_back(cyclic_quotient(phi, k));
  return s;
}

inline const std::vector<std::size_t>& default_cyclic_degrees() {
  static const std::vector<std::size_t> ks{1, 2, 4, 8, 16, 32, 64};
  return ks;
}

/// Throws with the offending index on the first invalid item.
inline void validate_schedule(const FpGroup& group, const QuotientSchedule& sched) {
  if (sched.items.empty()) throw ValidationError("schedule is empty");
  for (std::size_t i = 0; i < sched.items.size(); ++i) {
    const Diagnostics d = validate_quotient(group, sched.items[i]);
    if (!d.ok) throw ValidationError("schedule item " + std::to_string(i) + ": " + d.messages.front());
    if (i > 0 && sched.items[i].degree <= sched.items[i - 1].degree)
      throw ValidationError("schedule item " + std::to_string(i) + ": degrees must be strictly increasing");
  }
}

/// Least-squares fit of b = L + c/k to (k_i, b_i); exact over Q.
struct LimitFit {
  Rational limit;
  Rational slope;
  std::vector<Rational> residuals;
};

inline LimitFit fit_limit(const std::vector<std::size_t>& ks, const std::vector<Rational>& bs) {
  const std::size_t m = ks.size();
  Rational sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Rational x(1, static_cast<unsigned long>(ks[i]));
    sx += x;
    sy += bs[i];
    sxx += x * x;
    sxy += x * bs[i];
  }
  LimitFit f;
  const Rational denom = Rational(static_cast<unsigned long>(m)) * sxx - sx * sx;
  if (denom == 0) {
    f.limit = sy / static_cast<unsigned long>(m);
    f.slope = 0;
  } else {
    f.slope = (Rational(static_cast<unsigned long>(m)) * sxy - sx * sy) / denom;
    f.limit = (sy - f.slope * sx) / static_cast<unsigned long>(m);
  }
  for (std::size_t i = 0; i < m; ++i)
    f.residuals.push_back(bs[i] - f.limit - f.slope * ratio(1, static_cast<unsigned long>(ks[i])));
  return f;
}

struct ApproxItem {
  std::size_t degree = 1;
  BettiVector betti;
};

struct ApproxSequence {
  std::vector<ApproxItem> items;
  /// Per homological degree, fitted on the last three items (absent if fewer).
  std::vector<LimitFit> limit_estimate;
  /// deltas[i][p] = normalized b_p(item i) - normalized b_p(item i-1), i >= 1.
  std::vector<std::vector<Rational>> deltas;
};

inline ApproxSequence approximate(const EquivariantComplex& x, const QuotientSchedule& sched) {
  x.check_shape();
  validate_schedule(x.group, sched);
  auto results = parallel_map(sched.items.size(), [&](std::size_t i) {
    const Diagnostics d = validate_complex(x, sched.items[i]);
    if (!d.ok) throw ValidationError("schedule item " + std::to_string(i) + ": " + d.messages.front());
    return ApproxItem{sched.items[i].degree, betti(x, sched.items[i])};
  });
  ApproxSequence seq;
  seq.items = std::move(results);
  const std::size_t degrees = x.top_degree() + 1;
  for (std::size_t i = 1; i < seq.items.size(); ++i) {
    std::vector<Rational> d;
    for (std::size_t p = 0; p < degrees; ++p)
      d.push_back(seq.items[i].betti.normalized(p) - seq.items[i - 1].betti.normalized(p));
    seq.deltas.push_back(std::move(d));
  }
  if (seq.items.size() >= 3) {
    const std::size_t first = seq.items.size() - 3;
    std::vector<std::size_t> ks;
    for (std::size_t i = first; i < seq.items.size(); ++i) ks.push_back(seq.items[i].degree);
    for (std::size_t p = 0; p < degrees; ++p) {
      std::vector<Rational> bs;
      for (std::size_t i = first; i < seq.items.size(); ++i) bs.push_back(seq.items[i].betti.normalized(p));
      seq.limit_estimate.push_back(fit_limit(ks, bs));
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Cover complexes via Reidemeister-Schreier

/// The cover of X determined by a transitive quotient q, as an equivariant
/// complex over the point stabilizer H = Stab(0). Cell (c, i) lifts to
/// t_i . c~ with t_i the Schreier transversal word satisfying 0.t_i = i.
struct CoverComplex {
  EquivariantComplex complex;
  std::vector<Word> transversal;  ///< t_i per point
  /// generator_of[i][x-1] = 1-based H-generator for the edge (i, x), or 0 on tree edges
  std::vector<std::vector<int>> generator_of;
  std::vector<std::pair<std::size_t, int>> generator_source;  ///< (i, x) per H-generator

  /// Word in H-generators for t_i w t_{i.w}^-1.
  Word rewrite(std::size_t i, const Word& w, const FiniteQuotient& q) const {
    std::vector<int> out;
    for (int l : w.letters) {
      const std::size_t x = static_cast<std::size_t>(std::abs(l)) - 1;
      if (l > 0) {
        if (int y = generator_of[i][x]) out.push_back(y);
        i = q.perms[x][i];
      } else {
        std::size_t j = 0;
        while (q.perms[x][j] != i) ++j;
        if (int y = generator_of[j][x]) out.push_back(-y);
        i = j;
      }
    }
    return free_reduce(Word(std::move(out)));
  }
};

inline CoverComplex cover_complex(const EquivariantComplex& x, const FiniteQuotient& q) {
  x.check_shape();
  const Diagnostics d = validate_quotient(x.group, q, true);
  if (!d.ok) throw ValidationError("cover quotient: " + d.messages.front());
  const std::size_t n = q.degree;
  const std::size_t gens = static_cast<std::size_t>(x.group.generator_count);
  CoverComplex cover;

  // Schreier tree by breadth-first search over positive generator edges and their inverses.
  cover.transversal.assign(n, Word{});
  std::vector<bool> seen(n, false);
  std::vector<std::vector<bool>> tree(n, std::vector<bool>(gens, false));
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    for (std::size_t g = 0; g < gens; ++g) {
      const std::size_t j = q.perms[g][i];
      if (!seen[j]) {
        seen[j] = true;
        tree[i][g] = true;
        cover.transversal[j] = cover.transversal[i] * Word{static_cast<int>(g + 1)};
        queue.push_back(j);
      }
      std::size_t k = 0;
      while (q.perms[g][k] != i) ++k;
      if (!seen[k]) {
        seen[k] = true;
        tree[k][g] = true;
        cover.transversal[k] = cover.transversal[i] * Word{-static_cast<int>(g + 1)};
        queue.push_back(k);
      }
    }
  }
  cover.generator_of.assign(n, std::vector<int>(gens, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g = 0; g < gens; ++g)
      if (!tree[i][g]) {
        cover.generator_source.emplace_back(i, static_cast<int>(g + 1));
        cover.generator_of[i][g] = static_cast<int>(cover.generator_source.size());
      }

  FpGroup h{static_cast<int>(cover.generator_source.size()), {}};
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& r : x.group.relators) {
      Word w = cover.rewrite(i, r, q);
      if (!w.empty()) h.relators.push_back(std::move(w));
    }
  std::sort(h.relators.begin(), h.relators.end());
  h.relators.erase(std::unique(h.relators.begin(), h.relators.end()), h.relators.end());

  EquivariantComplex& out = cover.complex;
  out.group = std::move(h);
  for (std::size_t dgr = 0; dgr <= x.top_degree(); ++dgr) {
    out.cell_counts.push_back(x.cell_counts[dgr] * n);
    std::vector<CellLabel> labels;
    for (auto l : x.labels[dgr]) labels.insert(labels.end(), n, l);
    out.labels.push_back(std::move(labels));
  }
  for (std::size_t dgr = 1; dgr <= x.top_degree(); ++dgr) {
    const auto& m = x.boundaries[dgr - 1];
    GroupRingMatrix b(m.rows() * n, m.cols() * n);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& t : m(r, c).terms())
          for (std::size_t i = 0; i < n; ++i) {
            // t_i a = h t_j with j = i.a
            const std::size_t j = q.act(i, t.word);
            b(r * n + j, c * n + i) += GroupRingElement::monomial(t.coefficient, cover.rewrite(i, t.word, q));
          }
    out.boundaries.push_back(std::move(b));
  }
  return cover;
}

/// phi restricted to the stabilizer subgroup, on its Schreier generators:
/// phi(t_i x t_{i.x}^-1) = phi(t_i) + phi(x) - phi(t_{i.x}).
inline Cocycle restrict_cocycle(const CoverComplex& cover, const FiniteQuotient& q, const Cocycle& phi) {
  Cocycle r;
  for (const auto& [i, x] : cover.generator_source) {
    const std::size_t j = q.perms[static_cast<std::size_t>(x) - 1][i];
    r.values.push_back(phi.evaluate(cover.transversal[i]) + phi.values[static_cast<std::size_t>(x) - 1] -
                       phi.evaluate(cover.transversal[j]));
  }
  r.primitive = r.content() == 1;
  return r;
}

/// Report of the two-way computation of the q2-cover's Betti numbers.
struct MultiplicativityReport {
  std::size_t index = 1;      ///< [q2 : q] sheet ratio m
  BettiVector direct;         ///< betti(X, q2)
  BettiVector via_cover;      ///< betti(X_q, induced quotient of degree m)
  long euler_q = 0;           ///< chi(X_q)
  long euler_q2 = 0;          ///< chi(X_q2) = m * chi(X_q)
  bool betti_equal = false;
  bool euler_scales = false;
  bool ok() const { return betti_equal && euler_scales; }
};

namespace detail {
/// A G-equivariant map pi: points(q2) -> points(q), found by trying every
/// image of point 0; returns empty if q2 does not refine q.
inline std::vector<std::size_t> refinement_map(const FiniteQuotient& q, const FiniteQuotient& q2) {
  for (std::size_t start = 0; start < q.degree; ++start) {
    std::vector<long> pi(q2.degree, -1);
    pi[0] = static_cast<long>(start);
    std::vector<std::size_t> queue{0};
    bool ok = true;
    for (std::size_t head = 0; ok && head < queue.size(); ++head) {
      const std::size_t j = queue[head];
      for (std::size_t g = 0; ok && g < q.perms.size(); ++g) {
        const std::size_t j2 = q2.perms[g][j];
        const long image = static_cast<long>(q.perms[g][static_cast<std::size_t>(pi[j])]);
        if (pi[j2] < 0) {
          pi[j2] = image;
          queue.push_back(j2);
        } else if (pi[j2] != image) {
          ok = false;
        }
      }
    }
    if (!ok || queue.size() != q2.degree) continue;
    return std::vector<std::size_t>(pi.begin(), pi.end());
  }
  return {};
}
}  // namespace detail

/// Compares b(X, q2) computed directly with b of the q-cover under the
/// quotient that H = Stab_q(0) induces on the fibre of the q2-cover over 0.
inline MultiplicativityReport check_multiplicativity(const EquivariantComplex& x, const FiniteQuotient& q,
                                                     const FiniteQuotient& q2) {
  for (const auto* qq : {&q, &q2}) {
    const Diagnostics d = validate_quotient(x.group, *qq, true);
    if (!d.ok) throw ValidationError("quotient: " + d.messages.front());
  }
  if (q2.degree % q.degree != 0) throw ValidationError("non-refining pair: degree does not divide");
  const auto pi = detail::refinement_map(q, q2);
  if (pi.empty()) throw ValidationError("non-refining pair: no equivariant projection exists");

  const CoverComplex cover = cover_complex(x, q);
  // fibre over the base point 0 of the q-cover, numbered in increasing order
  std::vector<std::size_t> fibre;
  std::vector<long> slot(q2.degree, -1);
  for (std::size_t j = 0; j < q2.degree; ++j)
    if (pi[j] == 0) {
      slot[j] = static_cast<long>(fibre.size());
      fibre.push_back(j);
    }
  FiniteQuotient induced;
  induced.degree = fibre.size();
  for (const auto& [i, xg] : cover.generator_source) {
    const Word y = cover.transversal[i] * Word{xg} * cover.transversal[q.act(i, Word{xg})].inverse();
    std::vector<std::size_t> p(fibre.size());
    for (std::size_t a = 0; a < fibre.size(); ++a) p[a] = static_cast<std::size_t>(slot[q2.act(fibre[a], y)]);
    induced.perms.push_back(std::move(p));
  }

  MultiplicativityReport rep;
  rep.index = q2.degree / q.degree;
  rep.direct = betti(x, q2);
  rep.via_cover = betti(cover.complex, induced);
  rep.euler_q = euler_char(cover.complex);
  rep.euler_q2 = static_cast<long>(q2.degree) * euler_char(x);
  rep.betti_equal = rep.direct.unnormalized == rep.via_cover.unnormalized;
  rep.euler_scales = rep.euler_q2 == static_cast<long>(rep.index) * rep.euler_q &&
                     rep.direct.euler() == rep.euler_q2;
  return rep;
}

// ---------------------------------------------------------------------------

struct TwistedComparison {
  BettiVector twisted;
  ApproxSequence sequence;
  std::vector<std::size_t> ks;
  std::vector<Rational> final_normalized;
  std::vector<Rational> gap;                 ///< per degree at k_max
  std::vector<std::vector<Rational>> gaps;   ///< gaps[i][p] at item i
  bool converged = false;                    ///< every final gap <= 2/k_max
  bool within_bound = false;                 ///< every gap <= 2/k at every item
};

inline TwistedComparison compare_with_twisted(const EquivariantComplex& x, const Cocycle& phi,
                                              const std::vector<std::size_t>& ks) {
  if (!phi.primitive) throw ValidationError("comparison needs a primitive cocycle");
  if (ks.empty()) throw ValidationError("schedule is empty");
  TwistedComparison c;
  c.ks = ks;
  c.twisted = twisted_betti(x, phi);
  c.sequence = approximate(x, cyclic_schedule(phi, ks));
  const std::size_t degrees = x.top_degree() + 1;
  c.within_bound = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::vector<Rational> g;
    const Rational bound = ratio(2, static_cast<unsigned long>(ks[i]));
    for (std::size_t p = 0; p < degrees; ++p) {
      g.push_back(abs(c.sequence.items[i].betti.normalized(p) - c.twisted.normalized(p)));
      if (g.back() > bound) c.within_bound = false;
    }
    c.gaps.push_back(std::move(g));
  }
  c.gap = c.gaps.back();
  c.converged = true;
  for (std::size_t p = 0; p < degrees; ++p) {
    c.final_normalized.push_back(c.sequence.items.back().betti.normalized(p));
    if (c.gap[p] > ratio(2, static_cast<unsigned long>(ks.back()))) c.converged = false;
  }
  return c;
}

}  // namespace l2s
