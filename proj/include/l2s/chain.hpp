/**
 * Equivariant chain complexes C_*(X~) of a compact space X with pi_1-action,
 * and their Betti numbers under a chosen specialization.
 *
 * The word problem is undecidable, so d o d = 0 is never checked in Z[G]
 * itself; validate_complex() checks it after specialization instead.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"
#include "group_ring.hpp"
#include "specialize.hpp"

namespace l2s {

enum class CellLabel : std::uint8_t { None, RPlus, RMinus, Gamma };

inline const char* label_name(CellLabel l) {
  switch (l) {
    case CellLabel::RPlus: return "rplus";
    case CellLabel::RMinus: return "rminus";
    case CellLabel::Gamma: return "gamma";
    case CellLabel::None: break;
  }
  return "none";
}

inline CellLabel parse_label(const std::string& s) {
  if (s == "none") return CellLabel::None;
  if (s == "rplus") return CellLabel::RPlus;
  if (s == "rminus") return CellLabel::RMinus;
  if (s == "gamma") return CellLabel::Gamma;
  throw ValidationError("unknown cell label '" + s + "'");
}

/// A set of cells, stored as a membership flag per degree and cell.
struct CellSet {
  std::vector<std::vector<bool>> member;

  bool contains(std::size_t d, std::size_t i) const { return d < member.size() && member[d][i]; }
  std::size_t count(std::size_t d) const {
    return d < member.size() ? static_cast<std::size_t>(std::count(member[d].begin(), member[d].end(), true)) : 0;
  }
  std::size_t size() const {
    std::size_t s = 0;
    for (std::size_t d = 0; d < member.size(); ++d) s += count(d);
    return s;
  }
  bool empty() const { return size() == 0; }
  std::vector<std::size_t> indices(std::size_t d, bool inside = true) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < member[d].size(); ++i)
      if (member[d][i] == inside) out.push_back(i);
    return out;
  }
  CellSet complement() const {
    CellSet c = *this;
    for (auto& row : c.member) row.flip();
    return c;
  }
  CellSet& operator|=(const CellSet& o) {
    for (std::size_t d = 0; d < member.size(); ++d)
      for (std::size_t i = 0; i < member[d].size(); ++i) member[d][i] = member[d][i] || o.member[d][i];
    return *this;
  }
  bool operator==(const CellSet&) const = default;
};

struct EquivariantComplex {
  FpGroup group;
  std::vector<std::size_t> cell_counts;         ///< n_0 .. n_top
  std::vector<GroupRingMatrix> boundaries;      ///< boundaries[d-1] is d_d, shape n_{d-1} x n_d
  std::vector<std::vector<CellLabel>> labels;   ///< one label per cell

  std::size_t top_degree() const { return cell_counts.empty() ? 0 : cell_counts.size() - 1; }
  std::size_t count(std::size_t d) const { return d < cell_counts.size() ? cell_counts[d] : 0; }

  /// d_d for d in [1, top]; degrees outside that range are zero maps.
  GroupRingMatrix boundary(std::size_t d) const {
    if (d >= 1 && d <= top_degree()) return boundaries[d - 1];
    return GroupRingMatrix(d == 0 ? 0 : count(d - 1), count(d));
  }

  /// Throws on any shape inconsistency between counts, matrices and labels.
  void check_shape() const {
    if (cell_counts.empty()) throw ValidationError("complex has no degrees");
    if (boundaries.size() != top_degree())
      throw ValidationError("complex has " + std::to_string(boundaries.size()) + " boundary matrices, expected " +
                            std::to_string(top_degree()));
    for (std::size_t d = 1; d <= top_degree(); ++d) {
      const auto& m = boundaries[d - 1];
      if (m.rows() != cell_counts[d - 1] || m.cols() != cell_counts[d])
        throw ValidationError("boundary d_" + std::to_string(d) + " has shape " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", expected " + std::to_string(cell_counts[d - 1]) + "x" +
                              std::to_string(cell_counts[d]));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
          for (const auto& t : m(i, j).terms()) free_reduce(t.word, group.generator_count);
    }
    if (labels.size() != cell_counts.size()) throw ValidationError("labels do not cover every degree");
    for (std::size_t d = 0; d < labels.size(); ++d)
      if (labels[d].size() != cell_counts[d])
        throw ValidationError("degree " + std::to_string(d) + " has " + std::to_string(labels[d].size()) +
                              " labels for " + std::to_string(cell_counts[d]) + " cells");
  }

  static EquivariantComplex make(FpGroup group, std::vector<std::size_t> counts, std::vector<GroupRingMatrix> bds) {
    EquivariantComplex x{std::move(group), std::move(counts), std::move(bds), {}};
    for (auto n : x.cell_counts) x.labels.emplace_back(n, CellLabel::None);
    x.group.validate();
    x.check_shape();
    return x;
  }

  bool operator==(const EquivariantComplex&) const = default;
};

inline CellSet empty_cells(const EquivariantComplex& x) {
  CellSet s;
  for (auto n : x.cell_counts) s.member.emplace_back(n, false);
  return s;
}

inline CellSet all_cells(const EquivariantComplex& x) { return empty_cells(x).complement(); }

inline CellSet cells_with(const EquivariantComplex& x, std::initializer_list<CellLabel> wanted) {
  CellSet s = empty_cells(x);
  for (std::size_t d = 0; d < x.labels.size(); ++d)
    for (std::size_t i = 0; i < x.labels[d].size(); ++i)
      for (auto w : wanted)
        if (x.labels[d][i] == w) s.member[d][i] = true;
  return s;
}

/// Cells carrying any label other than None.
inline CellSet labeled_cells(const EquivariantComplex& x) {
  return cells_with(x, {CellLabel::RPlus, CellLabel::RMinus, CellLabel::Gamma});
}

/// Reports every incidence d(c) -> c' with c in `a` and c' outside it.
inline Diagnostics check_subcomplex(const EquivariantComplex& x, const CellSet& a) {
  Diagnostics diag;
  for (std::size_t d = 1; d <= x.top_degree(); ++d) {
    const auto& m = x.boundaries[d - 1];
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!a.contains(d, j)) continue;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (!m(i, j).is_zero() && !a.contains(d - 1, i))
          diag.fail("cell " + std::to_string(j) + " of degree " + std::to_string(d) + " has boundary on cell " +
                    std::to_string(i) + " of degree " + std::to_string(d - 1) + " outside the set");
    }
  }
  return diag;
}

/// Smallest subcomplex containing `a`.
inline CellSet closure(const EquivariantComplex& x, CellSet a) {
  for (std::size_t d = x.top_degree(); d >= 1; --d) {
    const auto& m = x.boundaries[d - 1];
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!a.contains(d, j)) continue;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (!m(i, j).is_zero()) a.member[d - 1][i] = true;
    }
  }
  return a;
}

namespace detail {
inline EquivariantComplex restrict_to(const EquivariantComplex& x, const CellSet& keep) {
  EquivariantComplex out;
  out.group = x.group;
  std::vector<std::vector<std::size_t>> idx;
  for (std::size_t d = 0; d <= x.top_degree(); ++d) {
    idx.push_back(keep.indices(d));
    out.cell_counts.push_back(idx.back().size());
    std::vector<CellLabel> l;
    for (auto i : idx.back()) l.push_back(x.labels[d][i]);
    out.labels.push_back(std::move(l));
  }
  for (std::size_t d = 1; d <= x.top_degree(); ++d)
    out.boundaries.push_back(x.boundaries[d - 1].submatrix(idx[d - 1], idx[d]));
  return out;
}
}  // namespace detail

/// The subcomplex spanned by `a`; throws if `a` is not closed.
inline EquivariantComplex subcomplex(const EquivariantComplex& x, const CellSet& a) {
  const Diagnostics d = check_subcomplex(x, a);
  if (!d.ok) throw ValidationError("not a subcomplex: " + d.messages.front());
  return detail::restrict_to(x, a);
}

/// The relative complex C(X)/C(A) on the cells outside `a`.
inline EquivariantComplex relative(const EquivariantComplex& x, const CellSet& a) {
  const Diagnostics d = check_subcomplex(x, a);
  if (!d.ok) throw ValidationError("not a subcomplex: " + d.messages.front());
  return detail::restrict_to(x, a.complement());
}

inline EquivariantComplex relative(const EquivariantComplex& x, std::initializer_list<CellLabel> labels) {
  return relative(x, cells_with(x, labels));
}

inline long euler_char(const EquivariantComplex& x) {
  long chi = 0;
  for (std::size_t d = 0; d < x.cell_counts.size(); ++d)
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(x.cell_counts[d]);
  return chi;
}

inline long euler_char(const CellSet& a) {
  long chi = 0;
  for (std::size_t d = 0; d < a.member.size(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(a.count(d));
  return chi;
}

/// Connected components of `a`, two cells being adjacent when one has a
/// nonzero boundary entry on the other.
inline std::vector<CellSet> components(const EquivariantComplex& x, const CellSet& a) {
  std::vector<std::size_t> offset{0};
  for (auto n : x.cell_counts) offset.push_back(offset.back() + n);
  std::vector<std::size_t> parent(offset.back());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t d = 1; d <= x.top_degree(); ++d) {
    const auto& m = x.boundaries[d - 1];
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (a.contains(d, j) && a.contains(d - 1, i) && !m(i, j).is_zero())
          parent[find(offset[d] + j)] = find(offset[d - 1] + i);
  }
  std::vector<CellSet> out;
  std::vector<long> slot(offset.back(), -1);
  for (std::size_t d = 0; d < x.cell_counts.size(); ++d)
    for (std::size_t i = 0; i < x.cell_counts[d]; ++i) {
      if (!a.contains(d, i)) continue;
      const std::size_t root = find(offset[d] + i);
      if (slot[root] < 0) {
        slot[root] = static_cast<long>(out.size());
        out.push_back(empty_cells(x));
      }
      out[static_cast<std::size_t>(slot[root])].member[d][i] = true;
    }
  return out;
}

/// Checks shape (throwing on mismatch), validity of the specialization for
/// the complex's group, and that every composite d_{d-1} o d_d specializes to
/// zero. Failing degrees are itemized.
inline Diagnostics validate_complex(const EquivariantComplex& x, const Specialization& s) {
  x.check_shape();
  Diagnostics diag = validate_specialization(x.group, s);
  if (!diag.ok) return diag;
  for (std::size_t d = 2; d <= x.top_degree(); ++d)
    if (!specialized_composite_vanishes(x.boundaries[d - 2], x.boundaries[d - 1], s))
      diag.fail("d_" + std::to_string(d - 1) + " o d_" + std::to_string(d) + " does not vanish under " + describe(s));
  return diag;
}

/// Betti numbers of a specialized complex: per degree
/// b_d = n_d * n - rank(d_d) - rank(d_{d+1}), with n the block size.
struct BettiVector {
  std::vector<std::int64_t> unnormalized;
  std::int64_t normalization = 1;

  Rational normalized(std::size_t d) const { return ratio(unnormalized.at(d), normalization); }
  std::vector<Rational> values() const {
    std::vector<Rational> v;
    for (std::size_t d = 0; d < unnormalized.size(); ++d) v.push_back(normalized(d));
    return v;
  }
  std::int64_t euler() const {
    std::int64_t s = 0;
    for (std::size_t d = 0; d < unnormalized.size(); ++d) s += (d % 2 == 0 ? 1 : -1) * unnormalized[d];
    return s;
  }
  bool all_zero() const {
    return std::all_of(unnormalized.begin(), unnormalized.end(), [](auto b) { return b == 0; });
  }
  std::int64_t operator[](std::size_t d) const { return d < unnormalized.size() ? unnormalized[d] : 0; }
  bool operator==(const BettiVector&) const = default;
};

inline std::string to_string(const BettiVector& b) {
  std::string s = "(";
  for (std::size_t d = 0; d < b.unnormalized.size(); ++d) s += (d ? ", " : "") + std::to_string(b.unnormalized[d]);
  s += ")";
  if (b.normalization != 1) s += " / " + std::to_string(b.normalization);
  return s;
}

/// Ranks of d_0 .. d_{top+1} under s (the outer two are zero).
inline std::vector<std::size_t> boundary_ranks(const EquivariantComplex& x, const Specialization& s,
                                               RankMethod method = RankMethod::Auto) {
  std::vector<std::size_t> r(x.top_degree() + 2, 0);
  for (std::size_t d = 1; d <= x.top_degree(); ++d) r[d] = specialized_rank(x.boundaries[d - 1], s, method);
  return r;
}

inline BettiVector betti(const EquivariantComplex& x, const Specialization& s, RankMethod method = RankMethod::Auto) {
  x.check_shape();
  detail::require_valid(x.group, s);
  if (const auto* phi = std::get_if<Cocycle>(&s); phi && phi->is_zero())
    throw ValidationError("twisted Betti numbers need a nonzero cocycle");
  const std::size_t n = block_size(s);
  const auto r = boundary_ranks(x, s, method);
  BettiVector b;
  b.normalization = static_cast<std::int64_t>(n);
  for (std::size_t d = 0; d <= x.top_degree(); ++d)
    b.unnormalized.push_back(static_cast<std::int64_t>(x.cell_counts[d] * n) - static_cast<std::int64_t>(r[d]) -
                             static_cast<std::int64_t>(r[d + 1]));
  return b;
}

/// Dimensions over Q(t) of H_*(X; Q(t)^phi).
inline BettiVector twisted_betti(const EquivariantComplex& x, const Cocycle& phi,
                                 RankMethod method = RankMethod::Auto) {
  if (phi.is_zero()) throw ValidationError("twisted Betti numbers need a nonzero cocycle (an epimorphism onto Z)");
  return betti(x, phi, method);
}

/// Rank of H_k(A subset X) -> H_k(X) under s, for a subcomplex A. Uses
///   rank = dim Z_k(A) + rank(d_{k+1} restricted to rows outside A) - rank(d_{k+1})
/// which needs ranks only, no explicit cycle bases.
inline std::size_t inclusion_rank(const EquivariantComplex& x, const CellSet& a, std::size_t k,
                                  const Specialization& s) {
  const Diagnostics d = check_subcomplex(x, a);
  if (!d.ok) throw ValidationError("not a subcomplex: " + d.messages.front());
  const std::size_t n = block_size(s);
  const auto in_a = a.indices(k);
  const auto below = k >= 1 ? a.indices(k - 1) : std::vector<std::size_t>{};
  const std::size_t cycles_a =
      in_a.size() * n - (k >= 1 ? specialized_rank(x.boundary(k).submatrix(below, in_a), s) : 0);
  const GroupRingMatrix up = x.boundary(k + 1);
  std::vector<std::size_t> all_up(up.cols());
  std::iota(all_up.begin(), all_up.end(), std::size_t{0});
  const std::size_t rank_outside = specialized_rank(up.submatrix(a.indices(k, false), all_up), s);
  const std::size_t rank_up = specialized_rank(up, s);
  return cycles_a + rank_outside - rank_up;
}

}  // namespace l2s
