/**
 * Constructors for equivariant complexes: presentation 2-complexes, surfaces,
 * products, algebraic mapping tori, and gluings (doubles and towers).
 *
 * Lifting convention. An edge e from vertex u to vertex v carrying the group
 * element g_e has boundary g_e.v~ - u~. An edge path is lifted from a prefix
 * p (initially the identity): a forward letter adds p.e~ and then p <- p g_e;
 * a backward letter sets p <- p g_e^-1 and then adds -p.e~. For one-vertex
 * complexes this is exactly Fox calculus.
 */
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "core.hpp"
#include "group_ring.hpp"
#include "linalg.hpp"
#include "specialize.hpp"
#include "sutured.hpp"
#include "word.hpp"

namespace l2s {

// ---------------------------------------------------------------------------
// 2-complexes from edge data

struct EdgeSpec {
  std::size_t source = 0;
  std::size_t target = 0;
  Word label;  ///< group element carried by the edge; empty on tree edges
};

/// Signed 1-based edge indices.
using EdgePath = std::vector<int>;

struct PathLift {
  std::vector<GroupRingElement> chain;  ///< coefficient per edge
  Word end;                             ///< accumulated group element
  std::size_t end_vertex = 0;
};

inline PathLift lift_path(const std::vector<EdgeSpec>& edges, const EdgePath& path, std::size_t start_vertex,
                          Word prefix = {}) {
  PathLift out;
  out.chain.assign(edges.size(), GroupRingElement());
  std::size_t at = start_vertex;
  for (int l : path) {
    const std::size_t e = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || e > edges.size()) throw ValidationError("edge path letter " + std::to_string(l) + " out of range");
    const EdgeSpec& spec = edges[e - 1];
    if (l > 0) {
      if (spec.source != at) throw ValidationError("edge path is discontinuous at edge " + std::to_string(e));
      out.chain[e - 1] += GroupRingElement::word(prefix);
      prefix = prefix * spec.label;
      at = spec.target;
    } else {
      if (spec.target != at) throw ValidationError("edge path is discontinuous at edge -" + std::to_string(e));
      prefix = prefix * spec.label.inverse();
      out.chain[e - 1] += -GroupRingElement::word(prefix);
      at = spec.source;
    }
  }
  out.end = prefix;
  out.end_vertex = at;
  return out;
}

struct FaceSpec {
  std::size_t base_vertex = 0;
  EdgePath boundary;
};

/// A 2-complex (or graph, when there are no faces) with the given cells.
inline EquivariantComplex complex_from_cells(FpGroup group, std::size_t vertices, const std::vector<EdgeSpec>& edges,
                                             const std::vector<FaceSpec>& faces) {
  GroupRingMatrix d1(vertices, edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].source >= vertices || edges[e].target >= vertices)
      throw ValidationError("edge " + std::to_string(e + 1) + " has an endpoint out of range");
    d1(edges[e].target, e) += GroupRingElement::word(edges[e].label);
    d1(edges[e].source, e) += GroupRingElement(-1);
  }
  std::vector<std::size_t> counts{vertices, edges.size()};
  std::vector<GroupRingMatrix> bds{std::move(d1)};
  if (!faces.empty()) {
    GroupRingMatrix d2(edges.size(), faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const PathLift lift = lift_path(edges, faces[f].boundary, faces[f].base_vertex);
      if (lift.end_vertex != faces[f].base_vertex)
        throw ValidationError("boundary path of face " + std::to_string(f + 1) + " is not closed");
      for (std::size_t e = 0; e < edges.size(); ++e) d2(e, f) = lift.chain[e];
    }
    counts.push_back(faces.size());
    bds.push_back(std::move(d2));
  }
  return EquivariantComplex::make(std::move(group), std::move(counts), std::move(bds));
}

/// Presentation 2-complex: one vertex, an edge per generator, a face per
/// relator. d_1 = (x_j - 1), d_2(j, r) = Fox derivative dr/dx_j.
inline EquivariantComplex fox_complex(const FpGroup& group) {
  group.validate();
  std::vector<EdgeSpec> edges;
  for (int g = 1; g <= group.generator_count; ++g) edges.push_back({0, 0, Word{g}});
  std::vector<FaceSpec> faces;
  for (const auto& r : group.relators) {
    if (r.empty()) throw ValidationError("empty relator");
    faces.push_back({0, r.letters});
  }
  return complex_from_cells(group, 1, edges, faces);
}

/// Fox derivative dw/dx_j as a group ring element.
inline GroupRingElement fox_derivative(const Word& w, int j) {
  GroupRingElement out;
  Word prefix;
  for (int l : w.letters) {
    if (l == j) out += GroupRingElement::word(prefix);
    prefix = prefix * Word{l};
    if (l == -j) out += -GroupRingElement::word(prefix);
  }
  return out;
}

/// Checks sum_j (dr/dx_j)(x_j - 1) = r - 1 for every relator, exactly in Z[F].
inline bool fox_fundamental_formula_holds(const EquivariantComplex& fox) {
  const GroupRingMatrix c = compose(fox.boundary(1), fox.boundary(2));
  for (std::size_t r = 0; r < fox.group.relators.size(); ++r)
    if (!(c(0, r) == GroupRingElement::word(fox.group.relators[r]) - GroupRingElement(1))) return false;
  return true;
}

inline EquivariantComplex circle() {
  return complex_from_cells(FpGroup{1, {}}, 1, {{0, 0, Word{1}}}, {});
}

/// The interval: vertices v- (0) and v+ (1), one edge with d e = v+ - v-.
inline EquivariantComplex interval() { return complex_from_cells(FpGroup{0, {}}, 2, {{0, 1, Word{}}}, {}); }

// ---------------------------------------------------------------------------
// Surfaces

struct SurfaceSpec {
  int genus = 0;
  int boundary_components = 0;

  long euler() const { return 2 - 2L * genus - boundary_components; }
  int generator_count() const { return 2 * genus + boundary_components; }
  bool operator==(const SurfaceSpec&) const = default;
};

inline void validate_surface_spec(const SurfaceSpec& s) {
  if (s.genus < 0 || s.boundary_components < 0) throw ValidationError("surface genus and boundary count must be >= 0");
  if (s.genus == 0 && s.boundary_components == 0) throw ValidationError("the sphere is excluded as a surface");
}

namespace detail {

/// Surface relator prod [a_i, b_i] prod c_j on generators a_i = 2i-1,
/// b_i = 2i, c_j = 2g + j.
inline Word surface_relator(const SurfaceSpec& s) {
  std::vector<int> w;
  for (int i = 0; i < s.genus; ++i) {
    const int a = 2 * i + 1, b = 2 * i + 2;
    w.insert(w.end(), {a, b, -a, -b});
  }
  for (int j = 1; j <= s.boundary_components; ++j) w.push_back(2 * s.genus + j);
  return Word(std::move(w));
}

/// Edge numbering of the surface model. Closed: edges are the generators.
/// With boundary: edges 1..2g are a_i, b_i; then c_j (loop at vertex j);
/// then the arcs s_j from vertex 0 to vertex j.
struct SurfaceCells {
  std::size_t vertices = 1;
  std::vector<EdgeSpec> edges;
  FaceSpec face;
  std::vector<EdgePath> generator_paths;  ///< loop at vertex 0 per generator
};

inline SurfaceCells surface_cells(const SurfaceSpec& s) {
  SurfaceCells c;
  const int g = s.genus, b = s.boundary_components;
  c.vertices = 1 + static_cast<std::size_t>(b);
  for (int i = 1; i <= 2 * g; ++i) {
    c.edges.push_back({0, 0, Word{i}});
    c.generator_paths.push_back({i});
  }
  for (int j = 1; j <= b; ++j) c.edges.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(j), Word{2 * g + j}});
  for (int j = 1; j <= b; ++j) c.edges.push_back({0, static_cast<std::size_t>(j), Word{}});
  for (int j = 1; j <= b; ++j) {
    const int cj = 2 * g + j, sj = 2 * g + b + j;
    c.generator_paths.push_back({sj, cj, -sj});
  }
  c.face.base_vertex = 0;
  for (int l : surface_relator(s).letters) {
    const auto& p = c.generator_paths[static_cast<std::size_t>(std::abs(l)) - 1];
    if (l > 0) {
      c.face.boundary.insert(c.face.boundary.end(), p.begin(), p.end());
    } else {
      for (auto it = p.rbegin(); it != p.rend(); ++it) c.face.boundary.push_back(-*it);
    }
  }
  return c;
}

}  // namespace detail

/// Orientable surface of genus g with b boundary circles. Closed: one vertex,
/// 2g edges, one face. With boundary: vertices v0, p_1..p_b, loops a_i, b_i
/// at v0, boundary loops c_j at p_j, arcs s_j from v0 to p_j, one face.
/// Boundary cells (p_j, c_j) carry the Gamma label so products inherit them.
inline EquivariantComplex surface(const SurfaceSpec& spec) {
  validate_surface_spec(spec);
  const auto cells = detail::surface_cells(spec);
  FpGroup group{spec.generator_count(), {detail::surface_relator(spec)}};
  EquivariantComplex x = complex_from_cells(std::move(group), cells.vertices, cells.edges, {cells.face});
  for (int j = 1; j <= spec.boundary_components; ++j) {
    x.labels[0][static_cast<std::size_t>(j)] = CellLabel::Gamma;
    x.labels[1][static_cast<std::size_t>(2 * spec.genus + j - 1)] = CellLabel::Gamma;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Products and unions

/// Position of the product cell c_i (degree p of X) x c'_j (degree q of Y)
/// in degree p+q: blocks ordered by q ascending, then i, then j.
struct ProductIndex {
  std::vector<std::vector<std::size_t>> block_offset;  ///< [p][q]
  std::vector<std::size_t> counts;
  std::vector<std::size_t> ny_counts;
  std::size_t at(std::size_t p, std::size_t q, std::size_t i, std::size_t j) const {
    return block_offset[p][q] + i * ny_counts[q] + j;
  }
};

inline ProductIndex product_index(const EquivariantComplex& x, const EquivariantComplex& y) {
  ProductIndex idx;
  idx.ny_counts = y.cell_counts;
  const std::size_t top = x.top_degree() + y.top_degree();
  idx.counts.assign(top + 1, 0);
  idx.block_offset.assign(x.top_degree() + 1, std::vector<std::size_t>(y.top_degree() + 1, 0));
  for (std::size_t n = 0; n <= top; ++n)
    for (std::size_t q = 0; q <= y.top_degree(); ++q) {
      if (q > n || n - q > x.top_degree()) continue;
      const std::size_t p = n - q;
      idx.block_offset[p][q] = idx.counts[n];
      idx.counts[n] += x.cell_counts[p] * y.cell_counts[q];
    }
  return idx;
}

/// Cellular product X x Y with d(c x c') = dc x c' + (-1)^|c| c x dc'. The
/// group is G_X x G_Y presented by both relator sets plus all commutators.
/// A product cell is labeled Gamma when either factor is.
inline EquivariantComplex product(const EquivariantComplex& x, const EquivariantComplex& y) {
  x.check_shape();
  y.check_shape();
  const int gx = x.group.generator_count;
  FpGroup group{gx + y.group.generator_count, x.group.relators};
  for (const auto& r : y.group.relators) group.relators.push_back(shift_generators(r, gx));
  for (int a = 1; a <= gx; ++a)
    for (int b = gx + 1; b <= group.generator_count; ++b) group.relators.push_back(Word{a, b, -a, -b});

  const ProductIndex idx = product_index(x, y);
  const std::size_t top = idx.counts.size() - 1;
  std::vector<GroupRingMatrix> bds;
  for (std::size_t n = 1; n <= top; ++n) bds.emplace_back(idx.counts[n - 1], idx.counts[n]);
  std::vector<std::vector<CellLabel>> labels;
  for (auto c : idx.counts) labels.emplace_back(c, CellLabel::None);

  for (std::size_t p = 0; p <= x.top_degree(); ++p)
    for (std::size_t q = 0; q <= y.top_degree(); ++q) {
      const std::size_t n = p + q;
      for (std::size_t i = 0; i < x.cell_counts[p]; ++i)
        for (std::size_t j = 0; j < y.cell_counts[q]; ++j) {
          const std::size_t col = idx.at(p, q, i, j);
          if (x.labels[p][i] == CellLabel::Gamma || y.labels[q][j] == CellLabel::Gamma)
            labels[n][col] = CellLabel::Gamma;
          if (n == 0) continue;
          auto& m = bds[n - 1];
          if (p >= 1)
            for (std::size_t r = 0; r < x.cell_counts[p - 1]; ++r) {
              const auto& e = x.boundaries[p - 1](r, i);
              if (!e.is_zero()) m(idx.at(p - 1, q, r, j), col) += e;
            }
          if (q >= 1)
            for (std::size_t r = 0; r < y.cell_counts[q - 1]; ++r) {
              const auto& e = y.boundaries[q - 1](r, j);
              if (e.is_zero()) continue;
              GroupRingElement shifted = e.map_words([&](const Word& w) { return shift_generators(w, gx); });
              m(idx.at(p, q - 1, i, r), col) += (p % 2 == 0) ? shifted : -shifted;
            }
        }
    }
  EquivariantComplex out{std::move(group), idx.counts, std::move(bds), std::move(labels)};
  out.check_shape();
  return out;
}

/// Disjoint union; the group is the free product of the two groups.
inline EquivariantComplex disjoint_union(const EquivariantComplex& x, const EquivariantComplex& y) {
  x.check_shape();
  y.check_shape();
  const int gx = x.group.generator_count;
  FpGroup group{gx + y.group.generator_count, x.group.relators};
  for (const auto& r : y.group.relators) group.relators.push_back(shift_generators(r, gx));
  const std::size_t top = std::max(x.top_degree(), y.top_degree());
  EquivariantComplex out;
  out.group = std::move(group);
  for (std::size_t d = 0; d <= top; ++d) {
    out.cell_counts.push_back(x.count(d) + y.count(d));
    std::vector<CellLabel> l(x.count(d), CellLabel::None);
    if (d <= x.top_degree()) l = x.labels[d];
    if (d <= y.top_degree()) l.insert(l.end(), y.labels[d].begin(), y.labels[d].end());
    else l.resize(out.cell_counts.back(), CellLabel::None);
    out.labels.push_back(std::move(l));
  }
  for (std::size_t d = 1; d <= top; ++d) {
    GroupRingMatrix m(out.cell_counts[d - 1], out.cell_counts[d]);
    const GroupRingMatrix a = x.boundary(d), b = y.boundary(d);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        m(x.count(d - 1) + i, x.count(d) + j) =
            b(i, j).map_words([&](const Word& w) { return shift_generators(w, gx); });
    out.boundaries.push_back(std::move(m));
  }
  out.check_shape();
  return out;
}

/// F x [-1, 1] as a sutured complex: c x v+ in R+, c x v- in R-, and
/// c x e in gamma exactly when c lies on the boundary of F.
inline SuturedComplex product_with_interval(const EquivariantComplex& f) {
  const EquivariantComplex i = interval();
  EquivariantComplex m = product(f, i);
  const ProductIndex idx = product_index(f, i);
  for (std::size_t p = 0; p <= f.top_degree(); ++p)
    for (std::size_t c = 0; c < f.cell_counts[p]; ++c) {
      m.labels[p][idx.at(p, 0, c, 0)] = CellLabel::RMinus;
      m.labels[p][idx.at(p, 0, c, 1)] = CellLabel::RPlus;
      m.labels[p + 1][idx.at(p, 1, c, 0)] =
          f.labels[p][c] == CellLabel::Gamma ? CellLabel::Gamma : CellLabel::None;
    }
  SuturedComplex sc{std::move(m), {}, {}};
  sc.flags = {true, true, true, true};
  return sc;
}

inline SuturedComplex product_with_interval(const SurfaceSpec& spec) {
  SuturedComplex sc = product_with_interval(surface(spec));
  sc.flags.infinite_pi1 = !(spec.genus == 0 && spec.boundary_components == 1);
  return sc;
}

// ---------------------------------------------------------------------------
// Mapping tori

/// Images of the interior generators a_1, b_1, ..., a_g, b_g as words in the
/// surface generators. Boundary generators and arcs are fixed.
struct MonodromySpec {
  std::vector<Word> generator_images;
  bool operator==(const MonodromySpec&) const = default;
};

inline MonodromySpec identity_monodromy(const SurfaceSpec& s) {
  MonodromySpec m;
  for (int i = 1; i <= 2 * s.genus; ++i) m.generator_images.push_back(Word{i});
  return m;
}

namespace detail {
inline Word apply_monodromy(const SurfaceSpec& s, const MonodromySpec& m, const Word& w) {
  std::vector<int> out;
  for (int l : w.letters) {
    const int g = std::abs(l);
    const Word img = g <= 2 * s.genus ? m.generator_images[static_cast<std::size_t>(g) - 1] : Word{g};
    const Word piece = l > 0 ? img : img.inverse();
    out.insert(out.end(), piece.letters.begin(), piece.letters.end());
  }
  return free_reduce(Word(std::move(out)));
}
}  // namespace detail

inline void validate_monodromy(const SurfaceSpec& s, const MonodromySpec& m) {
  validate_surface_spec(s);
  if (s.genus == 0) throw ValidationError("mapping torus fiber must have genus >= 1");
  if (m.generator_images.size() != static_cast<std::size_t>(2 * s.genus))
    throw ValidationError("monodromy has " + std::to_string(m.generator_images.size()) + " images, expected " +
                          std::to_string(2 * s.genus));
  for (const auto& w : m.generator_images) free_reduce(w, s.generator_count());
  const Word r = detail::surface_relator(s);
  if (!(detail::apply_monodromy(s, m, r) == r))
    throw ValidationError("monodromy does not fix the surface relator: image is " +
                          to_string(detail::apply_monodromy(s, m, r)));
}

struct MappingTorus {
  EquivariantComplex complex;
  Cocycle phi;  ///< the fibration class: 0 on the fiber, 1 on the stable letter
};

/// Algebraic mapping torus of the cellular lift h# of the monodromy:
/// cells c and c x e, with d(c x e) = dc x e + (-1)^|c| (t.h#(c) - c).
/// Group: the surface group plus t with x t = t h(x) for each generator x.
inline MappingTorus mapping_torus(const SurfaceSpec& s, const MonodromySpec& m) {
  validate_monodromy(s, m);
  const EquivariantComplex f = surface(s);
  const auto cells = detail::surface_cells(s);
  const int ng = s.generator_count();
  const int t = ng + 1;

  // h# on each degree; identity except on the interior loops a_i, b_i
  std::vector<GroupRingMatrix> h;
  for (std::size_t d = 0; d <= 2; ++d) {
    GroupRingMatrix id(f.cell_counts[d], f.cell_counts[d]);
    for (std::size_t i = 0; i < f.cell_counts[d]; ++i) id(i, i) = GroupRingElement(1);
    h.push_back(std::move(id));
  }
  for (int g = 1; g <= 2 * s.genus; ++g) {
    EdgePath path;
    for (int l : m.generator_images[static_cast<std::size_t>(g) - 1].letters) {
      const auto& p = cells.generator_paths[static_cast<std::size_t>(std::abs(l)) - 1];
      if (l > 0) path.insert(path.end(), p.begin(), p.end());
      else for (auto it = p.rbegin(); it != p.rend(); ++it) path.push_back(-*it);
    }
    const PathLift lift = lift_path(cells.edges, path, 0);
    for (std::size_t e = 0; e < cells.edges.size(); ++e) h[1](e, static_cast<std::size_t>(g) - 1) = lift.chain[e];
  }

  FpGroup group{t, f.group.relators};
  for (int g = 1; g <= ng; ++g) {
    const Word img = g <= 2 * s.genus ? m.generator_images[static_cast<std::size_t>(g) - 1] : Word{g};
    group.relators.push_back(free_reduce(Word{g, t} * img.inverse() * Word{-t}));
  }

  EquivariantComplex x;
  x.group = std::move(group);
  const std::vector<std::size_t> n = f.cell_counts;  // n0, n1, n2
  x.cell_counts = {n[0], n[1] + n[0], n[2] + n[1], n[2]};
  for (std::size_t d = 0; d <= 3; ++d) {
    std::vector<CellLabel> l;
    if (d <= 2) l = f.labels[d];
    if (d >= 1) l.insert(l.end(), f.labels[d - 1].begin(), f.labels[d - 1].end());
    x.labels.push_back(std::move(l));
  }
  const Word tw{t};
  for (std::size_t d = 1; d <= 3; ++d) {
    GroupRingMatrix b(x.cell_counts[d - 1], x.cell_counts[d]);
    // surface cells of degree d
    if (d <= 2)
      for (std::size_t i = 0; i < n[d - 1]; ++i)
        for (std::size_t j = 0; j < n[d]; ++j) b(i, j) = f.boundaries[d - 1](i, j);
    // c x e for c of degree d-1
    const std::size_t shift_col = d <= 2 ? n[d] : 0;
    const std::size_t shift_row = d - 1 <= 2 && d >= 2 ? n[d - 1] : 0;
    const long sign = (d - 1) % 2 == 0 ? 1 : -1;
    for (std::size_t c = 0; c < n[d - 1]; ++c) {
      const std::size_t col = shift_col + c;
      if (d >= 2)
        for (std::size_t r = 0; r < n[d - 2]; ++r) b(shift_row + r, col) += f.boundaries[d - 2](r, c);
      for (std::size_t r = 0; r < n[d - 1]; ++r) {
        GroupRingElement e = h[d - 1](r, c).sandwich(tw, Word{});
        if (r == c) e = e - GroupRingElement(1);
        b(r, col) += sign > 0 ? e : -e;
      }
    }
    x.boundaries.push_back(std::move(b));
  }
  x.check_shape();
  Cocycle phi;
  phi.values.assign(static_cast<std::size_t>(t), Integer(0));
  phi.values.back() = 1;
  phi.primitive = true;
  return {std::move(x), std::move(phi)};
}

// ---------------------------------------------------------------------------
// Gluing

struct CellMatch {
  std::size_t degree = 0;
  std::size_t from = 0;  ///< cell of the from-piece, merged away
  std::size_t to = 0;    ///< cell of the to-piece, kept
};

struct Gluing {
  std::size_t from_piece = 0;
  std::size_t to_piece = 0;
  std::vector<CellMatch> cells;
};

struct GlueResult {
  EquivariantComplex complex;
  std::vector<int> generator_offset;  ///< per piece
  std::vector<int> stable_letters;    ///< 1-based generators added for non-tree gluing components
  /// origin[d][k] = (piece, cell) of result cell k
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> origin;
  /// identified[d][k]: result cell k absorbed at least one glued cell
  std::vector<std::vector<bool>> identified;
};

/// Glues pieces along closed subcomplexes matched cell by cell. Piece groups
/// are combined by free product; each gluing component that does not join
/// two new pieces receives a stable letter. Boundary entries of matched
/// cells must agree term by term in canonical order (up to the generator
/// renaming between pieces); the resulting identifications become relators.
inline GlueResult glue(const std::vector<EquivariantComplex>& pieces, const std::vector<Gluing>& gluings) {
  if (pieces.empty()) throw ValidationError("glue needs at least one piece");
  std::size_t top = 0;
  for (const auto& p : pieces) {
    p.check_shape();
    top = std::max(top, p.top_degree());
  }
  GlueResult res;
  int gens = 0;
  for (const auto& p : pieces) {
    res.generator_offset.push_back(gens);
    gens += p.group.generator_count;
  }
  auto global = [&](std::size_t piece, const Word& w) { return shift_generators(w, res.generator_offset[piece]); };

  // target[piece][d][cell] = (to piece, to cell, gluing index) for merged cells
  struct Target {
    std::size_t piece, cell, gluing;
  };
  std::vector<std::vector<std::vector<std::optional<Target>>>> target(pieces.size());
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (std::size_t d = 0; d <= top; ++d) target[p].emplace_back(pieces[p].count(d));

  std::vector<CellSet> from_sets, to_sets;
  for (std::size_t gi = 0; gi < gluings.size(); ++gi) {
    const auto& gl = gluings[gi];
    if (gl.from_piece >= pieces.size() || gl.to_piece >= pieces.size())
      throw ValidationError("gluing " + std::to_string(gi) + " names a missing piece");
    const auto& a = pieces[gl.from_piece];
    const auto& b = pieces[gl.to_piece];
    CellSet fs = empty_cells(a), ts = empty_cells(b);
    for (const auto& m : gl.cells) {
      if (m.degree > a.top_degree() || m.degree > b.top_degree() || m.from >= a.count(m.degree) ||
          m.to >= b.count(m.degree))
        throw ValidationError("gluing " + std::to_string(gi) + " matches a cell out of range");
      if (fs.contains(m.degree, m.from) || ts.contains(m.degree, m.to) || target[gl.from_piece][m.degree][m.from])
        throw ValidationError("gluing " + std::to_string(gi) + " is not a bijection");
      fs.member[m.degree][m.from] = true;
      ts.member[m.degree][m.to] = true;
      target[gl.from_piece][m.degree][m.from] = Target{gl.to_piece, m.to, gi};
    }
    for (const auto* s : {&fs, &ts}) {
      const Diagnostics d = check_subcomplex(s == &fs ? a : b, *s);
      if (!d.ok) throw ValidationError("gluing " + std::to_string(gi) + ": glued cells are not a subcomplex: " +
                                       d.messages.front());
    }
    from_sets.push_back(std::move(fs));
    to_sets.push_back(std::move(ts));
  }

  std::vector<Word> relators;
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (const auto& r : pieces[p].group.relators) relators.push_back(global(p, r));

  // transport[p][d][cell]: lift of the from-cell = transport . lift of its target
  std::vector<std::vector<std::vector<Word>>> transport(pieces.size());
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (std::size_t d = 0; d <= top; ++d) transport[p].emplace_back(pieces[p].count(d));

  std::vector<std::size_t> parent(pieces.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  for (std::size_t gi = 0; gi < gluings.size(); ++gi) {
    const auto& gl = gluings[gi];
    const auto& a = pieces[gl.from_piece];
    const auto& b = pieces[gl.to_piece];
    auto to_cell = [&](std::size_t d, std::size_t c) { return target[gl.from_piece][d][c]->cell; };
    auto& tr = transport[gl.from_piece];

    // matched entry terms as (u, v) word pairs in global generators
    auto term_pairs = [&](std::size_t d, std::size_t r, std::size_t c) {
      const auto& e = a.boundaries[d - 1](r, c);
      const auto& f = b.boundaries[d - 1](to_cell(d - 1, r), to_cell(d, c));
      if (e.terms().size() != f.terms().size())
        throw ValidationError("gluing " + std::to_string(gi) + " does not preserve the boundary of cell " +
                              std::to_string(c) + " in degree " + std::to_string(d));
      std::vector<std::pair<Word, Word>> out;
      for (std::size_t k = 0; k < e.terms().size(); ++k) {
        if (e.terms()[k].coefficient != f.terms()[k].coefficient)
          throw ValidationError("gluing " + std::to_string(gi) + " changes a coefficient in the boundary of cell " +
                                std::to_string(c) + " in degree " + std::to_string(d));
        out.emplace_back(global(gl.from_piece, e.terms()[k].word), global(gl.to_piece, f.terms()[k].word));
      }
      return out;
    };
    // the to-side must not have extra incidences between glued cells
    for (std::size_t d = 1; d <= a.top_degree(); ++d)
      for (std::size_t c = 0; c < a.count(d); ++c) {
        if (!from_sets[gi].contains(d, c)) continue;
        for (std::size_t r = 0; r < a.count(d - 1); ++r)
          if (from_sets[gi].contains(d - 1, r)) (void)term_pairs(d, r, c);
      }

    for (const auto& comp : components(a, from_sets[gi])) {
      Word root_word;
      if (find(gl.from_piece) != find(gl.to_piece)) {
        parent[find(gl.from_piece)] = find(gl.to_piece);
      } else {
        ++gens;
        res.stable_letters.push_back(gens);
        root_word = Word{gens};
      }
      // breadth-first propagation of transport words through incidences
      std::vector<std::vector<bool>> known;
      for (std::size_t d = 0; d <= a.top_degree(); ++d) known.emplace_back(a.count(d), false);
      std::vector<std::pair<std::size_t, std::size_t>> queue;
      for (std::size_t i = 0; i < a.count(0) && queue.empty(); ++i)
        if (comp.contains(0, i)) queue.emplace_back(0, i);
      if (queue.empty()) throw ValidationError("gluing " + std::to_string(gi) + " has a component without vertices");
      tr[0][queue[0].second] = root_word;
      known[0][queue[0].second] = true;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [d, c] = queue[head];
        if (d + 1 <= a.top_degree())
          for (std::size_t up = 0; up < a.count(d + 1); ++up)
            if (comp.contains(d + 1, up) && !known[d + 1][up] && !a.boundaries[d](c, up).is_zero()) {
              const auto tp = term_pairs(d + 1, c, up);
              tr[d + 1][up] = free_reduce(tp[0].first * tr[d][c] * tp[0].second.inverse());
              known[d + 1][up] = true;
              queue.emplace_back(d + 1, up);
            }
        if (d >= 1)
          for (std::size_t down = 0; down < a.count(d - 1); ++down)
            if (comp.contains(d - 1, down) && !known[d - 1][down] && !a.boundaries[d - 1](down, c).is_zero()) {
              const auto tp = term_pairs(d, down, c);
              tr[d - 1][down] = free_reduce(tp[0].first.inverse() * tr[d][c] * tp[0].second);
              known[d - 1][down] = true;
              queue.emplace_back(d - 1, down);
            }
      }
      // u g_r = g_c v for every matched term
      for (std::size_t d = 1; d <= a.top_degree(); ++d)
        for (std::size_t c = 0; c < a.count(d); ++c) {
          if (!comp.contains(d, c)) continue;
          for (std::size_t r = 0; r < a.count(d - 1); ++r) {
            if (!comp.contains(d - 1, r) || a.boundaries[d - 1](r, c).is_zero()) continue;
            for (const auto& [u, v] : term_pairs(d, r, c)) {
              Word rel = free_reduce(u * tr[d - 1][r] * v.inverse() * tr[d][c].inverse());
              if (!rel.empty()) relators.push_back(std::move(rel));
            }
          }
        }
    }
  }

  // drop duplicate relators, keeping first occurrences
  std::set<Word> seen;
  FpGroup group{gens, {}};
  for (auto& r : relators)
    if (seen.insert(r).second) group.relators.push_back(r);

  // result cell numbering: surviving cells in piece order
  std::vector<std::vector<std::vector<long>>> index(pieces.size());
  res.origin.assign(top + 1, {});
  res.identified.assign(top + 1, {});
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (std::size_t d = 0; d <= top; ++d) {
      index[p].emplace_back(pieces[p].count(d), -1);
      for (std::size_t c = 0; c < pieces[p].count(d); ++c)
        if (!target[p][d][c]) {
          index[p][d][c] = static_cast<long>(res.origin[d].size());
          res.origin[d].emplace_back(p, c);
          res.identified[d].push_back(false);
        }
    }
  // resolve merged cells to (result index, accumulated transport)
  auto resolve = [&](std::size_t p, std::size_t d, std::size_t c) {
    Word acc;
    std::size_t steps = 0;
    while (target[p][d][c]) {
      if (++steps > pieces.size() + gluings.size()) throw ValidationError("gluing chain is cyclic");
      acc = acc * transport[p][d][c];
      const Target t = *target[p][d][c];
      p = t.piece;
      c = t.cell;
    }
    return std::pair<std::size_t, Word>{static_cast<std::size_t>(index[p][d][c]), free_reduce(acc)};
  };
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (std::size_t d = 0; d <= top; ++d)
      for (std::size_t c = 0; c < pieces[p].count(d); ++c)
        if (target[p][d][c]) res.identified[d][resolve(p, d, c).first] = true;

  EquivariantComplex& out = res.complex;
  out.group = std::move(group);
  for (std::size_t d = 0; d <= top; ++d) {
    out.cell_counts.push_back(res.origin[d].size());
    std::vector<CellLabel> l;
    for (const auto& [p, c] : res.origin[d]) l.push_back(pieces[p].labels[d][c]);
    out.labels.push_back(std::move(l));
  }
  for (std::size_t d = 1; d <= top; ++d) {
    GroupRingMatrix m(out.cell_counts[d - 1], out.cell_counts[d]);
    for (std::size_t k = 0; k < res.origin[d].size(); ++k) {
      const auto [p, c] = res.origin[d][k];
      if (d > pieces[p].top_degree()) continue;
      for (std::size_t r = 0; r < pieces[p].count(d - 1); ++r) {
        const auto& e = pieces[p].boundaries[d - 1](r, c);
        if (e.is_zero()) continue;
        const auto [row, g] = resolve(p, d - 1, r);
        m(row, k) += e.map_words([&](const Word& w) { return global(p, w) * g; });
      }
    }
    out.boundaries.push_back(std::move(m));
  }
  out.check_shape();
  return res;
}

namespace detail {
/// Identified cells in the closure of gamma become gamma, other identified
/// cells become interior.
inline void relabel_glued(GlueResult& g) {
  auto& x = g.complex;
  const CellSet gamma_closure = closure(x, cells_with(x, {CellLabel::Gamma}));
  for (std::size_t d = 0; d < x.labels.size(); ++d)
    for (std::size_t k = 0; k < x.labels[d].size(); ++k)
      if (g.identified[d][k]) x.labels[d][k] = gamma_closure.contains(d, k) ? CellLabel::Gamma : CellLabel::None;
}

inline std::vector<CellMatch> label_matching(const EquivariantComplex& x, CellLabel label) {
  std::vector<CellMatch> out;
  for (std::size_t d = 0; d < x.labels.size(); ++d)
    for (std::size_t i = 0; i < x.labels[d].size(); ++i)
      if (x.labels[d][i] == label) out.push_back({d, i, i});
  return out;
}
}  // namespace detail

/// DM = M u_{R+-} M with all remaining boundary labeled gamma.
inline SuturedComplex double_complex(const SuturedComplex& sc) {
  require_sutured(sc);
  const auto& m = sc.space;
  std::vector<Gluing> gl;
  for (auto label : {CellLabel::RPlus, CellLabel::RMinus}) {
    auto cells = detail::label_matching(m, label);
    if (!cells.empty()) gl.push_back({0, 1, std::move(cells)});
  }
  if (gl.empty()) throw ValidationError("double is degenerate: R+ and R- are both empty (disjoint union)");
  GlueResult g = glue({m, m}, gl);
  detail::relabel_glued(g);
  SuturedComplex out{std::move(g.complex), sc.flags, {}};
  return out;
}

struct Tower {
  EquivariantComplex complex;
  std::size_t n = 0;
  /// layer[d][k] = smallest |i| among the copies M_i containing cell k
  std::vector<std::vector<std::size_t>> layer;

  /// Cells of X_k = M_{-k} u ... u M_k.
  CellSet stage(std::size_t k) const {
    CellSet s;
    for (const auto& l : layer) {
      std::vector<bool> row;
      for (auto v : l) row.push_back(v <= k);
      s.member.push_back(std::move(row));
    }
    return s;
  }
};

/// X_n: copies M_{-n}, ..., M_n with R+ of M_i glued to R- of M_{i+1}
/// through the sutured identification.
inline Tower tower(const SuturedComplex& sc, std::size_t n) {
  require_sutured(sc);
  const Identification id = resolved_identification(sc);
  const std::size_t copies = 2 * n + 1;
  std::vector<Gluing> gl;
  for (std::size_t i = 0; i + 1 < copies; ++i) {
    Gluing g{i, i + 1, {}};
    for (std::size_t d = 0; d < id.size(); ++d)
      for (const auto& [plus, minus] : id[d]) g.cells.push_back({d, plus, minus});
    if (!g.cells.empty()) gl.push_back(std::move(g));
  }
  GlueResult g = glue(std::vector<EquivariantComplex>(copies, sc.space), gl);
  Tower t;
  t.n = n;
  // a glued R+ cell of copy i lives on in copy i+1; it belongs to both copies
  std::vector<std::vector<std::set<std::size_t>>> copies_of(g.origin.size());
  for (std::size_t d = 0; d < g.origin.size(); ++d) {
    copies_of[d].resize(g.origin[d].size());
    for (std::size_t k = 0; k < g.origin[d].size(); ++k) copies_of[d][k].insert(g.origin[d][k].first);
  }
  for (std::size_t i = 0; i + 1 < copies; ++i)
    for (std::size_t d = 0; d < id.size(); ++d)
      for (const auto& [plus, minus] : id[d]) {
        // find the result index of (copy i+1, minus)
        for (std::size_t k = 0; k < g.origin[d].size(); ++k)
          if (g.origin[d][k] == std::pair<std::size_t, std::size_t>{i + 1, minus}) copies_of[d][k].insert(i);
      }
  for (std::size_t d = 0; d < g.origin.size(); ++d) {
    std::vector<std::size_t> l;
    for (const auto& cs : copies_of[d]) {
      std::size_t best = n;
      for (auto c : cs) best = std::min(best, c > n ? c - n : n - c);
      l.push_back(best);
    }
    t.layer.push_back(std::move(l));
  }
  detail::relabel_glued(g);
  t.complex = std::move(g.complex);
  return t;
}

// ---------------------------------------------------------------------------
// Cocycles

/// Integer exponent-sum matrix: rows are relators, columns generators.
inline Matrix<Rational> exponent_sums(const FpGroup& g) {
  Matrix<Rational> m(g.relators.size(), static_cast<std::size_t>(g.generator_count));
  for (std::size_t r = 0; r < g.relators.size(); ++r)
    for (int l : g.relators[r].letters) m(r, static_cast<std::size_t>(std::abs(l)) - 1) += l > 0 ? 1 : -1;
  return m;
}

inline Cocycle primitive_part(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  Cocycle c;
  for (const auto& x : v) c.values.push_back(Integer(x * den));
  const Integer g = c.content();
  if (g != 0)
    for (auto& x : c.values) x /= g;
  c.primitive = g != 0;
  return c;
}

/// Distinct primitive cocycles: a rational basis of H^1 made primitive,
/// followed by pairwise sums and differences until `count` are found.
inline std::vector<Cocycle> primitive_cocycles(const FpGroup& g, std::size_t count) {
  std::vector<std::vector<Rational>> basis;
  if (g.relators.empty()) {
    for (int i = 0; i < g.generator_count; ++i) {
      std::vector<Rational> v(static_cast<std::size_t>(g.generator_count), Rational(0));
      v[static_cast<std::size_t>(i)] = 1;
      basis.push_back(std::move(v));
    }
  } else {
    basis = nullspace(exponent_sums(g));
  }
  std::vector<Cocycle> out;
  auto add = [&](const std::vector<Rational>& v) {
    if (out.size() >= count) return;
    Cocycle c = primitive_part(v);
    if (!c.primitive) return;
    for (const auto& o : out)
      if (o.values == c.values) return;
    out.push_back(std::move(c));
  };
  for (const auto& v : basis) add(v);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      std::vector<Rational> s, d;
      for (std::size_t k = 0; k < basis[i].size(); ++k) {
        s.push_back(basis[i][k] + basis[j][k]);
        d.push_back(basis[i][k] - basis[j][k]);
      }
      add(s);
      add(d);
    }
  return out;
}

}  // namespace l2s
