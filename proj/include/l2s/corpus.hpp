/**
 * The built-in example corpus: every object the CLI can write with `corpus`.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "builders.hpp"
#include "covers.hpp"
#include "io.hpp"

namespace l2s {

inline FpGroup trefoil_group() { return FpGroup{2, {Word{1, 2, 1, -2, -1, -2}}}; }

/// Monodromies on the once-punctured torus, generators a = 1, b = 2, c = 3.
inline MonodromySpec trefoil_monodromy() { return {{Word{-2}, Word{2, 1}}}; }
inline MonodromySpec figure_eight_monodromy() { return {{Word{1, 2}, Word{2, 1, 2}}}; }

/// Solid torus D^2 x S^1 with its whole boundary as gamma.
inline SuturedComplex solid_torus() {
  SuturedComplex sc{product(surface({0, 1}), circle()), {}, {}};
  sc.flags = {true, false, true, true};
  return sc;
}

inline SuturedComplex knot_exterior(const MonodromySpec& m) {
  SuturedComplex sc{mapping_torus({1, 1}, m).complex, {true, true, true, true}, {}};
  return sc;
}

namespace detail {
inline void add_cocycles(Document& doc, std::size_t count) {
  const auto cs = primitive_cocycles(doc.complex.group, count);
  for (std::size_t i = 0; i < cs.size(); ++i) doc.cocycles.emplace("phi" + std::to_string(i), cs[i]);
}

inline void add_cyclic_quotient(Document& doc, std::size_t k) {
  if (auto it = doc.cocycles.find("phi0"); it != doc.cocycles.end())
    doc.quotients.emplace("cyclic" + std::to_string(k), cyclic_quotient(it->second, k));
}

inline Document plain(const EquivariantComplex& x, const Cocycle& phi) {
  Document d;
  d.complex = x;
  d.cocycles.emplace("phi0", phi);
  return d;
}
}  // namespace detail

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{
      "circle",          "torus",          "surface_g2",           "trefoil",
      "product_torus",   "product_g2",     "product_sigma11",      "solid_torus",
      "trefoil_exterior", "figure_eight_exterior", "surface_g2_x_circle", "double_product_torus",
      "double_product_sigma11"};
  return names;
}

inline Document corpus_object(const std::string& name) {
  Document d;
  if (name == "circle") {
    d = detail::plain(circle(), make_cocycle({1}));
  } else if (name == "torus") {
    d = detail::plain(surface({1, 0}), make_cocycle({1, 0}));
  } else if (name == "surface_g2") {
    d = detail::plain(surface({2, 0}), make_cocycle({1, 0, 0, 0}));
  } else if (name == "trefoil") {
    d = detail::plain(fox_complex(trefoil_group()), make_cocycle({1, 1}));
  } else if (name == "product_torus") {
    d = make_document(product_with_interval(SurfaceSpec{1, 0}));
    detail::add_cocycles(d, 3);
  } else if (name == "product_g2") {
    d = make_document(product_with_interval(SurfaceSpec{2, 0}));
    detail::add_cocycles(d, 3);
  } else if (name == "product_sigma11") {
    d = make_document(product_with_interval(SurfaceSpec{1, 1}));
    detail::add_cocycles(d, 3);
  } else if (name == "solid_torus") {
    d = make_document(solid_torus());
    detail::add_cocycles(d, 1);
  } else if (name == "trefoil_exterior" || name == "figure_eight_exterior") {
    const auto m = name == "trefoil_exterior" ? trefoil_monodromy() : figure_eight_monodromy();
    const MappingTorus mt = mapping_torus({1, 1}, m);
    d = make_document({mt.complex, {true, true, true, true}, {}});
    d.cocycles.emplace("phi0", mt.phi);
  } else if (name == "surface_g2_x_circle") {
    const SurfaceSpec s{2, 0};
    const MappingTorus mt = mapping_torus(s, identity_monodromy(s));
    d = detail::plain(mt.complex, mt.phi);
  } else if (name == "double_product_torus") {
    d = make_document(double_complex(product_with_interval(SurfaceSpec{1, 0})));
    detail::add_cocycles(d, 2);
  } else if (name == "double_product_sigma11") {
    d = make_document(double_complex(product_with_interval(SurfaceSpec{1, 1})));
    detail::add_cocycles(d, 2);
  } else {
    throw ValidationError("unknown corpus object '" + name + "'");
  }
  detail::add_cyclic_quotient(d, 4);
  return d;
}

inline std::map<std::string, Document> corpus() {
  std::map<std::string, Document> out;
  for (const auto& n : corpus_names()) out.emplace(n, corpus_object(n));
  return out;
}

}  // namespace l2s
