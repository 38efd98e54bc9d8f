/**
 * JSON file format for complexes and their attached data.
 *
 *   group          {generators, relators}            words are arrays of signed ints
 *   complex        {cell_counts, boundaries}         boundaries[k] is d_{k+1}
 *   labels         per degree, "none" | "rplus" | "rminus" | "gamma"
 *   cocycles       optional, name -> {values, primitive}
 *   quotients      optional, name -> {degree, perms}  perms are 1-based images
 *   flags          optional, declared sutured hypotheses
 *   identification optional, per degree [[rplus cell, rminus cell], ...]
 *   certificate    optional, [{A, B}] integer matrices per degree
 *
 * Integers (coefficients, cocycle values, matrix entries) are decimal
 * strings. Keys are written sorted with two-space indentation, so saving a
 * loaded document reproduces the file byte for byte.
 */
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chain.hpp"
#include "core.hpp"
#include "specialize.hpp"
#include "sutured.hpp"

namespace l2s {

struct Document {
  EquivariantComplex complex;
  std::optional<SuturedFlags> flags;
  Identification identification;
  std::map<std::string, Cocycle> cocycles;
  std::map<std::string, FiniteQuotient> quotients;
  std::vector<std::pair<Matrix<Integer>, Matrix<Integer>>> certificate;

  SuturedComplex sutured() const { return {complex, flags.value_or(SuturedFlags{}), identification}; }

  const Cocycle& cocycle(const std::string& name) const {
    auto it = cocycles.find(name);
    if (it == cocycles.end()) throw ValidationError("no cocycle named '" + name + "'");
    return it->second;
  }
  const FiniteQuotient& quotient(const std::string& name) const {
    auto it = quotients.find(name);
    if (it == quotients.end()) throw ValidationError("no quotient named '" + name + "'");
    return it->second;
  }

  bool operator==(const Document&) const = default;
};

inline Document make_document(const SuturedComplex& sc) {
  Document d;
  d.complex = sc.space;
  d.flags = sc.flags;
  d.identification = sc.identification;
  return d;
}

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  return *it;
}

inline const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array");
  return j;
}

inline long as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
  return j.get<long>();
}

inline std::size_t as_size(const json& j, const std::string& path) {
  const long v = as_int(j, path);
  if (v < 0) throw ValidationError(path + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline Integer as_bigint(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path + ": expected an integer as a decimal string");
  try {
    return parse_integer(j.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline Word as_word(const json& j, const std::string& path) {
  array_at(j, path);
  std::vector<int> letters;
  for (std::size_t i = 0; i < j.size(); ++i)
    letters.push_back(static_cast<int>(as_int(j[i], path + "[" + std::to_string(i) + "]")));
  return Word(std::move(letters));
}

inline json word_json(const Word& w) { return json(w.letters); }

inline json matrix_json(const Matrix<Integer>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix<Integer> as_matrix(const json& j, const std::string& path) {
  array_at(j, path);
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    array_at(j[i], rp);
    std::vector<Integer> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(as_bigint(j[i][k], rp + "[" + std::to_string(k) + "]"));
    if (!rows.empty() && row.size() != rows.front().size()) throw ValidationError(rp + ": ragged matrix row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  return Matrix<Integer>::from_rows(rows);
}

}  // namespace detail

inline nlohmann::json to_json(const Document& doc) {
  using nlohmann::json;
  const auto& x = doc.complex;
  json j;
  json rel = json::array();
  for (const auto& r : x.group.relators) rel.push_back(detail::word_json(r));
  j["group"] = {{"generators", x.group.generator_count}, {"relators", rel}};

  json bds = json::array();
  for (std::size_t d = 1; d <= x.top_degree(); ++d) {
    const auto& m = x.boundaries[d - 1];
    json entries = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c).is_zero()) continue;
        json terms = json::array();
        for (const auto& t : m(r, c).terms()) terms.push_back(json::array({t.coefficient.get_str(), detail::word_json(t.word)}));
        entries.push_back({{"row", r}, {"col", c}, {"terms", terms}});
      }
    bds.push_back({{"degree", d}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}});
  }
  j["complex"] = {{"cell_counts", x.cell_counts}, {"boundaries", bds}};

  json labels = json::array();
  for (const auto& l : x.labels) {
    json row = json::array();
    for (auto v : l) row.push_back(label_name(v));
    labels.push_back(std::move(row));
  }
  j["labels"] = labels;

  if (!doc.cocycles.empty()) {
    json cs = json::object();
    for (const auto& [name, c] : doc.cocycles) {
      json vals = json::array();
      for (const auto& v : c.values) vals.push_back(v.get_str());
      cs[name] = {{"values", vals}, {"primitive", c.primitive}};
    }
    j["cocycles"] = cs;
  }
  if (!doc.quotients.empty()) {
    json qs = json::object();
    for (const auto& [name, q] : doc.quotients) {
      json perms = json::array();
      for (const auto& p : q.perms) {
        json row = json::array();
        for (auto v : p) row.push_back(v + 1);
        perms.push_back(std::move(row));
      }
      qs[name] = {{"degree", q.degree}, {"perms", perms}};
    }
    j["quotients"] = qs;
  }
  if (doc.flags) {
    const auto& f = *doc.flags;
    j["flags"] = {{"irreducible", f.irreducible},
                  {"gamma_incompressible", f.gamma_incompressible},
                  {"rminus_incompressible", f.rminus_incompressible},
                  {"infinite_pi1", f.infinite_pi1}};
  }
  if (!doc.identification.empty()) {
    json id = json::array();
    for (const auto& pairs : doc.identification) {
      json row = json::array();
      for (const auto& [p, m] : pairs) row.push_back(json::array({p, m}));
      id.push_back(std::move(row));
    }
    j["identification"] = id;
  }
  if (!doc.certificate.empty()) {
    json cert = json::array();
    for (const auto& [a, b] : doc.certificate) cert.push_back({{"A", detail::matrix_json(a)}, {"B", detail::matrix_json(b)}});
    j["certificate"] = cert;
  }
  return j;
}

/// Parses and validates a document: shapes, group, labels, and every attached
/// cocycle and quotient against the group.
inline Document from_json(const nlohmann::json& j) {
  using detail::field;
  Document doc;
  auto& x = doc.complex;

  const auto& g = field(j, "group", "");
  x.group.generator_count = static_cast<int>(detail::as_size(field(g, "generators", "group"), "group.generators"));
  const auto& rel = detail::array_at(field(g, "relators", "group"), "group.relators");
  for (std::size_t i = 0; i < rel.size(); ++i)
    x.group.relators.push_back(detail::as_word(rel[i], "group.relators[" + std::to_string(i) + "]"));
  x.group.validate();

  const auto& cx = field(j, "complex", "");
  const auto& counts = detail::array_at(field(cx, "cell_counts", "complex"), "complex.cell_counts");
  for (std::size_t i = 0; i < counts.size(); ++i)
    x.cell_counts.push_back(detail::as_size(counts[i], "complex.cell_counts[" + std::to_string(i) + "]"));
  if (x.cell_counts.empty()) throw ValidationError("complex.cell_counts: must list at least degree 0");
  const auto& bds = detail::array_at(field(cx, "boundaries", "complex"), "complex.boundaries");
  for (std::size_t k = 0; k < bds.size(); ++k) {
    const std::string path = "complex.boundaries[" + std::to_string(k) + "]";
    const auto& b = bds[k];
    const std::size_t degree = detail::as_size(field(b, "degree", path), path + ".degree");
    if (degree != k + 1) throw ValidationError(path + ".degree: expected " + std::to_string(k + 1));
    GroupRingMatrix m(detail::as_size(field(b, "rows", path), path + ".rows"),
                      detail::as_size(field(b, "cols", path), path + ".cols"));
    const auto& entries = detail::array_at(field(b, "entries", path), path + ".entries");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const std::string ep = path + ".entries[" + std::to_string(e) + "]";
      const std::size_t r = detail::as_size(field(entries[e], "row", ep), ep + ".row");
      const std::size_t c = detail::as_size(field(entries[e], "col", ep), ep + ".col");
      if (r >= m.rows() || c >= m.cols()) throw ValidationError(ep + ": position out of range");
      const auto& terms = detail::array_at(field(entries[e], "terms", ep), ep + ".terms");
      std::vector<Term> ts;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = ep + ".terms[" + std::to_string(t) + "]";
        if (!terms[t].is_array() || terms[t].size() != 2) throw ValidationError(tp + ": expected [coefficient, word]");
        Word w = detail::as_word(terms[t][1], tp + "[1]");
        try {
          free_reduce(w, x.group.generator_count);
        } catch (const ValidationError& err) {
          throw ValidationError(tp + "[1]: " + err.what());
        }
        ts.push_back({detail::as_bigint(terms[t][0], tp + "[0]"), std::move(w)});
      }
      m(r, c) += GroupRingElement::from_terms(std::move(ts));
    }
    x.boundaries.push_back(std::move(m));
  }

  const auto& labels = detail::array_at(field(j, "labels", ""), "labels");
  for (std::size_t d = 0; d < labels.size(); ++d) {
    const std::string path = "labels[" + std::to_string(d) + "]";
    detail::array_at(labels[d], path);
    std::vector<CellLabel> row;
    for (std::size_t i = 0; i < labels[d].size(); ++i) {
      if (!labels[d][i].is_string()) throw ValidationError(path + "[" + std::to_string(i) + "]: expected a string");
      try {
        row.push_back(parse_label(labels[d][i].get<std::string>()));
      } catch (const ValidationError& err) {
        throw ValidationError(path + "[" + std::to_string(i) + "]: " + err.what());
      }
    }
    x.labels.push_back(std::move(row));
  }
  x.check_shape();

  if (auto it = j.find("cocycles"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("cocycles: expected an object");
    for (const auto& [name, c] : it->items()) {
      const std::string path = "cocycles." + name;
      Cocycle phi;
      const auto& vals = detail::array_at(field(c, "values", path), path + ".values");
      for (std::size_t i = 0; i < vals.size(); ++i)
        phi.values.push_back(detail::as_bigint(vals[i], path + ".values[" + std::to_string(i) + "]"));
      const auto& prim = field(c, "primitive", path);
      if (!prim.is_boolean()) throw ValidationError(path + ".primitive: expected a boolean");
      phi.primitive = prim.get<bool>();
      const Diagnostics d = validate_cocycle(x.group, phi);
      if (!d.ok) throw ValidationError(path + ": " + d.messages.front());
      doc.cocycles.emplace(name, std::move(phi));
    }
  }
  if (auto it = j.find("quotients"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("quotients: expected an object");
    for (const auto& [name, qj] : it->items()) {
      const std::string path = "quotients." + name;
      FiniteQuotient q;
      q.degree = detail::as_size(field(qj, "degree", path), path + ".degree");
      const auto& perms = detail::array_at(field(qj, "perms", path), path + ".perms");
      for (std::size_t g = 0; g < perms.size(); ++g) {
        const std::string pp = path + ".perms[" + std::to_string(g) + "]";
        detail::array_at(perms[g], pp);
        std::vector<std::size_t> p;
        for (std::size_t i = 0; i < perms[g].size(); ++i) {
          const std::size_t v = detail::as_size(perms[g][i], pp + "[" + std::to_string(i) + "]");
          if (v == 0) throw ValidationError(pp + "[" + std::to_string(i) + "]: points are numbered from 1");
          p.push_back(v - 1);
        }
        q.perms.push_back(std::move(p));
      }
      const Diagnostics d = validate_quotient(x.group, q);
      if (!d.ok) throw ValidationError(path + ": " + d.messages.front());
      doc.quotients.emplace(name, std::move(q));
    }
  }
  if (auto it = j.find("flags"); it != j.end()) {
    SuturedFlags f;
    auto flag = [&](const char* key) {
      const auto& v = field(*it, key, "flags");
      if (!v.is_boolean()) throw ValidationError(std::string("flags.") + key + ": expected a boolean");
      return v.get<bool>();
    };
    f.irreducible = flag("irreducible");
    f.gamma_incompressible = flag("gamma_incompressible");
    f.rminus_incompressible = flag("rminus_incompressible");
    f.infinite_pi1 = flag("infinite_pi1");
    doc.flags = f;
  }
  if (auto it = j.find("identification"); it != j.end()) {
    detail::array_at(*it, "identification");
    for (std::size_t d = 0; d < it->size(); ++d) {
      const std::string path = "identification[" + std::to_string(d) + "]";
      detail::array_at((*it)[d], path);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t k = 0; k < (*it)[d].size(); ++k) {
        const auto& pr = (*it)[d][k];
        const std::string kp = path + "[" + std::to_string(k) + "]";
        if (!pr.is_array() || pr.size() != 2) throw ValidationError(kp + ": expected [rplus cell, rminus cell]");
        pairs.emplace_back(detail::as_size(pr[0], kp + "[0]"), detail::as_size(pr[1], kp + "[1]"));
      }
      doc.identification.push_back(std::move(pairs));
    }
  }
  if (auto it = j.find("certificate"); it != j.end()) {
    detail::array_at(*it, "certificate");
    for (std::size_t d = 0; d < it->size(); ++d) {
      const std::string path = "certificate[" + std::to_string(d) + "]";
      Matrix<Integer> a = detail::as_matrix(field((*it)[d], "A", path), path + ".A");
      Matrix<Integer> b = detail::as_matrix(field((*it)[d], "B", path), path + ".B");
      if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ValidationError(path + ": A and B must be square of equal size");
      doc.certificate.emplace_back(std::move(a), std::move(b));
    }
  }
  return doc;
}

inline std::string serialize(const Document& doc) { return to_json(doc).dump(2) + "\n"; }

inline Document parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed document: ") + e.what());
  }
  return from_json(j);
}

inline Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void save_document(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize(doc);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace l2s
