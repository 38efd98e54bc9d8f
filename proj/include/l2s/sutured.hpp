/**
 * Sutured manifold data (M, R+, R-, gamma) on top of an equivariant 3-complex,
 * and the rank checks built from it.
 *
 * Labels live on the complex: R+ and R- cells form closed subcomplexes,
 * gamma cells are the open annuli or tori whose frontier lies in R+ u R-.
 * Irreducibility and incompressibility cannot be read off chain data, so they
 * are carried as declared flags and only echoed.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "core.hpp"
#include "covers.hpp"
#include "laurent.hpp"
#include "linalg.hpp"
#include "specialize.hpp"

namespace l2s {

struct SuturedFlags {
  bool irreducible = false;
  bool gamma_incompressible = false;
  bool rminus_incompressible = false;
  bool infinite_pi1 = false;

  bool all() const { return irreducible && gamma_incompressible && rminus_incompressible && infinite_pi1; }
  bool operator==(const SuturedFlags&) const = default;
};

/// Pairs (R+ cell, R- cell) per degree identifying the two copies of the
/// surface for tower building. Empty means "match in index order".
using Identification = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;

struct SuturedComplex {
  EquivariantComplex space;
  SuturedFlags flags;
  Identification identification;

  CellSet rplus() const { return cells_with(space, {CellLabel::RPlus}); }
  CellSet rminus() const { return cells_with(space, {CellLabel::RMinus}); }
  CellSet gamma() const { return cells_with(space, {CellLabel::Gamma}); }
  CellSet boundary() const { return labeled_cells(space); }

  bool operator==(const SuturedComplex&) const = default;
};

/// Sum over connected components of max(-chi, 0).
inline long complexity(const EquivariantComplex& x, const CellSet& cells) {
  long total = 0;
  for (const auto& comp : components(x, cells)) total += std::max(-euler_char(comp), 0L);
  return total;
}

/// The R+/R- identification, explicit or by index order; throws if the two
/// sides have different cell counts.
inline Identification resolved_identification(const SuturedComplex& sc) {
  if (!sc.identification.empty()) return sc.identification;
  const CellSet plus = sc.rplus(), minus = sc.rminus();
  Identification id;
  for (std::size_t d = 0; d <= sc.space.top_degree(); ++d) {
    const auto p = plus.indices(d), m = minus.indices(d);
    if (p.size() != m.size())
      throw ValidationError("R+ and R- differ in degree " + std::to_string(d) + ": " + std::to_string(p.size()) +
                            " vs " + std::to_string(m.size()) + " cells");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < p.size(); ++i) pairs.emplace_back(p[i], m[i]);
    id.push_back(std::move(pairs));
  }
  return id;
}

/// Combinatorial sutured-manifold checks. Orientation conditions are out of
/// reach at the chain level; only their Euler-characteristic shadows are tested.
inline Diagnostics validate_sutured(const SuturedComplex& sc) {
  Diagnostics diag;
  const auto& x = sc.space;
  try {
    x.check_shape();
    x.group.validate();
  } catch (const ValidationError& e) {
    diag.fail(e.what());
    return diag;
  }
  if (x.top_degree() != 3) diag.fail("sutured complex must have top degree 3, has " + std::to_string(x.top_degree()));
  diag.merge(validate_complex(x, Augmentation{}), "augmentation: ");

  const CellSet plus = sc.rplus(), minus = sc.rminus(), gamma = sc.gamma(), bd = sc.boundary();
  for (const auto& [name, set] : {std::pair<const char*, const CellSet*>{"R+", &plus}, {"R-", &minus}}) {
    const Diagnostics d = check_subcomplex(x, *set);
    if (!d.ok) diag.fail(std::string(name) + " is not a subcomplex: " + d.messages.front());
  }
  const Diagnostics db = check_subcomplex(x, bd);
  if (!db.ok) diag.fail("labeled boundary is not closed (gamma frontier must lie in R+ u R-): " + db.messages.front());
  if (bd.count(3) > 0) diag.fail("3-cells cannot carry boundary labels");

  const auto comps = components(x, gamma);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const long chi = euler_char(comps[i]);
    if (chi != 0)
      diag.fail("gamma component " + std::to_string(i) + " has Euler characteristic " + std::to_string(chi) +
                ", expected 0 (annulus or torus)");
  }
  const long chi_sum = euler_char(plus) + euler_char(gamma) + euler_char(minus);
  if (chi_sum != euler_char(bd))
    diag.fail("chi(R+) + chi(gamma) + chi(R-) = " + std::to_string(chi_sum) + " but chi(boundary) = " +
              std::to_string(euler_char(bd)));
  if (2 * euler_char(x) != euler_char(bd))
    diag.fail("2 chi(M) = " + std::to_string(2 * euler_char(x)) + " differs from chi(boundary) = " +
              std::to_string(euler_char(bd)) + "; not a 3-manifold complex");
  if (!sc.identification.empty()) {
    if (sc.identification.size() != x.cell_counts.size()) diag.fail("identification does not cover every degree");
    for (std::size_t d = 0; d < sc.identification.size() && d < x.cell_counts.size(); ++d)
      for (const auto& [p, m] : sc.identification[d])
        if (!plus.contains(d, p) || !minus.contains(d, m))
          diag.fail("identification pair (" + std::to_string(p) + ", " + std::to_string(m) + ") in degree " +
                    std::to_string(d) + " is not an R+/R- pair");
  }
  return diag;
}

inline void require_sutured(const SuturedComplex& sc) {
  const Diagnostics d = validate_sutured(sc);
  if (!d.ok) throw ValidationError("invalid sutured complex: " + d.messages.front());
}

struct BalanceReport {
  bool balanced = false;
  long chi_rplus = 0;
  long chi_rminus = 0;
  long chi_pair = 0;  ///< chi(M, R-)
};

inline BalanceReport is_balanced(const SuturedComplex& sc) {
  BalanceReport r;
  r.chi_rplus = euler_char(sc.rplus());
  r.chi_rminus = euler_char(sc.rminus());
  r.chi_pair = euler_char(sc.space) - r.chi_rminus;
  r.balanced = r.chi_rplus == r.chi_rminus;
  return r;
}

enum class Side { Minus, Plus };

inline BettiVector pair_betti(const SuturedComplex& sc, Side side, const Specialization& s) {
  const CellSet a = side == Side::Minus ? sc.rminus() : sc.rplus();
  return betti(relative(sc.space, a), s);
}

struct WeakIsoReport {
  std::size_t b1_rminus = 0;   ///< b_1(R-) under phi
  std::size_t image_rank = 0;  ///< rank of H_1(R-) -> H_1(M)
  bool injective = false;
  BettiVector pair;            ///< b(M, R-) under phi
  bool consistent = false;     ///< injective iff pair b_1 == 0
};

inline WeakIsoReport weak_iso_check(const SuturedComplex& sc, const Cocycle& phi) {
  require_sutured(sc);
  if (!is_balanced(sc).balanced) throw ValidationError("weak isomorphism check needs a balanced sutured complex");
  detail::require_valid(sc.space.group, phi);
  WeakIsoReport r;
  const CellSet minus = sc.rminus();
  if (!minus.empty()) {
    r.b1_rminus = static_cast<std::size_t>(betti(subcomplex(sc.space, minus), phi)[1]);
    r.image_rank = inclusion_rank(sc.space, minus, 1, phi);
  }
  r.injective = r.image_rank == r.b1_rminus;
  r.pair = betti(relative(sc.space, minus), phi);
  r.consistent = r.injective == (r.pair[1] == 0);
  return r;
}

struct CertificateResult {
  std::vector<LaurentPolynomial> determinants;  ///< det(A - tB) per degree
  bool certified = false;
};

/// det(A - tB) for each degree's pair; certified iff every one is nonzero.
inline CertificateResult product_certificate(const std::vector<std::pair<Matrix<Integer>, Matrix<Integer>>>& pairs) {
  CertificateResult r;
  r.certified = !pairs.empty();
  for (std::size_t d = 0; d < pairs.size(); ++d) {
    const auto& [a, b] = pairs[d];
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
      throw ValidationError("certificate pair " + std::to_string(d) + " is not two square matrices of equal size");
    LaurentMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        m(i, j) = LaurentPolynomial(0, {Rational(a(i, j)), Rational(-b(i, j))});
    r.determinants.push_back(det_laurent(std::move(m)));
    if (r.determinants.back().is_zero()) r.certified = false;
  }
  return r;
}

struct HalfLivesReport {
  std::int64_t b1_boundary = 0;
  std::int64_t kernel = 0;
  bool holds = false;
};

/// dim ker(H_1(dW) -> H_1(W)) against b_1(dW)/2, with dW the labeled boundary.
inline HalfLivesReport half_lives_half_dies(const EquivariantComplex& w, const Specialization& s) {
  const CellSet bd = labeled_cells(w);
  const Diagnostics d = check_subcomplex(w, bd);
  if (!d.ok) throw ValidationError("labeled boundary is not a subcomplex: " + d.messages.front());
  HalfLivesReport r;
  r.b1_boundary = betti(subcomplex(w, bd), s)[1];
  r.kernel = r.b1_boundary - static_cast<std::int64_t>(inclusion_rank(w, bd, 1, s));
  r.holds = 2 * r.kernel == r.b1_boundary;
  return r;
}

struct DualityReport {
  BettiVector rminus_gamma;  ///< b(M, R- u gamma)
  BettiVector rplus;         ///< b(M, R+)
  BettiVector rplus_gamma;   ///< b(M, R+ u gamma)
  BettiVector rminus;        ///< b(M, R-)
  bool holds = false;
};

/// b_i(M, R- u gamma) = b_{3-i}(M, R+) and the same with the sides swapped.
inline DualityReport duality_check(const SuturedComplex& sc, const Specialization& s) {
  require_sutured(sc);
  const auto& x = sc.space;
  DualityReport r;
  CellSet mg = sc.rminus();
  mg |= sc.gamma();
  CellSet pg = sc.rplus();
  pg |= sc.gamma();
  r.rminus_gamma = betti(relative(x, closure(x, mg)), s);
  r.rplus = betti(relative(x, sc.rplus()), s);
  r.rplus_gamma = betti(relative(x, closure(x, pg)), s);
  r.rminus = betti(relative(x, sc.rminus()), s);
  r.holds = true;
  for (std::size_t i = 0; i <= 3; ++i)
    if (r.rminus_gamma[i] != r.rplus[3 - i] || r.rplus_gamma[i] != r.rminus[3 - i]) r.holds = false;
  return r;
}

struct TautReport {
  std::string verdict;
  Cocycle phi;
  SuturedFlags flags;
  BettiVector twisted_pair;
  std::vector<std::size_t> ks;
  std::vector<BettiVector> approx_pair;  ///< b(M, R-) on the k-fold cyclic cover
  std::optional<CertificateResult> certificate;
  bool contradiction = false;
};

inline const char* kCertified = "certified vanishing for phi";
inline const char* kConsistent = "consistent with taut";
inline const char* kObstructed = "obstructed";

/// Aggregates the twisted pair Betti numbers, the cyclic approximation of the
/// pair, and an optional product certificate into one verdict. The verdict is
/// a statement about the Q(t)-specialization along phi only.
inline TautReport taut_certify(const SuturedComplex& sc, const Cocycle& phi, const std::vector<std::size_t>& ks,
                               const std::vector<std::pair<Matrix<Integer>, Matrix<Integer>>>& certificate = {}) {
  require_sutured(sc);
  if (!is_balanced(sc).balanced) throw ValidationError("taut certification needs a balanced sutured complex");
  if (!sc.flags.all()) {
    std::string missing;
    if (!sc.flags.irreducible) missing += " irreducible";
    if (!sc.flags.gamma_incompressible) missing += " gamma_incompressible";
    if (!sc.flags.rminus_incompressible) missing += " rminus_incompressible";
    if (!sc.flags.infinite_pi1) missing += " infinite_pi1";
    throw ValidationError("declared hypotheses not satisfied:" + missing);
  }
  const Diagnostics d = validate_cocycle(sc.space.group, phi);
  if (!d.ok) throw ValidationError("invalid cocycle: " + d.messages.front());
  if (phi.is_zero()) throw ValidationError("taut certification needs a nonzero cocycle");

  TautReport r;
  r.phi = phi;
  r.flags = sc.flags;
  r.ks = ks;
  const EquivariantComplex pair = relative(sc.space, sc.rminus());
  r.twisted_pair = twisted_betti(pair, phi);
  if (!ks.empty()) {
    const ApproxSequence seq = approximate(pair, cyclic_schedule(phi, ks));
    for (const auto& item : seq.items) r.approx_pair.push_back(item.betti);
  }
  if (!certificate.empty()) r.certificate = product_certificate(certificate);

  if (r.twisted_pair.all_zero()) {
    r.verdict = kCertified;
  } else if (r.certificate && r.certificate->certified) {
    r.verdict = kObstructed;
    r.contradiction = true;
  } else {
    r.verdict = kConsistent;
  }
  return r;
}

/// b2 - (chi(S) - chi(R+)) / 2; nonnegative whenever the inequality holds.
inline Rational norm_gap(const Rational& b2, long chi_s, long chi_rplus) {
  return b2 - ratio(chi_s - chi_rplus, 2);
}

}  // namespace l2s
