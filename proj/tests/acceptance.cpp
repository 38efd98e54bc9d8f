// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace l2s;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

std::vector<long> as_longs(const Cocycle& c) {
  std::vector<long> v;
  for (const auto& x : c.values) v.push_back(x.get_si());
  return v;
}

Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = surface({2, 0});
  const Cocycle phi = make_cocycle({1, 0, 0, 0});
  const auto& ks = default_cyclic_degrees();
  const auto seq = approximate(s, cyclic_schedule(phi, ks));
  for (const auto& item : seq.items) {
    const Rational want = 2 + ratio(2, static_cast<unsigned long>(item.degree));
    c.expect(item.betti.normalized(1) == want, "b1 at k=" + std::to_string(item.degree));
    if (item.degree <= 8)
      c.expect(item.betti.unnormalized == oracle::cyclic_betti(s, as_longs(phi), static_cast<long>(item.degree)),
               "brute-force rank at k=" + std::to_string(item.degree));
  }
  c.expect(seq.limit_estimate.at(1).limit == 2, "limit estimate");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 30.0, "runtime");
  c.note << "k=1..64 normalized b1 = 2+2/k, limit " << to_string(seq.limit_estimate.at(1).limit) << ", " << secs
         << " s";
  return c;
}

Check criterion2() {
  Check c;
  std::size_t count = 0;
  for (const auto& [name, doc] : corpus()) {
    const long chi = euler_char(doc.complex);
    const Cocycle& phi = doc.cocycle("phi0");
    const auto seq = approximate(doc.complex, cyclic_schedule(phi, default_cyclic_degrees()));
    for (const auto& item : seq.items) {
      c.expect(item.betti.euler() == static_cast<long>(item.degree) * chi, name + " k=" + std::to_string(item.degree));
      ++count;
    }
  }
  c.note << count << " schedule items over " << corpus_names().size() << " corpus complexes";
  return c;
}

Check criterion3() {
  Check c;
  const std::vector<std::pair<EquivariantComplex, Cocycle>> cases{
      {circle(), make_cocycle({1})},
      {surface({1, 0}), make_cocycle({1, 0})},
      {surface({2, 0}), make_cocycle({1, 0, 0, 0})},
      {fox_complex(trefoil_group()), make_cocycle({1, 1})},
  };
  const auto& ks = default_cyclic_degrees();
  Rational worst = 0;
  for (const auto& [x, phi] : cases) {
    const auto cmp = compare_with_twisted(x, phi, ks);
    c.expect(cmp.within_bound, "gap bound");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      for (const auto& g : cmp.gaps[i]) worst = std::max(worst, Rational(g * static_cast<unsigned long>(ks[i])));
      if (ks[i] <= 8)
        c.expect(cmp.sequence.items[i].betti.unnormalized ==
                     oracle::cyclic_betti(x, as_longs(phi), static_cast<long>(ks[i])),
                 "brute-force oracle");
    }
  }
  c.note << "max k*gap = " << to_string(worst) << " (bound 2)";
  return c;
}

Check criterion4() {
  Check c;
  for (const auto& spec : {SurfaceSpec{1, 0}, SurfaceSpec{2, 0}}) {
    const auto p = product_with_interval(spec);
    const auto cs = primitive_cocycles(p.space.group, 3);
    c.expect(cs.size() == 3, "three cocycles");
    for (const auto& phi : cs) {
      const auto r = taut_certify(p, phi, default_cyclic_degrees());
      c.expect(r.verdict == kCertified, "verdict");
      c.expect(r.twisted_pair.all_zero(), "twisted pair");
      for (const auto& b : r.approx_pair) c.expect(b[1] == 0, "approximate pair b1");
    }
  }
  c.note << "torus x I and genus-2 x I certified for 3 cocycles each";
  return c;
}

Check criterion5() {
  Check c;
  std::mt19937_64 rng(20240521);
  std::uniform_int_distribution<int> dim(1, 6);
  int accepted = 0;
  while (accepted < 100) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const auto a = oracle::random_dense(rng, n, n, -4, 4), b = oracle::random_dense(rng, n, n, -4, 4);
    const mpz_class det_a = oracle::cofactor_det(a);
    if (det_a == 0) continue;
    ++accepted;
    const auto r = product_certificate({{oracle::to_matrix(a), oracle::to_matrix(b)}});
    c.expect(r.certified && !r.determinants.front().is_zero(), "certified");
    c.expect(r.determinants.front().coeff(0) == Rational(det_a), "constant term");
  }
  const auto ones = Matrix<Integer>::from_rows({{1, 1}, {1, 1}});
  const auto s = product_certificate({{ones, ones}});
  c.expect(!s.certified, "all-ones not certified");
  c.note << accepted << " random pairs certified; all-ones not certified";
  return c;
}

Check criterion6() {
  Check c;
  const std::vector<std::pair<std::string, EquivariantComplex>> cases{
      {"solid torus", solid_torus().space},
      {"torus x I", product_with_interval(SurfaceSpec{1, 0}).space},
      {"genus-2 x I", product_with_interval(SurfaceSpec{2, 0}).space},
      {"trefoil exterior", knot_exterior(trefoil_monodromy()).space},
      {"figure-eight exterior", knot_exterior(figure_eight_monodromy()).space},
  };
  for (const auto& [name, w] : cases) {
    const auto r = half_lives_half_dies(w, Augmentation{});
    c.expect(r.holds, name);
    c.note << name << " " << r.kernel << "/" << r.b1_boundary << "; ";
  }
  return c;
}

Check criterion7() {
  Check c;
  std::size_t n = 0;
  for (const auto& [name, doc] : corpus()) {
    if (!doc.flags) continue;
    const auto sc = doc.sutured();
    c.expect(duality_check(sc, Augmentation{}).holds, name + " over Q");
    c.expect(duality_check(sc, doc.cocycle("phi0")).holds, name + " twisted");
    ++n;
  }
  c.note << n << " sutured complexes under Q and phi0";
  return c;
}

Check criterion8() {
  Check c;
  std::size_t n = 0;
  for (const auto& [name, doc] : corpus()) {
    if (!doc.flags) continue;
    const auto sc = doc.sutured();
    const auto bal = is_balanced(sc);
    if (!bal.balanced) continue;
    ++n;
    c.expect(bal.chi_pair == 0, name + " chi(M,R-)");
    const auto tw = twisted_betti(relative(sc.space, sc.rminus()), doc.cocycle("phi0"));
    c.expect(tw[1] == tw[2], name + " b1 = b2");
  }
  c.expect(n > 0, "balanced examples exist");
  c.note << n << " balanced examples";
  return c;
}

Check criterion9() {
  Check c;
  const auto m = product_with_interval(SurfaceSpec{1, 1});
  const long chi_minus = complexity(m.space, m.rplus());
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto t = tower(m, n);
    const auto xn = subcomplex(t.complex, t.stage(n));
    const auto b = betti(xn, Augmentation{});
    c.expect(b[1] == 2, "b1(X_" + std::to_string(n) + ")");
    c.expect(b[1] - b[0] == chi_minus && chi_minus == 1, "norm estimate at n=" + std::to_string(n));
    if (n >= 1) c.expect(betti(relative(xn, t.stage(n - 1)), Augmentation{}).all_zero(), "b(X_n, X_n-1)");
  }
  c.note << "b1(X_n) = 2 for n=0..4, b1 - b0 = " << chi_minus << " = chi_-(Sigma), relative stages acyclic";
  return c;
}

Check criterion10() {
  Check c;
  const std::vector<std::pair<EquivariantComplex, Cocycle>> cases{
      {circle(), make_cocycle({1})},
      {surface({2, 0}), make_cocycle({1, 0, 0, 0})},
  };
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 4}, {2, 4}, {2, 6}, {3, 6}, {4, 8}, {2, 8}};
  std::size_t n = 0;
  for (const auto& [x, phi] : cases)
    for (const auto& [k, k2] : pairs) {
      const auto r = check_multiplicativity(x, cyclic_quotient(phi, k), cyclic_quotient(phi, k2));
      c.expect(r.ok(), std::to_string(k) + "|" + std::to_string(k2));
      ++n;
    }
  c.note << n << " nested pairs agree both ways";
  return c;
}

Check criterion11() {
  Check c;
  for (const auto& [name, doc] : corpus()) {
    const std::string text = serialize(doc);
    const Document back = parse_document(text);
    c.expect(back == doc, name + " structural");
    c.expect(serialize(back) == text, name + " bytes");
  }
  c.note << corpus_names().size() << " corpus objects";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::function<Check()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                     criterion5, criterion6, criterion7, criterion8,
                                                     criterion9, criterion10, criterion11};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i]();
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    std::cout << "Criterion " << i + 1 << ": " << (c.ok ? "PASS" : "FAIL") << " - " << c.note.str() << std::endl;
    if (!c.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
