// Sutured checks, builders, the document format and the command line.
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "l2s/cli.hpp"
#include "oracles.hpp"

using namespace l2s;

namespace {

std::vector<std::int64_t> B(std::initializer_list<std::int64_t> v) { return v; }

const LaurentPolynomial T = LaurentPolynomial::t();

EquivariantComplex sphere() {
  return EquivariantComplex::make(free_group(0), {1, 0, 1}, {GroupRingMatrix(1, 0), GroupRingMatrix(0, 1)});
}

SuturedComplex closed(const EquivariantComplex& x) { return {x, {true, true, true, true}, {}}; }

Matrix<Integer> imat(std::vector<std::vector<Integer>> rows) { return Matrix<Integer>::from_rows(rows); }

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "l2s");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus_dir() {
  static const std::string dir = [] {
    const auto d = std::filesystem::temp_directory_path() / "l2s_cli_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    for (const auto& [name, doc] : corpus()) save_document(doc, (d / (name + ".cx")).string());
    return d.string();
  }();
  return dir;
}

}  // namespace

TEST_CASE("sutured validation", "[sutured]") {
  CHECK(validate_sutured(product_with_interval(SurfaceSpec{1, 0})).ok);
  CHECK(validate_sutured(product_with_interval(SurfaceSpec{1, 1})).ok);
  const auto dbl = double_complex(product_with_interval(SurfaceSpec{1, 0}));
  CHECK(dbl.rplus().empty());
  CHECK(dbl.rminus().empty());
  CHECK(validate_sutured(dbl).ok);

  auto g2 = product_with_interval(SurfaceSpec{2, 0});
  for (auto& l : g2.space.labels)
    for (auto& c : l)
      if (c == CellLabel::RPlus) c = CellLabel::Gamma;
  const auto d = validate_sutured(g2);
  CHECK_FALSE(d.ok);
  bool named = false;
  for (const auto& m : d.messages) named = named || m.find("Euler characteristic -2") != std::string::npos;
  CHECK(named);

  CHECK_FALSE(validate_sutured(closed(surface({1, 0}))).ok);
}

TEST_CASE("complexity", "[sutured]") {
  const auto t = surface({1, 0});
  CHECK(complexity(t, all_cells(t)) == 0);
  const auto g2 = surface({2, 0});
  CHECK(complexity(g2, all_cells(g2)) == 2);
  const auto u = disjoint_union(sphere(), surface({3, 0}));
  CHECK(complexity(u, all_cells(u)) == 4);
}

TEST_CASE("balance", "[sutured]") {
  const auto p = product_with_interval(SurfaceSpec{2, 0});
  const auto b = is_balanced(p);
  CHECK(b.balanced);
  CHECK(b.chi_pair == 0);
  CHECK(b.chi_rplus == -2);
  CHECK(b.chi_rminus == -2);
  CHECK(is_balanced(double_complex(product_with_interval(SurfaceSpec{1, 0}))).balanced);

  auto bad = product_with_interval(SurfaceSpec{1, 0});
  for (auto& c : bad.space.labels[2])
    if (c == CellLabel::RPlus) {
      c = CellLabel::Gamma;
      break;
    }
  CHECK_FALSE(is_balanced(bad).balanced);
  CHECK_THROWS_AS(taut_certify(bad, make_cocycle({1, 0}), {}), ValidationError);
}

TEST_CASE("pair Betti numbers and weak isomorphism", "[sutured]") {
  const auto p = product_with_interval(SurfaceSpec{1, 1});
  const Cocycle phi = make_cocycle({1, 0, 0});
  for (const Specialization& s : std::vector<Specialization>{Augmentation{}, phi, cyclic_quotient(phi, 3)}) {
    CHECK(pair_betti(p, Side::Minus, s).all_zero());
    CHECK(pair_betti(p, Side::Plus, s).all_zero());
  }
  const auto w = weak_iso_check(p, phi);
  CHECK(w.injective);
  CHECK(w.pair.all_zero());
  CHECK(w.consistent);

  const auto dbl = double_complex(product_with_interval(SurfaceSpec{1, 0}));
  const Cocycle c = primitive_cocycles(dbl.space.group, 1).front();
  const auto e = weak_iso_check(dbl, c);
  CHECK(e.b1_rminus == 0);
  CHECK(e.injective);
  CHECK(e.pair == twisted_betti(dbl.space, c));

  const auto ext = knot_exterior(trefoil_monodromy());
  const auto tw = weak_iso_check(ext, mapping_torus({1, 1}, trefoil_monodromy()).phi);
  CHECK(tw.consistent);
}

TEST_CASE("product certificate", "[sutured]") {
  const auto id = imat({{1, 0}, {0, 1}});
  const auto swap = imat({{0, 1}, {1, 0}});
  const auto ones = imat({{1, 1}, {1, 1}});
  auto r = product_certificate({{id, id}});
  CHECK(r.certified);
  CHECK(r.determinants.front() == (1 - T) * (1 - T));
  r = product_certificate({{id, swap}});
  CHECK(r.certified);
  CHECK(r.determinants.front() == 1 - T * T);
  r = product_certificate({{ones, ones}});
  CHECK_FALSE(r.certified);
  CHECK(r.determinants.front().is_zero());
  CHECK_FALSE(product_certificate({{id, id}, {ones, ones}}).certified);
  CHECK_THROWS_AS(product_certificate({{imat({{1, 0}}), imat({{1, 0}})}}), ValidationError);
}

TEST_CASE("certificate constant term is det(A)", "[sutured][property]") {
  std::mt19937_64 rng(23);
  int done = 0;
  while (done < 60) {
    const std::size_t n = static_cast<std::size_t>(done % 5 + 1);
    const auto a = oracle::random_dense(rng, n, n, -3, 3), b = oracle::random_dense(rng, n, n, -3, 3);
    const mpz_class det_a = oracle::cofactor_det(a);
    const auto r = product_certificate({{oracle::to_matrix(a), oracle::to_matrix(b)}});
    CHECK(r.determinants.front().coeff(0) == Rational(det_a));
    if (det_a != 0) {
      CHECK(r.certified);
      ++done;
    }
  }
}

TEST_CASE("half lives, half dies", "[sutured]") {
  const auto t = half_lives_half_dies(product_with_interval(SurfaceSpec{1, 0}).space, Augmentation{});
  CHECK(t.b1_boundary == 4);
  CHECK(t.kernel == 2);
  CHECK(t.holds);
  const auto s = half_lives_half_dies(solid_torus().space, Augmentation{});
  CHECK(s.b1_boundary == 2);
  CHECK(s.kernel == 1);
  const auto g = half_lives_half_dies(product_with_interval(SurfaceSpec{2, 0}).space, Augmentation{});
  CHECK(g.b1_boundary == 8);
  CHECK(g.kernel == 4);
}

TEST_CASE("duality", "[sutured]") {
  const auto p = product_with_interval(SurfaceSpec{1, 0});
  const auto q = duality_check(p, Augmentation{});
  CHECK(q.holds);
  CHECK(q.rplus.all_zero());
  const auto st = duality_check(solid_torus(), Augmentation{});
  CHECK(st.holds);
  CHECK(st.rminus.unnormalized == B({1, 1, 0, 0}));
  CHECK(st.rplus_gamma.unnormalized == B({0, 0, 1, 1}));
  const auto tw = duality_check(p, make_cocycle({1, 0}));
  CHECK(tw.holds);
  CHECK(tw.rminus_gamma.all_zero());
  CHECK(tw.rplus.all_zero());
}

TEST_CASE("taut verdicts", "[sutured]") {
  const auto p = product_with_interval(SurfaceSpec{2, 0});
  for (const auto& phi : primitive_cocycles(p.space.group, 3)) {
    const auto r = taut_certify(p, phi, {1, 2, 4});
    CHECK(r.verdict == kCertified);
    CHECK(r.twisted_pair.all_zero());
    for (const auto& b : r.approx_pair) CHECK(b[1] == 0);
  }

  // closed manifold with nonzero twisted homology along a surface class
  const SuturedComplex sxc = closed(mapping_torus({2, 0}, identity_monodromy({2, 0})).complex);
  REQUIRE(validate_sutured(sxc).ok);
  const Cocycle surf = make_cocycle({1, 0, 0, 0, 0});
  CHECK(taut_certify(sxc, surf, {}).verdict == kConsistent);
  const auto id = imat({{1}});
  const auto ob = taut_certify(sxc, surf, {}, {{id, id}});
  CHECK(ob.verdict == kObstructed);
  CHECK(ob.contradiction);

  auto broken = product_with_interval(SurfaceSpec{1, 0});
  for (std::size_t k = 0; k < broken.space.labels[2].size(); ++k)
    if (broken.space.labels[2][k] == CellLabel::None) {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < broken.space.cell_counts[2]; ++j)
        if (j != k) keep.push_back(j);
      // delete one interior 2-cell: its column in d_2 and its row in d_3
      std::vector<std::size_t> rows0(broken.space.cell_counts[1]), cols3(broken.space.cell_counts[3]);
      std::iota(rows0.begin(), rows0.end(), std::size_t{0});
      std::iota(cols3.begin(), cols3.end(), std::size_t{0});
      broken.space.boundaries[1] = broken.space.boundaries[1].submatrix(rows0, keep);
      broken.space.boundaries[2] = broken.space.boundaries[2].submatrix(keep, cols3);
      broken.space.cell_counts[2] -= 1;
      broken.space.labels[2].erase(broken.space.labels[2].begin() + static_cast<long>(k));
      break;
    }
  CHECK_FALSE(validate_sutured(broken).ok);
  CHECK_THROWS_AS(taut_certify(broken, make_cocycle({1, 0}), {}), ValidationError);
  CHECK_THROWS_AS(taut_certify(solid_torus(), make_cocycle({0, 0, 1}), {}), ValidationError);
  CHECK_THROWS_AS(taut_certify(product_with_interval(SurfaceSpec{0, 1}), make_cocycle({1}), {}), ValidationError);
}

TEST_CASE("norm gap", "[sutured]") {
  CHECK(norm_gap(0, -2, -2) == 0);
  CHECK(norm_gap(0, 0, 0) == 0);
  CHECK(norm_gap(0, -4, -2) == 1);
}

TEST_CASE("surfaces", "[builders]") {
  const auto t = surface({1, 0});
  CHECK(euler_char(t) == 0);
  CHECK(betti(t, Augmentation{}).unnormalized == B({1, 2, 1}));
  CHECK(betti(surface({2, 0}), Augmentation{}).unnormalized == B({1, 4, 1}));
  const auto disk = surface({0, 1});
  CHECK(euler_char(disk) == 1);
  CHECK(betti(disk, Augmentation{}).unnormalized == B({1, 0, 0}));
  CHECK(betti(surface({1, 2}), Augmentation{}).unnormalized == B({1, 3, 0}));
  CHECK_THROWS_AS(surface({0, 0}), ValidationError);
  for (int g = 0; g <= 2; ++g)
    for (int b = 0; b <= 2; ++b) {
      if (g == 0 && b == 0) continue;
      const SurfaceSpec s{g, b};
      CHECK(euler_char(surface(s)) == s.euler());
    }
}

TEST_CASE("products with an interval", "[builders]") {
  for (int g = 0; g <= 2; ++g)
    for (int b = 0; b <= 2; ++b) {
      if (g == 0 && b == 0) continue;
      const auto p = product_with_interval(SurfaceSpec{g, b});
      CHECK(validate_sutured(p).ok);
      CHECK(euler_char(p.space) == SurfaceSpec{g, b}.euler());
      CHECK(is_balanced(p).balanced);
      CHECK(duality_check(p, Augmentation{}).holds);
      CHECK(p.gamma().empty() == (b == 0));
    }
  CHECK_FALSE(product_with_interval(SurfaceSpec{0, 1}).flags.infinite_pi1);
  CHECK(product_with_interval(SurfaceSpec{1, 0}).flags.all());
}

TEST_CASE("mapping tori", "[builders]") {
  const auto t = mapping_torus({1, 0}, identity_monodromy({1, 0}));
  CHECK(euler_char(t.complex) == 0);
  CHECK(t.phi.values == std::vector<Integer>{0, 0, 1});
  CHECK(twisted_betti(t.complex, t.phi).all_zero());
  CHECK(betti(t.complex, Augmentation{}).unnormalized == B({1, 3, 3, 1}));

  const auto g = mapping_torus({2, 0}, identity_monodromy({2, 0}));
  CHECK(euler_char(g.complex) == 0);
  CHECK(twisted_betti(g.complex, make_cocycle({1, 0, 0, 0, 0})).unnormalized == B({0, 2, 2, 0}));

  for (const auto& m : {trefoil_monodromy(), figure_eight_monodromy()}) {
    const auto x = mapping_torus({1, 1}, m);
    CHECK(validate_complex(x.complex, x.phi).ok);
    CHECK(twisted_betti(x.complex, x.phi).all_zero());
    CHECK(betti(x.complex, Augmentation{}).unnormalized == B({1, 1, 0, 0}));
  }
  CHECK_THROWS_AS(mapping_torus({0, 1}, MonodromySpec{}), ValidationError);
  CHECK_THROWS_AS(mapping_torus({1, 0}, MonodromySpec{{Word{2}, Word{2}}}), ValidationError);
  CHECK_THROWS_AS(mapping_torus({1, 0}, MonodromySpec{{Word{1}}}), ValidationError);
}

TEST_CASE("doubles", "[builders]") {
  const auto p = product_with_interval(SurfaceSpec{1, 0});
  const auto d = double_complex(p);
  CHECK(euler_char(d.space) == 0);
  CHECK(betti(d.space, Augmentation{})[1] == 3);
  const auto q = product_with_interval(SurfaceSpec{1, 1});
  const auto dq = double_complex(q);
  CHECK(euler_char(dq.space) ==
        2 * euler_char(q.space) - euler_char(q.rplus()) - euler_char(q.rminus()));
  CHECK(validate_sutured(dq).ok);
  CHECK_FALSE(dq.gamma().empty());
  CHECK_THROWS_AS(double_complex(solid_torus()), ValidationError);
}

TEST_CASE("towers", "[builders]") {
  const auto m = product_with_interval(SurfaceSpec{1, 1});
  const auto t0 = tower(m, 0);
  CHECK(t0.complex.cell_counts == m.space.cell_counts);
  CHECK(betti(t0.complex, Augmentation{}) == betti(m.space, Augmentation{}));
  const long sigma = euler_char(m.rplus());
  const auto minus = pair_betti(m, Side::Minus, Augmentation{}), plus = pair_betti(m, Side::Plus, Augmentation{});
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto t = tower(m, n);
    const auto xn = subcomplex(t.complex, t.stage(n));
    CHECK(euler_char(xn) == static_cast<long>(2 * n + 1) * euler_char(m.space) - static_cast<long>(2 * n) * sigma);
    CHECK(betti(xn, Augmentation{})[1] == 2);
    const auto rel = betti(relative(xn, t.stage(n - 1)), Augmentation{});
    for (std::size_t p = 0; p <= 3; ++p) CHECK(rel[p] == minus[p] + plus[p]);
  }
}

TEST_CASE("gluing", "[builders]") {
  // two intervals glued end to end form an interval
  const auto i = interval();
  const auto g = glue({i, i}, {{0, 1, {{0, 1, 0}}}});
  CHECK(g.complex.cell_counts == std::vector<std::size_t>{3, 2});
  CHECK(betti(g.complex, Augmentation{}).unnormalized == B({1, 0}));
  CHECK(g.stable_letters.empty());
  // an interval glued to itself becomes a circle with a stable letter
  const auto c = glue({i}, {{0, 0, {{0, 1, 0}}}});
  CHECK(c.stable_letters.size() == 1);
  CHECK(betti(c.complex, Augmentation{}).unnormalized == B({1, 1}));
  CHECK(twisted_betti(c.complex, make_cocycle({1})).all_zero());
}

TEST_CASE("builder outputs validate", "[builders][property]") {
  for (const auto& [name, doc] : corpus()) {
    INFO(name);
    CHECK(validate_complex(doc.complex, Augmentation{}).ok);
    for (const auto& [cn, phi] : doc.cocycles) CHECK(validate_complex(doc.complex, phi).ok);
    for (const auto& [qn, q] : doc.quotients) CHECK(validate_complex(doc.complex, q).ok);
    if (doc.flags) {
      CHECK(validate_sutured(doc.sutured()).ok);
      CHECK(2 * euler_char(doc.complex) == euler_char(doc.sutured().boundary()));
    }
  }
}

TEST_CASE("primitive cocycles", "[builders]") {
  const auto g = product_with_interval(SurfaceSpec{2, 0}).space.group;
  const auto cs = primitive_cocycles(g, 3);
  REQUIRE(cs.size() == 3);
  for (const auto& c : cs) {
    CHECK(validate_cocycle(g, c).ok);
    CHECK(c.content() == 1);
  }
  CHECK(cs[0] != cs[1]);
  CHECK(cs[1] != cs[2]);
  CHECK(cs[0] != cs[2]);
}

TEST_CASE("document round trip", "[io]") {
  for (const auto& [name, doc] : corpus()) {
    INFO(name);
    const std::string text = serialize(doc);
    const Document back = parse_document(text);
    CHECK(back == doc);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("document rejection", "[io]") {
  const Document torus = corpus_object("torus");
  auto j = to_json(torus);
  j.erase("labels");
  try {
    from_json(j);
    FAIL("missing labels accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("labels") != std::string::npos);
  }
  auto k = to_json(torus);
  k["cocycles"]["phi0"]["values"] = nlohmann::json::array({"1", "0", "0"});
  CHECK_THROWS_AS(from_json(k), ValidationError);
  Document tref = corpus_object("trefoil");
  tref.cocycles["bad"] = make_cocycle({1, 2});
  CHECK_THROWS_AS(parse_document(serialize(tref)), ValidationError);
  CHECK_THROWS_AS(parse_document("{ not json"), ValidationError);
  CHECK_THROWS_AS(load_document("/nonexistent/file.cx"), ValidationError);
}

TEST_CASE("command line", "[cli]") {
  const std::string dir = corpus_dir();
  auto path = [&](const std::string& n) { return dir + "/" + n + ".cx"; };

  auto r = invoke({"betti", "--in", path("torus")});
  CHECK(r.code == 0);
  CHECK(r.out.find("betti: (1, 2, 1)") != std::string::npos);

  r = invoke({"betti", "--in", path("torus"), "--quotient", "cyclic4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("betti: (1, 2, 1)") != std::string::npos);

  r = invoke({"twisted", "--in", path("trefoil"), "--phi", "phi0", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "p,unnormalized,normalized\n0,0,0\n1,0,0\n2,0,0\n");

  r = invoke({"taut", "--in", path("product_g2"), "--phi", "phi0", "--schedule", "cyclic:1..8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: certified vanishing for phi") != std::string::npos);
  CHECK(r.out.find("twisted_betti: (0, 0, 0, 0)") != std::string::npos);

  r = invoke({"compare", "--in", path("surface_g2"), "--phi", "phi0", "--schedule", "cyclic:1,2,4,8,16,32,64"});
  CHECK(r.code == 0);
  CHECK(r.out.find("64,1,130,65/32,2,1/32") != std::string::npos);
  CHECK(r.out.find("converged: yes") != std::string::npos);
  const auto again = invoke({"compare", "--in", path("surface_g2"), "--phi", "phi0", "--schedule",
                          "cyclic:1,2,4,8,16,32,64"});
  CHECK(again.out == r.out);

  r = invoke({"approx", "--in", path("circle"), "--phi", "1", "--schedule", "cyclic:1..5", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("5,1,1,1/5") != std::string::npos);

  r = invoke({"sutured-check", "--in", path("solid_torus"), "--phi", "phi0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("duality: holds") != std::string::npos);

  r = invoke({"tower", "--in", path("product_sigma11"), "--n", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("2,1,2,0,0") != std::string::npos);

  r = invoke({"validate", "--in", path("trefoil_exterior")});
  CHECK(r.code == 0);

  r = invoke({"convert", "--in", path("torus")});
  CHECK(r.code == 0);
  CHECK(r.out == serialize(corpus_object("torus")));

  // failures
  r = invoke({"approx", "--in", path("circle"), "--phi", "phi0", "--schedule", "cyclic:4..2"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(invoke({"approx", "--in", path("circle"), "--phi", "phi0", "--schedule", "dyadic:1"}).code == 2);
  CHECK(invoke({"betti", "--in", path("torus"), "--bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"betti", "--in", path("trefoil"), "--phi", "1,2"}).code == 2);
  CHECK(invoke({"betti", "--in", dir + "/missing.cx"}).code == 2);
  CHECK(invoke({"taut", "--in", path("solid_torus"), "--phi", "phi0"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("schedule grammar", "[cli]") {
  CHECK(cli::parse_schedule("cyclic:1..64") == std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64});
  CHECK(cli::parse_schedule("cyclic:1..10") == std::vector<std::size_t>{1, 2, 4, 8, 10});
  CHECK(cli::parse_schedule("cyclic:3,5") == std::vector<std::size_t>{3, 5});
  CHECK_THROWS_AS(cli::parse_schedule("cyclic:"), ValidationError);
  CHECK_THROWS_AS(cli::parse_schedule("cyclic:0,1"), ValidationError);
  CHECK_THROWS_AS(cli::parse_schedule("cyclic:2,1"), ValidationError);
}
