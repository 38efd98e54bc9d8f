/**
 * Command-line front end. run() is the whole program; main() only forwards
 * argv and the standard streams.
 *
 * Exit codes: 0 success, 2 validation or usage error, 1 internal error.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "builders.hpp"
#include "chain.hpp"
#include "corpus.hpp"
#include "covers.hpp"
#include "io.hpp"
#include "sutured.hpp"

namespace l2s::cli {

enum class Format { Text, Csv };

/// "cyclic:1,2,4" lists degrees; "cyclic:a..b" doubles from a and ends at b.
inline std::vector<std::size_t> parse_schedule(const std::string& spec) {
  const std::string prefix = "cyclic:";
  if (spec.rfind(prefix, 0) != 0) throw ValidationError("schedule must start with 'cyclic:' (got '" + spec + "')");
  const std::string body = spec.substr(prefix.size());
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError("malformed schedule '" + spec + "': '" + s + "' is not a positive integer");
    const std::size_t v = std::stoul(s);
    if (v == 0) throw ValidationError("malformed schedule '" + spec + "': degrees must be positive");
    return v;
  };
  std::vector<std::size_t> ks;
  if (const auto dots = body.find(".."); dots != std::string::npos) {
    const std::size_t a = number(body.substr(0, dots)), b = number(body.substr(dots + 2));
    if (a > b) throw ValidationError("malformed schedule '" + spec + "': empty range");
    for (std::size_t k = a; k <= b; k *= 2) ks.push_back(k);
    if (ks.back() != b) ks.push_back(b);
  } else {
    std::stringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) ks.push_back(number(item));
    if (ks.empty()) throw ValidationError("malformed schedule '" + spec + "': no degrees");
    for (std::size_t i = 1; i < ks.size(); ++i)
      if (ks[i] <= ks[i - 1]) throw ValidationError("malformed schedule '" + spec + "': degrees must increase");
  }
  return ks;
}

inline std::string join(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

inline std::string cocycle_string(const Cocycle& phi) {
  std::string s = "(";
  for (std::size_t i = 0; i < phi.values.size(); ++i) s += (i ? ", " : "") + phi.values[i].get_str();
  return s + ")";
}

/// A cocycle by name from the document, or a literal "v1,v2,...".
inline Cocycle resolve_cocycle(const Document& doc, const std::string& arg) {
  if (auto it = doc.cocycles.find(arg); it != doc.cocycles.end()) return it->second;
  if (arg.find_first_not_of("-0123456789,") != std::string::npos)
    throw ValidationError("no cocycle named '" + arg + "'");
  Cocycle phi;
  std::stringstream in(arg);
  std::string item;
  while (std::getline(in, item, ',')) phi.values.push_back(parse_integer(item));
  phi.primitive = phi.content() == 1;
  const Diagnostics d = validate_cocycle(doc.complex.group, phi);
  if (!d.ok) throw ValidationError("cocycle '" + arg + "': " + d.messages.front());
  return phi;
}

inline void betti_table(std::ostream& out, const std::vector<std::size_t>& ks, const std::vector<BettiVector>& bs) {
  out << "k,p,unnormalized,normalized\n";
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (std::size_t p = 0; p < bs[i].unnormalized.size(); ++p)
      out << ks[i] << "," << p << "," << bs[i].unnormalized[p] << "," << to_string(bs[i].normalized(p)) << "\n";
}

struct Options {
  std::string in;
  std::string out;
  std::string phi;
  std::string quotient;
  std::string schedule = "cyclic:1..64";
  std::string side = "minus";
  std::string format = "text";
  std::size_t n = 2;
};

inline Format format_of(const Options& o) {
  if (o.format == "text") return Format::Text;
  if (o.format == "csv") return Format::Csv;
  throw ValidationError("unknown format '" + o.format + "' (text or csv)");
}

inline Specialization specialization_of(const Document& doc, const Options& o) {
  if (!o.phi.empty() && !o.quotient.empty()) throw ValidationError("--phi and --quotient are mutually exclusive");
  if (!o.phi.empty()) return resolve_cocycle(doc, o.phi);
  if (!o.quotient.empty()) return doc.quotient(o.quotient);
  return Augmentation{};
}

inline void require_valid_complex(const Document& doc, const Specialization& s) {
  const Diagnostics d = validate_complex(doc.complex, s);
  if (!d.ok) throw ValidationError("complex fails under " + describe(s) + ": " + d.messages.front());
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  Diagnostics all;
  all.merge(validate_complex(doc.complex, Augmentation{}), "augmentation: ");
  for (const auto& [name, c] : doc.cocycles) all.merge(validate_complex(doc.complex, c), "cocycle " + name + ": ");
  for (const auto& [name, q] : doc.quotients) all.merge(validate_complex(doc.complex, q), "quotient " + name + ": ");
  if (doc.flags) all.merge(validate_sutured(doc.sutured()), "sutured: ");
  if (!all.ok) {
    std::string msg;
    for (const auto& m : all.messages) msg += "\n  " + m;
    throw ValidationError("validation failed:" + msg);
  }
  out << "valid: " << o.in << "\n";
  out << "cells: ";
  for (std::size_t d = 0; d < doc.complex.cell_counts.size(); ++d) out << (d ? " " : "") << doc.complex.cell_counts[d];
  out << "\neuler: " << euler_char(doc.complex) << "\n";
  out << "cocycles: " << doc.cocycles.size() << "\nquotients: " << doc.quotients.size() << "\n";
  return 0;
}

inline int cmd_betti(const Options& o, std::ostream& out, bool twisted) {
  const Document doc = load_document(o.in);
  if (twisted && o.phi.empty()) throw ValidationError("twisted needs --phi");
  const Specialization s = specialization_of(doc, o);
  require_valid_complex(doc, s);
  const BettiVector b = twisted ? twisted_betti(doc.complex, std::get<Cocycle>(s)) : betti(doc.complex, s);
  if (format_of(o) == Format::Csv) {
    out << "p,unnormalized,normalized\n";
    for (std::size_t p = 0; p < b.unnormalized.size(); ++p)
      out << p << "," << b.unnormalized[p] << "," << to_string(b.normalized(p)) << "\n";
    return 0;
  }
  out << "specialization: " << describe(s) << "\n";
  out << "betti: " << to_string(BettiVector{b.unnormalized, 1}) << "\n";
  out << "normalization: " << b.normalization << "\n";
  out << "normalized: " << join(b.values()) << "\n";
  out << "euler: " << b.euler() << "\n";
  return 0;
}

inline int cmd_approx(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  if (o.phi.empty()) throw ValidationError("approx needs --phi");
  const Cocycle phi = resolve_cocycle(doc, o.phi);
  const auto ks = parse_schedule(o.schedule);
  const ApproxSequence seq = approximate(doc.complex, cyclic_schedule(phi, ks));
  std::vector<BettiVector> bs;
  for (const auto& item : seq.items) bs.push_back(item.betti);
  if (format_of(o) == Format::Csv) {
    betti_table(out, ks, bs);
    return 0;
  }
  out << "phi: " << cocycle_string(phi) << "\n";
  out << "euler: " << euler_char(doc.complex) << "\n";
  out << "table:\n";
  betti_table(out, ks, bs);
  if (!seq.limit_estimate.empty()) {
    out << "limit_estimate (fit b = L + c/k on the last three items):\n";
    for (std::size_t p = 0; p < seq.limit_estimate.size(); ++p)
      out << "  p=" << p << ": L=" << to_string(seq.limit_estimate[p].limit)
          << " c=" << to_string(seq.limit_estimate[p].slope) << " residuals=" << join(seq.limit_estimate[p].residuals)
          << "\n";
  }
  return 0;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  if (o.phi.empty()) throw ValidationError("compare needs --phi");
  const Cocycle phi = resolve_cocycle(doc, o.phi);
  const auto ks = parse_schedule(o.schedule);
  const TwistedComparison c = compare_with_twisted(doc.complex, phi, ks);
  const Format f = format_of(o);
  if (f == Format::Text) {
    out << "phi: " << cocycle_string(phi) << "\n";
    out << "twisted_betti: " << to_string(c.twisted) << "\n";
    out << "table:\n";
  }
  out << "k,p,unnormalized,normalized,twisted,gap\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& b = c.sequence.items[i].betti;
    for (std::size_t p = 0; p < b.unnormalized.size(); ++p)
      out << ks[i] << "," << p << "," << b.unnormalized[p] << "," << to_string(b.normalized(p)) << ","
          << c.twisted[p] << "," << to_string(c.gaps[i][p]) << "\n";
  }
  if (f == Format::Text) {
    for (std::size_t p = 0; p < c.gap.size(); ++p)
      out << "degree " << p << ": twisted " << c.twisted[p] << ", normalized " << to_string(c.final_normalized[p])
          << ", gap " << to_string(c.gap[p]) << "\n";
    out << "converged: " << (c.converged ? "yes" : "no") << " (gap <= 2/" << ks.back() << ")\n";
  }
  return 0;
}

inline std::string flags_string(const SuturedFlags& f) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  return std::string("irreducible=") + b(f.irreducible) + " gamma_incompressible=" + b(f.gamma_incompressible) +
         " rminus_incompressible=" + b(f.rminus_incompressible) + " infinite_pi1=" + b(f.infinite_pi1);
}

inline int cmd_sutured_check(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  const SuturedComplex sc = doc.sutured();
  const Diagnostics d = validate_sutured(sc);
  if (!d.ok) {
    std::string msg;
    for (const auto& m : d.messages) msg += "\n  " + m;
    throw ValidationError("sutured validation failed:" + msg);
  }
  std::vector<Specialization> specs{Augmentation{}};
  if (!o.phi.empty()) specs.push_back(resolve_cocycle(doc, o.phi));
  const BalanceReport bal = is_balanced(sc);
  out << "valid: yes\n";
  out << "flags: " << flags_string(sc.flags) << "\n";
  out << "chi: M=" << euler_char(sc.space) << " R+=" << bal.chi_rplus << " R-=" << bal.chi_rminus
      << " gamma=" << euler_char(sc.gamma()) << "\n";
  out << "complexity: R+=" << complexity(sc.space, sc.rplus()) << " R-=" << complexity(sc.space, sc.rminus()) << "\n";
  out << "balanced: " << (bal.balanced ? "yes" : "no") << " (chi(M,R-)=" << bal.chi_pair << ")\n";
  for (const auto& s : specs) {
    out << "[" << describe(s) << "]\n";
    const Side side = o.side == "plus" ? Side::Plus : Side::Minus;
    out << "  pair_betti(" << (side == Side::Plus ? "R+" : "R-") << "): " << to_string(pair_betti(sc, side, s)) << "\n";
    const DualityReport dual = duality_check(sc, s);
    out << "  duality: " << (dual.holds ? "holds" : "FAILS") << " b(M,R- u gamma)=" << to_string(dual.rminus_gamma)
        << " b(M,R+)=" << to_string(dual.rplus) << "\n";
    const HalfLivesReport h = half_lives_half_dies(sc.space, s);
    out << "  half_lives_half_dies: " << (h.holds ? "holds" : "FAILS") << " kernel=" << h.kernel
        << " b1(boundary)=" << h.b1_boundary << "\n";
    if (const auto* phi = std::get_if<Cocycle>(&s); phi && bal.balanced) {
      const WeakIsoReport w = weak_iso_check(sc, *phi);
      out << "  weak_iso: injective=" << (w.injective ? "yes" : "no") << " rank=" << w.image_rank
          << " b1(R-)=" << w.b1_rminus << " pair=" << to_string(w.pair)
          << " consistent=" << (w.consistent ? "yes" : "no") << "\n";
    }
  }
  return 0;
}

inline int cmd_taut(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  if (o.phi.empty()) throw ValidationError("taut needs --phi");
  const Cocycle phi = resolve_cocycle(doc, o.phi);
  const auto ks = parse_schedule(o.schedule);
  const TautReport r = taut_certify(doc.sutured(), phi, ks, doc.certificate);
  if (format_of(o) == Format::Csv) {
    betti_table(out, ks, r.approx_pair);
    return 0;
  }
  out << "verdict: " << r.verdict << "\n";
  out << "scope: dimensions over Q(t) along phi; the declared hypotheses are not checked\n";
  out << "phi: " << cocycle_string(r.phi) << "\n";
  out << "flags: " << flags_string(r.flags) << "\n";
  out << "twisted_betti: " << to_string(r.twisted_pair) << "\n";
  out << "approx_table:\n";
  betti_table(out, ks, r.approx_pair);
  out << "certificate_det: ";
  if (!r.certificate) {
    out << "none\n";
  } else {
    for (std::size_t i = 0; i < r.certificate->determinants.size(); ++i)
      out << (i ? "; " : "") << to_string(r.certificate->determinants[i]);
    out << (r.certificate->certified ? " (certified)" : " (not certified)") << "\n";
  }
  if (r.contradiction) out << "contradiction: nonzero twisted pair Betti numbers despite a product certificate\n";
  return 0;
}

inline int cmd_tower(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  const SuturedComplex sc = doc.sutured();
  require_sutured(sc);
  const BettiVector minus = pair_betti(sc, Side::Minus, Augmentation{});
  const BettiVector plus = pair_betti(sc, Side::Plus, Augmentation{});
  const long chi_minus_sigma = complexity(sc.space, sc.rplus());
  const Format f = format_of(o);
  out << "n,p,b_stage,b_pair,b_excision\n";
  std::vector<std::string> notes;
  for (std::size_t n = 0; n <= o.n; ++n) {
    const Tower t = tower(sc, n);
    const BettiVector stage = betti(subcomplex(t.complex, t.stage(n)), Augmentation{});
    std::optional<BettiVector> pair;
    if (n >= 1) pair = betti(relative(subcomplex(t.complex, t.stage(n)), t.stage(n - 1)), Augmentation{});
    for (std::size_t p = 0; p < stage.unnormalized.size(); ++p) {
      out << n << "," << p << "," << stage[p] << ",";
      if (pair) out << (*pair)[p] << "," << minus[p] + plus[p];
      else out << ",";
      out << "\n";
    }
    notes.push_back("n=" + std::to_string(n) + ": b1 - b0 = " + std::to_string(stage[1] - stage[0]) +
                    ", chi_-(Sigma) = " + std::to_string(chi_minus_sigma));
  }
  if (f == Format::Text)
    for (const auto& s : notes) out << "norm_estimate " << s << "\n";
  return 0;
}

inline int cmd_corpus(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ValidationError("corpus needs --out DIR");
  std::filesystem::create_directories(o.out);
  for (const auto& [name, doc] : corpus()) {
    const std::string path = (std::filesystem::path(o.out) / (name + ".cx")).string();
    save_document(doc, path);
    out << "wrote " << path << "\n";
  }
  return 0;
}

inline int cmd_convert(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.in);
  if (o.out.empty()) {
    out << serialize(doc);
  } else {
    save_document(doc, o.out);
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Betti numbers of equivariant chain complexes and sutured manifold checks", "l2s"};
  app.require_subcommand(1);
  Options o;
  auto input = [&](CLI::App* c) { c->add_option("--in", o.in, "input document")->required(); };
  auto fmt = [&](CLI::App* c) { c->add_option("--format", o.format, "report format: text or csv"); };
  auto phi = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--phi", o.phi, "cocycle name in the document, or literal values 'v1,v2,...'");
    if (required) opt->required();
  };
  auto sched = [&](CLI::App* c) {
    c->add_option("--schedule", o.schedule, "cyclic:a,b,c or cyclic:a..b (doubling)");
  };

  auto* validate = app.add_subcommand("validate", "validate a document under every attached specialization");
  input(validate);
  auto* bet = app.add_subcommand("betti", "Betti numbers under augmentation, --phi or --quotient");
  input(bet);
  phi(bet, false);
  bet->add_option("--quotient", o.quotient, "quotient name in the document");
  fmt(bet);
  auto* tw = app.add_subcommand("twisted", "dimensions over Q(t) along --phi");
  input(tw);
  phi(tw, true);
  fmt(tw);
  auto* ap = app.add_subcommand("approx", "normalized Betti numbers of cyclic covers");
  input(ap);
  phi(ap, true);
  sched(ap);
  fmt(ap);
  auto* cmp = app.add_subcommand("compare", "cyclic-cover sequence against the twisted Betti numbers");
  input(cmp);
  phi(cmp, true);
  sched(cmp);
  fmt(cmp);
  auto* sut = app.add_subcommand("sutured-check", "sutured validation, balance, duality and rank checks");
  input(sut);
  phi(sut, false);
  sut->add_option("--side", o.side, "pair side: minus or plus")->check(CLI::IsMember({"minus", "plus"}));
  auto* taut = app.add_subcommand("taut", "tautness verdict along --phi");
  input(taut);
  phi(taut, true);
  sched(taut);
  fmt(taut);
  auto* tow = app.add_subcommand("tower", "Betti numbers of the stages of the glued tower");
  input(tow);
  tow->add_option("--n", o.n, "largest stage");
  fmt(tow);
  auto* cor = app.add_subcommand("corpus", "write the built-in corpus");
  cor->add_option("--out", o.out, "output directory")->required();
  auto* conv = app.add_subcommand("convert", "re-save a document in canonical form");
  input(conv);
  conv->add_option("--out", o.out, "output path (standard output if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  // reports are buffered so that a failure never leaves a partial report
  std::ostringstream buf;
  int code = 1;
  try {
    if (validate->parsed()) code = cmd_validate(o, buf);
    else if (bet->parsed()) code = cmd_betti(o, buf, false);
    else if (tw->parsed()) code = cmd_betti(o, buf, true);
    else if (ap->parsed()) code = cmd_approx(o, buf);
    else if (cmp->parsed()) code = cmd_compare(o, buf);
    else if (sut->parsed()) code = cmd_sutured_check(o, buf);
    else if (taut->parsed()) code = cmd_taut(o, buf);
    else if (tow->parsed()) code = cmd_tower(o, buf);
    else if (cor->parsed()) code = cmd_corpus(o, buf);
    else if (conv->parsed()) code = cmd_convert(o, buf);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  out << buf.str();
  return code;
}

}  // namespace l2s::cli
