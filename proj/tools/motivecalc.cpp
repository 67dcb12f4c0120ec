#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

#include "motivecalc/biext_group.hpp"
#include "motivecalc/io.hpp"
#include "motivecalc/tensor_weights.hpp"

using namespace motivecalc;
using io::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kInvalid = 2, kLimit = 3;

struct Options {
  std::string command, input, name, with, target, groups;
  int l = 0, i = 0;
  std::int64_t n = 0;
  bool json = false, brute = false;
};

struct Outcome {
  int code = kOk;
  json data;
  std::string text;
};

io::Document load(const Options& o) {
  if (o.input.empty()) throw ValidationError("--input is required for " + o.command);
  return io::parse_file(o.input);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

const OneMotive& motive_arg(const io::Document& doc, const std::string& name) {
  if (name.empty()) {
    if (doc.motives.size() == 1) return doc.motives[0];
    throw ValidationError("--name is required when the document has " + std::to_string(doc.motives.size()) + " motives");
  }
  const OneMotive* m = doc.motive(name);
  if (!m) throw ValidationError("unresolved reference to motive \"" + name + "\"");
  return *m;
}

/// Named motives, or all motives of the document when `names` is empty.
std::vector<OneMotive> motive_list(const io::Document& doc, const std::string& names) {
  if (names.empty()) return doc.motives;
  std::vector<OneMotive> out;
  for (const auto& n : split(names)) out.push_back(motive_arg(doc, n));
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + v[k];
  return s;
}

json report_json(const VerificationReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) {
    json w = json::array();
    for (const auto& x : f.witnesses) w.push_back(witness_to_string(x));
    fails.push_back({{"identity", f.identity}, {"count", f.count}, {"witnesses", w}});
  }
  return fails;
}

Outcome cmd_dual(const Options& o) {
  auto doc = load(o);
  const auto& M = motive_arg(doc, o.name);
  Outcome out;
  out.data = io::document_to_json(io::motive_document(cartier_dual(M)));
  out.text = io::canonical(out.data);
  return out;
}

Outcome cmd_weights(const Options& o) {
  auto doc = load(o);
  Outcome out;
  out.data = json::array();
  for (const auto& M : motive_list(doc, o.name)) {
    auto g = weight_graded(M);
    out.data.push_back({{"motive", M.name()}, {"gr0_rank", g.gr0_rank}, {"grm1_dim", g.grm1_dim}, {"grm2_rank", g.grm2_rank}});
    out.text += M.name() + ": Gr_0 rank " + std::to_string(g.gr0_rank) + ", Gr_-1 dim " + std::to_string(g.grm1_dim) +
                ", Gr_-2 rank " + std::to_string(g.grm2_rank) + "\n";
  }
  return out;
}

Outcome cmd_complex_check(const Options& o) {
  auto doc = load(o);
  const auto& M = motive_arg(doc, o.name);
  const auto& N = o.with.empty() ? M : motive_arg(doc, o.with);
  if (M.has_abelian() || N.has_abelian())
    throw DeskLimitError("unsupported shape: the tensor complex is computed for torus-only motives");
  auto c = tensor_complex(M, N);
  const bool zero = (c.dm1 * c.d0).is_zero();
  Outcome out;
  out.code = zero ? kOk : kFailed;
  out.data = {{"motives", {M.name(), N.name()}},
              {"terms", {c.C0, c.Cm1, c.Cm2}},
              {"ranks", {c.rank0, c.rankm1, c.rankm2}},
              {"d0", io::detail::matrix_to_json(c.d0)},
              {"dm1", io::detail::matrix_to_json(c.dm1)},
              {"squares_to_zero", zero}};
  out.text = join(c.C0, "+") + " -> " + join(c.Cm1, "+") + " -> " + join(c.Cm2, "+") + "\nranks (" + std::to_string(c.rank0) + "," + std::to_string(c.rankm1) +
             "," + std::to_string(c.rankm2) + ")\nd o d = 0: " + (zero ? "yes" : "no") + "\n";
  return out;
}

Outcome cmd_gr_decompose(const Options& o) {
  Outcome out;
  out.data = {{"l", o.l}, {"i", o.i}, {"summands", json::array()}};
  for (const auto& s : graded_decomposition(o.l, o.i)) {
    json pieces = json::array();
    std::vector<std::string> words;
    for (const auto& p : s.pieces) {
      pieces.push_back({{"word", word_to_string(p.word)}, {"weight", word_weight(p.word)}, {"multiplicity", p.multiplicity}});
      words.push_back(std::to_string(p.multiplicity) + "*" + word_to_string(p.word));
    }
    out.data["summands"].push_back({{"nu", s.nu_indices},
                                    {"iota", s.iota_indices},
                                    {"factor", s.factor_description},
                                    {"multiplicity", s.multiplicity},
                                    {"pieces", pieces}});
    out.text += s.factor_description + " [x" + std::to_string(s.multiplicity) + "]: " + join(words, " + ") + "\n";
  }
  return out;
}

json ranks_json(const GradedRanks& g) {
  json j = json::object();
  for (std::size_t k = 0; k < g.by_weight.size(); ++k) j[std::to_string(-static_cast<int>(k))] = g.by_weight[k];
  return j;
}

std::string ratio_text(const std::optional<double>& r) {
  if (!r) return "undefined";
  std::ostringstream os;
  os << *r;
  return os.str();
}

Outcome cmd_gr_check(const Options& o) {
  auto doc = load(o);
  auto motives = motive_list(doc, o.name);
  if (o.l && static_cast<std::size_t>(o.l) != motives.size())
    throw ValidationError("--l " + std::to_string(o.l) + " does not match the " + std::to_string(motives.size()) + " selected motives");
  auto r = graded_rank_check(motives, o.i);
  Outcome out;
  out.code = r.holds() ? kOk : kFailed;
  out.data = {{"l", r.l},
              {"i", r.i},
              {"lhs", ranks_json(r.lhs)},
              {"rhs", ranks_json(r.rhs)},
              {"gr0_multiplier", r.gr0_multiplier},
              {"grm1_multiplier", r.grm1_multiplier},
              {"gr0_ratio", r.gr0_ratio ? json(*r.gr0_ratio) : json()},
              {"grm1_ratio", r.grm1_ratio ? json(*r.grm1_ratio) : json()},
              {"holds", r.holds()}};
  out.text = "l = " + std::to_string(r.l) + ", i = " + std::to_string(r.i) + "\nGr_0 ratio " + ratio_text(r.gr0_ratio) +
             " (expected " + std::to_string(r.gr0_multiplier) + ")\nGr_-1 ratio " + ratio_text(r.grm1_ratio) + " (expected " +
             std::to_string(r.grm1_multiplier) + ")\n" + (r.holds() ? "holds" : "FAILS") + "\n";
  return out;
}

Outcome cmd_components(const Options& o) {
  auto doc = load(o);
  std::vector<OneMotive> ms;
  if (const auto* b = doc.biextension(o.name)) {
    ms = {b->mb.M1, b->mb.M2, b->mb.M3};
  } else {
    ms = motive_list(doc, o.name);
    if (ms.size() != 3) throw ValidationError("components needs a biextension or three motives M1,M2,M3");
  }
  auto m = weight_component_solver(ms[0], ms[1], ms[2]);
  Outcome out;
  json cells = json::array();
  for (std::size_t r = 0; r < m.cells.size(); ++r) {
    json row = json::array();
    std::vector<std::string> shown;
    for (std::size_t c = 0; c < m.cells[r].size(); ++c) {
      row.push_back(to_string(m.cells[r][c]));
      shown.push_back(m.col_labels[c] + ":" + to_string(m.cells[r][c]));
    }
    cells.push_back(row);
    out.text += m.row_labels[r] + " (rank " + std::to_string(m.row_ranks[r]) + ")  " + join(shown, "  ") + "\n";
  }
  std::vector<std::string> live;
  for (int w : m.live_weights()) live.push_back(std::to_string(w));
  out.text += "live weights {" + join(live, ", ") + "}\n";
  out.data = {{"rows", m.row_labels}, {"columns", m.col_labels}, {"row_ranks", m.row_ranks}, {"column_ranks", m.col_ranks},
              {"cells", cells}, {"live_weights", m.live_weights()}};
  return out;
}

Outcome cmd_biext_verify(const Options& o) {
  auto doc = load(o);
  std::vector<std::pair<std::string, VerificationReport>> runs;
  auto run_biext = [&](const io::BiextEntry& b) { runs.emplace_back(b.mb.name, verify_motive_biextension(b.mb)); };
  auto run_morphism = [&](const io::MorphismEntry& m) {
    runs.emplace_back(m.name, verify_biext_morphism(doc.biextension(m.source)->mb, doc.biextension(m.target)->mb, m.data));
  };
  if (o.name.empty()) {
    for (const auto& b : doc.biextensions) run_biext(b);
    for (const auto& m : doc.morphisms) run_morphism(m);
  } else if (const auto* b = doc.biextension(o.name)) {
    run_biext(*b);
  } else if (const auto* m = doc.morphism(o.name)) {
    run_morphism(*m);
  } else {
    throw ValidationError("unresolved reference to biextension or morphism \"" + o.name + "\"");
  }
  if (runs.empty()) throw ValidationError("the document has no biextensions");
  Outcome out;
  out.data = json::array();
  for (const auto& [name, r] : runs) {
    out.data.push_back({{"name", name}, {"ok", r.ok()}, {"failures", report_json(r)}});
    out.text += name + ": " + (r.ok() ? "verified\n" : "FAILED\n" + r.to_string());
    if (!r.ok()) out.code = kFailed;
  }
  return out;
}

/// "Z^r", "Z/a" or "Z/axZ/b...", "F5*".
DeskGroup parse_group(const std::string& s) {
  auto bad = [&]() -> DeskGroup { throw ValidationError("cannot read group \"" + s + "\" (use Z^r, Z/a, Z/axZ/b or F<p>*)"); };
  try {
    if (s == "Z") return DeskGroup::lattice(1);
    if (s.rfind("Z^", 0) == 0) return DeskGroup::lattice(std::stoi(s.substr(2)));
    if (s.size() > 2 && s[0] == 'F' && s.back() == '*') return DeskGroup::torus(PrimeField(std::stoll(s.substr(1, s.size() - 2))), 1);
    IntVector orders;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, 'x')) {
      if (part.rfind("Z/", 0) != 0) return bad();
      orders.push_back(std::stoll(part.substr(2)));
    }
    if (orders.empty()) return bad();
    return DeskGroup::finite(orders);
  } catch (const std::invalid_argument&) {
    return bad();
  } catch (const std::out_of_range&) {
    return bad();
  }
}

Outcome cmd_biext_group(const Options& o) {
  Outcome out;
  if (o.groups.empty()) {
    auto doc = load(o);
    std::vector<OneMotive> ms;
    if (const auto* b = doc.biextension(o.name)) ms = {b->mb.M1, b->mb.M2, b->mb.M3};
    else ms = motive_list(doc, o.name);
    if (ms.size() != 3) throw ValidationError("biext-group needs --groups P;Q;G, a biextension or three motives M1,M2,M3");
    auto g = biext1_of_motives(ms[0], ms[1], ms[2]);
    out.data = {{"motives", {ms[0].name(), ms[1].name(), ms[2].name()}}, {"biext1", g.to_string()}, {"free_rank", g.free_rank}};
    out.text = "Biext^1(" + ms[0].name() + "," + ms[1].name() + ";" + ms[2].name() + ") = " + g.to_string() + "\n";
    return out;
  }
  std::string groups = o.groups;
  std::replace(groups.begin(), groups.end(), ';', ',');
  const auto parts = split(groups);
  if (parts.size() != 3) throw ValidationError("--groups expects P;Q;G or P,Q,G");
  const DeskGroup P = parse_group(parts[0]), Q = parse_group(parts[1]), G = parse_group(parts[2]);
  auto b0 = biext0(P, Q, G);
  auto b1 = biext1(P, Q, G);
  out.data = {{"groups", parts}, {"biext0", b0.to_string()}, {"biext1", b1.group.to_string()},
              {"biext1_invariants", b1.group.torsion.invariant_factors()}, {"biext1_free_rank", b1.group.free_rank}};
  out.text = "Biext^0 = " + b0.to_string() + "\nBiext^1 = " + b1.group.to_string() + "\n";
  if (o.brute) {
    auto f0 = biext0_brute_force(P, Q, G, max_enum_from_env());
    auto f1 = biext1_brute_force(P, Q, G, max_enum_from_env());
    const bool agree = f0.group == b0 && f1.group == b1.group;
    out.data["brute_force"] = {{"biext0", f0.group.to_string()}, {"biext1", f1.group.to_string()}, {"candidates", f1.candidates}, {"agree", agree}};
    out.text += "brute force: Biext^0 = " + f0.group.to_string() + ", Biext^1 = " + f1.group.to_string() + " (" +
                (agree ? "agrees" : "DISAGREES") + ")\n";
    if (!agree) out.code = kFailed;
  }
  return out;
}

Outcome cmd_hom_tensor(const Options& o) {
  auto doc = load(o);
  auto motives = motive_list(doc, o.name);
  if (o.target.empty()) throw ValidationError("--target is required for hom-tensor");
  const auto& M = motive_arg(doc, o.target);
  auto r = hom_tensor_group(motives, M);
  Outcome out;
  json terms = json::array();
  for (const auto& t : r.terms) {
    terms.push_back({{"pair", {t.i, t.j}}, {"multiplicity", t.multiplicity}, {"computed", t.computed}, {"group", t.group.to_string()}});
    out.text += "(" + std::to_string(t.i) + "," + std::to_string(t.j) + ") x" + std::to_string(t.multiplicity) + "  " + t.description + "\n";
  }
  out.data = {{"terms", terms},
              {"ordered_total", r.ordered_total.to_string()},
              {"unordered_total", r.unordered_total.to_string()},
              {"symbolic_ordered", r.symbolic_ordered},
              {"symbolic_unordered", r.symbolic_unordered}};
  out.text += "ordered total " + r.ordered_total.to_string() + " (+" + std::to_string(r.symbolic_ordered) + " symbolic)\n";
  out.text += "unordered total " + r.unordered_total.to_string() + " (+" + std::to_string(r.symbolic_unordered) + " symbolic)\n";
  return out;
}

Outcome cmd_weil_pairing(const Options& o) {
  auto doc = load(o);
  const EllipticCurve* E = nullptr;
  std::int64_t n = o.n;
  if (o.name.empty() && doc.curves.size() == 1) E = &doc.curves[0];
  if (!o.name.empty()) E = doc.curve(o.name);
  if (!E && !o.name.empty())
    if (const auto* M = doc.motive(o.name); M && M->data().curves.size() == 1) {
      E = &M->data().curves[0];
      if (!n) n = M->data().torsion_n;
    }
  if (!E) throw ValidationError("--name must select a curve or a motive with one curve");
  if (n < 2) throw ValidationError("--n >= 2 is required");
  auto basis = torsion_basis(*E, n);
  if (!basis) throw DeskLimitError("unsupported shape: E[" + std::to_string(n) + "] is not rational over F_" + std::to_string(E->field().p()));
  const auto& F = E->field();
  if (checked::mul(checked::mul(n * n, n * n), n * n) > max_enum_from_env()) throw DeskLimitError("E[n]^3 exceeds MOTIVECALC_MAX_ENUM");
  std::vector<CurvePoint> pts;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b) pts.push_back(E->add(E->mul(a, basis->first), E->mul(b, basis->second)));
  bool bilinear = true, alternating = true;
  for (const auto& P : pts) {
    alternating &= weil_pairing(*E, n, P, P) == 1;
    for (const auto& Q : pts)
      for (const auto& R : pts)
        bilinear &= weil_pairing(*E, n, E->add(P, Q), R) == F.mul(weil_pairing(*E, n, P, R), weil_pairing(*E, n, Q, R));
  }
  const std::int64_t z = weil_pairing(*E, n, basis->first, basis->second);
  std::int64_t order = 1;
  for (std::int64_t t = z; t != 1; t = F.mul(t, z)) ++order;
  const bool nondegenerate = order == n;
  Outcome out;
  out.code = bilinear && alternating && nondegenerate ? kOk : kFailed;
  auto P = basis->first, Q = basis->second;
  out.data = {{"curve", E->name()},
              {"n", n},
              {"basis", {io::detail::point_to_json(motivecalc::detail::curve_elem(P)), io::detail::point_to_json(motivecalc::detail::curve_elem(Q))}},
              {"pairing", {{weil_pairing(*E, n, P, P), z}, {weil_pairing(*E, n, Q, P), weil_pairing(*E, n, Q, Q)}}},
              {"order", order},
              {"bilinear", bilinear},
              {"alternating", alternating},
              {"nondegenerate", nondegenerate}};
  out.text = "e_" + std::to_string(n) + "(P,Q) = " + std::to_string(z) + " of order " + std::to_string(order) + "\nbilinear " +
             (bilinear ? "yes" : "no") + ", alternating " + (alternating ? "yes" : "no") + ", nondegenerate " + (nondegenerate ? "yes" : "no") + "\n";
  return out;
}

Outcome cmd_poincare(const Options& o) {
  auto doc = load(o);
  const auto& M = motive_arg(doc, o.name);
  auto mb = poincare_of_motive(M, o.n);
  mb.name = o.target.empty() ? "P" : o.target;
  io::Document res = io::motive_document(mb.M1);
  res.biextensions.push_back({mb, mb.M1.name(), "", ""});
  Outcome out;
  out.data = io::document_to_json(res);
  out.text = io::canonical(out.data);
  auto r = verify_motive_biextension(mb);
  if (!r.ok()) {
    out.code = kFailed;
    out.text += r.to_string();
  }
  return out;
}

Outcome dispatch(const Options& o) {
  if (o.command == "dual") return cmd_dual(o);
  if (o.command == "weights") return cmd_weights(o);
  if (o.command == "complex-check") return cmd_complex_check(o);
  if (o.command == "gr-decompose") return cmd_gr_decompose(o);
  if (o.command == "gr-check") return cmd_gr_check(o);
  if (o.command == "components") return cmd_components(o);
  if (o.command == "biext-verify") return cmd_biext_verify(o);
  if (o.command == "biext-group") return cmd_biext_group(o);
  if (o.command == "hom-tensor") return cmd_hom_tensor(o);
  if (o.command == "weil-pairing") return cmd_weil_pairing(o);
  if (o.command == "poincare") return cmd_poincare(o);
  throw ValidationError("unknown command " + o.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale computations with 1-motives and their biextensions"};
  app.require_subcommand(1, 1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dual", "Cartier dual of a motive"},
      {"weights", "graded ranks of the weight filtration"},
      {"complex-check", "tensor complex of two torus-only motives"},
      {"gr-decompose", "graded pieces of M1 (x) ... (x) Ml / W_-i"},
      {"gr-check", "rank bookkeeping of the graded decomposition"},
      {"components", "weight components of M1 (x) M2 -> M3"},
      {"biext-verify", "verify biextensions and their morphisms"},
      {"biext-group", "Biext^0 and Biext^1 groups"},
      {"hom-tensor", "Hom(M1 (x) ... (x) Ml, M) as a sum of Biext^1 groups"},
      {"weil-pairing", "Weil pairing on a rational n-torsion basis"},
      {"poincare", "Poincare biextension of (M, M*) by Z(1)"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", o.input, "description file (JSON)");
    sub->add_option("--name", o.name, "motive, biextension, morphism or curve; comma lists where several are needed");
    sub->add_option("--l", o.l, "number of tensor factors");
    sub->add_option("--i", o.i, "weight truncation index");
    sub->add_option("--n", o.n, "torsion level");
    sub->add_option("--with", o.with, "second motive");
    sub->add_option("--target", o.target, "target motive, or the name of the new biextension");
    sub->add_option("--groups", o.groups, "P;Q;G for biext-group");
    sub->add_flag("--brute", o.brute, "also enumerate by brute force");
    sub->add_flag("--json", o.json, "structured output only");
    sub->callback([&o, name = name]() { o.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  Outcome out;
  try {
    out = dispatch(o);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DeskLimitError& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return kLimit;
  } catch (const OverflowError& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return kLimit;
  } catch (const VerificationFailed& e) {
    std::cerr << e.what();
    return kFailed;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  std::cout << (o.json ? io::canonical(out.data) : out.text);
  return out.code;
}
