#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "motivecalc/biext_cocycle.hpp"
#include "motivecalc/motive.hpp"

namespace motivecalc {

/// Cocycle pair of B on (A1[n], A2[n]) by Y3(1) points. Entries missing from
/// the tables are zero. "weil" is the Poincare cocycle of M1 in a rank-1 torus.
struct BiextTables {
  std::string mode = "zero";  // zero | weil | table
  std::map<std::vector<Elem>, Elem> phi;  // {p1, p2, q} -> value
  std::map<std::vector<Elem>, Elem> psi;  // {p, q1, q2} -> value
};

/// Kinds: 0 general, 1-3 Poincare biextensions of (M, M*) by Z(1), 4-7 the
/// worked shapes over torus-only or torus-free targets.
struct MotiveBiextension {
  std::string name;
  int kind = 0;
  OneMotive M1, M2, M3;
  BiextTables B;
  std::map<std::pair<std::size_t, Elem>, Elem> Psi1;  // Psi1(e_i, b), b in A2[n]
  std::map<std::pair<Elem, std::size_t>, Elem> Psi2;  // Psi2(a, f_j), a in A1[n]
  std::vector<std::vector<Elem>> Psi;                 // Psi(e_i, f_j); empty means trivial
  IntMatrix lambda;                                   // rank X3 x (rank X1 * rank X2), empty means zero
  IntMatrix endo;                                     // kind 7 only, empty means identity

  int r1() const { return M1.data().x_rank; }
  int r2() const { return M2.data().x_rank; }
  int r3() const { return M3.data().ydual_rank; }
  DeskGroup target() const { return M3.torus_points(); }
  IntMatrix lambda_matrix() const {
    if (lambda.rows() == 0 && lambda.cols() == 0)
      return IntMatrix(static_cast<std::size_t>(M3.data().x_rank), static_cast<std::size_t>(r1() * r2()));
    return lambda;
  }
  Elem psi_at(std::size_t i, std::size_t j) const {
    if (Psi.empty()) return target().zero();
    return Psi[i][j];
  }
};

namespace detail {

inline GroupHom v_hom(const OneMotive& M) {
  return {DeskGroup::lattice(M.data().x_rank), M.abelian().group(), [M](const Elem& x) { return M.v_of(x); }};
}

/// t in F_p^* with t^m = s, by search.
inline std::optional<std::int64_t> field_root(const PrimeField& F, std::int64_t m, std::int64_t s) {
  for (std::int64_t t = 1; t < F.p(); ++t)
    if (F.pow(t, m) == s) return t;
  return std::nullopt;
}

/// tau: Q -> T (T a split torus) with tau(b) + tau(b') - tau(b + b') = c(b, b'),
/// for a symmetric normalized cocycle c on a finite Q.
inline std::function<Elem(const Elem&)> trivialize_on_finite(const DeskGroup& Q, const DeskGroup& T, const PrimeField& F,
                                                              std::function<Elem(const Elem&, const Elem&)> c,
                                                              const std::string& what) {
  const auto& dec = Q.decomposition();
  const std::size_t k = dec.orders.size();
  auto lift = [Q](const IntVector& v) { return Q.from_coords(v); };
  auto coc = [c, lift](const IntVector& a, const IntVector& s) { return c(lift(a), lift(s)); };
  std::vector<Elem> roots;
  for (std::size_t t = 0; t < k; ++t) {
    // f(m e_t) = m f(e_t) - sum_{s < m} c(s e_t, e_t) must vanish.
    Elem acc = T.zero();
    IntVector cur(k, 0), e(k, 0);
    e[t] = 1;
    for (std::int64_t s = 0; s < dec.orders[t]; ++s) {
      acc = T.add(acc, coc(cur, e));
      cur[t] += 1;
    }
    Elem r;
    for (std::size_t j = 0; j < acc.size(); ++j) {
      auto root = field_root(F, dec.orders[t], acc[j]);
      if (!root) throw ValidationError(what + ": no " + std::to_string(dec.orders[t]) + "-th root of " + std::to_string(acc[j]) + " in F_" + std::to_string(F.p()));
      r.push_back(*root);
    }
    roots.push_back(r);
  }
  return [dec, T, roots, coc](const Elem& b) {
    return extend_additively(T, dec.coords(b), [&](std::size_t t) { return roots[t]; }, coc);
  };
}

}  // namespace detail

inline void validate_biextension(const MotiveBiextension& mb) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("biextension" + (mb.name.empty() ? std::string() : " " + mb.name) + ": " + what);
  };
  const auto& d1 = mb.M1.data();
  const auto& d2 = mb.M2.data();
  const auto& d3 = mb.M3.data();
  if (!(d1.field == d2.field) || !(d1.field == d3.field)) fail("motives over different fields");
  if (mb.kind < 0 || mb.kind > 7) fail("unknown kind " + std::to_string(mb.kind));
  const DeskGroup A1 = mb.M1.abelian().group(), A2 = mb.M2.abelian().group(), T = mb.target();
  if (mb.B.mode == "weil") {
    if (mb.r3() != 1) fail("weil cocycle needs a rank-1 torus in M3");
    if (d1.curves != d2.curves || d1.torsion_n != d2.torsion_n || d1.abelian_is_dual == d2.abelian_is_dual)
      fail("weil cocycle needs M2 to carry the dual abelian part of M1 at the same torsion level");
    if (d1.curves.empty()) fail("weil cocycle needs an abelian part");
  } else if (mb.B.mode == "table") {
    for (const auto& [k, v] : mb.B.phi)
      if (k.size() != 3 || !A1.contains(k[0]) || !A1.contains(k[1]) || !A2.contains(k[2]) || !T.contains(v))
        fail("table domain mismatch in B.phi at " + witness_to_string(k));
    for (const auto& [k, v] : mb.B.psi)
      if (k.size() != 3 || !A1.contains(k[0]) || !A2.contains(k[1]) || !A2.contains(k[2]) || !T.contains(v))
        fail("table domain mismatch in B.psi at " + witness_to_string(k));
  } else if (mb.B.mode != "zero") {
    fail("unknown B mode " + mb.B.mode);
  }
  for (const auto& [k, v] : mb.Psi1)
    if (k.first >= static_cast<std::size_t>(mb.r1()) || !A2.contains(k.second) || !T.contains(v))
      fail("Psi1 entry outside X1 x A2[n] -> Y3(1)");
  for (const auto& [k, v] : mb.Psi2)
    if (k.second >= static_cast<std::size_t>(mb.r2()) || !A1.contains(k.first) || !T.contains(v))
      fail("Psi2 entry outside A1[n] x X2 -> Y3(1)");
  if (!mb.Psi.empty()) {
    if (mb.Psi.size() != static_cast<std::size_t>(mb.r1())) fail("Psi must have rank X1 rows");
    for (const auto& row : mb.Psi) {
      if (row.size() != static_cast<std::size_t>(mb.r2())) fail("Psi must have rank X2 columns");
      for (const auto& v : row)
        if (!T.contains(v)) fail("Psi value " + elem_to_string(v) + " is not a point of Y3(1)");
    }
  }
  const IntMatrix L = mb.lambda_matrix();
  if (L.rows() != static_cast<std::size_t>(d3.x_rank) || L.cols() != static_cast<std::size_t>(mb.r1() * mb.r2()))
    fail("lambda must be " + std::to_string(d3.x_rank) + "x" + std::to_string(mb.r1() * mb.r2()));
  if (mb.endo.rows() * mb.endo.cols() != 0 &&
      (mb.endo.rows() != L.cols() || mb.endo.cols() != L.cols()))
    fail("endo must be a square matrix on X1 (x) X2");

  if (mb.kind == 0) return;
  OneMotiveData dual = cartier_dual(mb.M1).data();
  dual.name = d2.name;
  if (!(dual == d2)) fail("shape mismatch: M2 is not the Cartier dual of M1");
  auto torus_only = [](const OneMotiveData& d) { return d.curves.empty(); };
  switch (mb.kind) {
    case 1:
    case 2:
    case 3:
      if (d3.x_rank != 0 || d3.ydual_rank != 1 || !d3.curves.empty()) fail("shape mismatch: target must be Z(1)");
      break;
    case 4:
      if (!torus_only(d1) || !torus_only(d3)) fail("shape mismatch: kind 4 needs M and [V -> W(1)] without abelian part");
      break;
    case 5:
      if (!torus_only(d1) || d3.ydual_rank != 0) fail("shape mismatch: kind 5 needs M without abelian part and [V -> A] without torus");
      break;
    case 6:
    case 7: {
      for (const auto& w : d1.vstar)
        if (w != mb.M1.abelian().group().zero()) fail("shape mismatch: kind " + std::to_string(mb.kind) + " needs v* = 0");
      if (mb.kind == 6 && !torus_only(d3)) fail("shape mismatch: kind 6 needs [V -> W(1)] without abelian part");
      if (mb.kind == 7 && d3.ydual_rank != 0) fail("shape mismatch: kind 7 needs [V -> A'] without torus");
      break;
    }
    default:
      break;
  }
}

inline BiextCocycle cocycle_of(const MotiveBiextension& mb) {
  const DeskGroup A1 = mb.M1.abelian().group(), A2 = mb.M2.abelian().group(), T = mb.target();
  if (mb.B.mode == "zero") return BiextCocycle::zero(A1, A2, T);
  if (mb.B.mode == "weil") {
    const OneMotive M = mb.M1;
    return {A1, A2, T,
            [M](const Elem& a1, const Elem& a2, const Elem& b) { return Elem{M.abelian().zeta_pow(M.pairing_phi(a1, a2, b))}; },
            [M](const Elem& a, const Elem& b1, const Elem& b2) { return Elem{M.abelian().zeta_pow(M.pairing_psi(a, b1, b2))}; }};
  }
  auto tab = std::make_shared<BiextTables>(mb.B);
  return {A1, A2, T,
          [tab, T](const Elem& p1, const Elem& p2, const Elem& q) {
            auto it = tab->phi.find({p1, p2, q});
            return it == tab->phi.end() ? T.zero() : it->second;
          },
          [tab, T](const Elem& p, const Elem& q1, const Elem& q2) {
            auto it = tab->psi.find({p, q1, q2});
            return it == tab->psi.end() ? T.zero() : it->second;
          }};
}

/// (v1, id)^* B on X1 x A2[n], (id, v2)^* B on A1[n] x X2 and (v1, v2)^* B on X1 x X2.
inline BiextCocycle pullback_first(const MotiveBiextension& mb) {
  return pullback(cocycle_of(mb), detail::v_hom(mb.M1), GroupHom::identity(mb.M2.abelian().group()));
}
inline BiextCocycle pullback_second(const MotiveBiextension& mb) {
  return pullback(cocycle_of(mb), GroupHom::identity(mb.M1.abelian().group()), detail::v_hom(mb.M2));
}
inline BiextCocycle pullback_both(const MotiveBiextension& mb) {
  return pullback(cocycle_of(mb), detail::v_hom(mb.M1), detail::v_hom(mb.M2));
}

/// Psi1 extended from X1-basis values by path induction in the lattice variable.
inline Trivialization psi1_trivialization(const MotiveBiextension& mb) {
  auto b = pullback_first(mb);
  auto tab = std::make_shared<std::map<std::pair<std::size_t, Elem>, Elem>>(mb.Psi1);
  return {[b, tab](const Elem& x, const Elem& q) {
    return extend_additively(
        b.G, x,
        [&](std::size_t i) {
          auto it = tab->find({i, q});
          return it == tab->end() ? b.G.zero() : it->second;
        },
        [&](const IntVector& c, const IntVector& s) { return b.phi(c, s, q); });
  }};
}

inline Trivialization psi2_trivialization(const MotiveBiextension& mb) {
  auto b = pullback_second(mb);
  auto tab = std::make_shared<std::map<std::pair<Elem, std::size_t>, Elem>>(mb.Psi2);
  return {[b, tab](const Elem& p, const Elem& y) {
    return extend_additively(
        b.G, y,
        [&](std::size_t j) {
          auto it = tab->find({p, j});
          return it == tab->end() ? b.G.zero() : it->second;
        },
        [&](const IntVector& c, const IntVector& s) { return b.psi(p, c, s); });
  }};
}

inline Trivialization psi_trivialization(const MotiveBiextension& mb) {
  auto anchors = std::make_shared<MotiveBiextension>(mb);
  return lattice_trivialization(pullback_both(mb), [anchors](std::size_t i, std::size_t j) { return anchors->psi_at(i, j); });
}

/// (psi3 (x) Y3)(x3): the Y3(1) coordinates of u3(x3).
inline Elem psi3_tensor_y3(const OneMotive& M3, const IntVector& x3) {
  Elem out;
  for (int k = 0; k < M3.data().ydual_rank; ++k) out.push_back(M3.psi_value(x3, OneMotive::unit(M3.data().ydual_rank, k)));
  return out;
}

namespace detail {

/// Psi on generators against (psi3 (x) Y3) o lambda.
inline void check_lambda_square(const MotiveBiextension& mb, FailureCollector& out) {
  if (mb.kind != 0 && mb.kind != 4 && mb.kind != 6) return;
  const IntMatrix L = mb.lambda_matrix();
  const std::size_t r1 = static_cast<std::size_t>(mb.r1()), r2 = static_cast<std::size_t>(mb.r2());
  const std::string id = mb.kind == 0 ? "condbiext" : "diagram(" + std::to_string(mb.kind) + ")";
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < r2; ++j) {
      IntVector c(L.rows());
      for (std::size_t r = 0; r < L.rows(); ++r) c[r] = L(r, i * r2 + j);
      if (mb.psi_at(i, j) != psi3_tensor_y3(mb.M3, c))
        out.fail(id, {Elem{static_cast<std::int64_t>(i + 1)}, Elem{static_cast<std::int64_t>(j + 1)}});
    }
}

}  // namespace detail

/// Checks B, the three trivializations, their coincidence on X1 x X2 and the
/// square tying Psi to lambda, then the kind-specific conditions.
inline VerificationReport verify_motive_biextension(const MotiveBiextension& mb) {
  validate_biextension(mb);
  VerificationReport report;
  const BiextCocycle B = cocycle_of(mb);
  report.merge(verify_biext_cocycle(B), "B: ");
  const auto t1 = psi1_trivialization(mb), t2 = psi2_trivialization(mb), t = psi_trivialization(mb);
  report.merge(verify_trivialization(pullback_first(mb), t1), "Psi1: ");
  report.merge(verify_trivialization(pullback_second(mb), t2), "Psi2: ");
  report.merge(verify_trivialization(pullback_both(mb), t), "Psi: ");

  // Psi and the pullbacks of Psi1, Psi2 trivialize the same cocycle on X1 x X2;
  // they must agree up to a biadditive map into Y3(1), the torus component Psi carries.
  detail::FailureCollector out;
  const DeskGroup T = mb.target();
  const bool poincare = mb.kind >= 1 && mb.kind <= 3;
  const auto lat1 = DeskGroup::lattice(mb.r1()), lat2 = DeskGroup::lattice(mb.r2());
  const auto xs1 = test_elements(lat1, 23), xs2 = test_elements(lat2, 29);
  for (int side = 1; side <= 2; ++side) {
    const std::string id = side == 1 ? "coincidence(Psi1)" : "coincidence(Psi2)";
    auto d = [&](const Elem& x1, const Elem& x2) {
      Elem other = side == 1 ? t1.tau(x1, mb.M2.v_of(x2)) : t2.tau(mb.M1.v_of(x1), x2);
      return T.sub(t.tau(x1, x2), other);
    };
    for (const auto& x1 : xs1)
      for (const auto& x2 : xs2) {
        for (const auto& y1 : xs1)
          if (T.add(d(x1, x2), d(y1, x2)) != d(lat1.add(x1, y1), x2)) out.fail(id, {x1, y1, x2});
        for (const auto& y2 : xs2)
          if (T.add(d(x1, x2), d(x1, y2)) != d(x1, lat2.add(x2, y2))) out.fail(id, {x1, x2, y2});
      }
  }

  const IntMatrix L = mb.lambda_matrix();
  const std::size_t r1 = static_cast<std::size_t>(mb.r1()), r2 = static_cast<std::size_t>(mb.r2());
  detail::check_lambda_square(mb, out);
  if (poincare) {
    const auto& psi = mb.M1.data().psi;
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t j = 0; j < r2; ++j)
        if (mb.psi_at(i, j) != Elem{psi(i, j)})
          out.fail("poincare pairing", {Elem{static_cast<std::int64_t>(i + 1)}, Elem{static_cast<std::int64_t>(j + 1)}});
    if (mb.M1.has_abelian() && mb.B.mode != "weil") {
        MotiveBiextension ref = mb;
        ref.B = BiextTables{"weil", {}, {}};
        const BiextCocycle W = cocycle_of(ref);
        const auto as = test_elements(B.P, 31), bs = test_elements(B.Q, 37);
        for (const auto& a1 : as)
          for (const auto& a2 : as)
            for (const auto& b : bs)
              if (B.phi(a1, a2, b) != W.phi(a1, a2, b)) out.fail("poincare cocycle", {a1, a2, b});
        for (const auto& a : as)
          for (const auto& b1 : bs)
            for (const auto& b2 : bs)
              if (B.psi(a, b1, b2) != W.psi(a, b1, b2)) out.fail("poincare cocycle", {a, b1, b2});
    }
  }
  if (mb.kind == 7 && mb.endo.rows() * mb.endo.cols() != 0) {
    const IntMatrix LE = L * mb.endo;
    for (std::size_t c = 0; c < L.cols(); ++c)
      for (std::size_t r = 0; r < L.rows(); ++r)
        if (LE(r, c) != L(r, c)) {
          out.fail("diagram(7)", {Elem{static_cast<std::int64_t>(c / r2 + 1)}, Elem{static_cast<std::int64_t>(c % r2 + 1)}});
          break;
        }
  }
  report.merge(out.take());
  return report;
}

class VerificationFailed : public std::runtime_error {
 public:
  explicit VerificationFailed(VerificationReport r)
      : std::runtime_error("verification failed:\n" + r.to_string()), report_(std::move(r)) {}
  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

inline OneMotive unit_torus_motive(const PrimeField& F) {
  OneMotiveData d;
  d.name = "Z(1)";
  d.ydual_rank = 1;
  d.field = F;
  d.vstar = {Elem{}};
  return OneMotive::from_seven_tuple(d);
}

/// Anchors of Psi1 (per X1 basis vector) and Psi2 (per X2 basis vector) that
/// trivialize the torsion-side cocycles of B.
inline void solve_partial_trivializations(MotiveBiextension& mb) {
  const BiextCocycle B = cocycle_of(mb);
  const auto& F = mb.M1.field();
  mb.Psi1.clear();
  mb.Psi2.clear();
  for (int i = 0; i < mb.r1(); ++i) {
    Elem a = mb.M1.v_of(OneMotive::unit(mb.r1(), i));
    auto tau = detail::trivialize_on_finite(B.Q, B.G, F, [B, a](const Elem& b1, const Elem& b2) { return B.psi(a, b1, b2); },
                                            "Psi1 anchor for x_" + std::to_string(i + 1));
    for (const auto& b : B.Q.elements()) {
      Elem val = tau(b);
      if (val != B.G.zero()) mb.Psi1[{static_cast<std::size_t>(i), b}] = val;
    }
  }
  for (int j = 0; j < mb.r2(); ++j) {
    Elem q = mb.M2.v_of(OneMotive::unit(mb.r2(), j));
    auto tau = detail::trivialize_on_finite(B.P, B.G, F, [B, q](const Elem& a1, const Elem& a2) { return B.phi(a1, a2, q); },
                                            "Psi2 anchor for y_" + std::to_string(j + 1));
    for (const auto& a : B.P.elements()) {
      Elem val = tau(a);
      if (val != B.G.zero()) mb.Psi2[{a, static_cast<std::size_t>(j)}] = val;
    }
  }
}

/// Poincare biextension of (M, M*) by Z(1) at torsion level n (0 keeps the
/// level of M).
inline MotiveBiextension poincare_of_motive(const OneMotive& M, std::int64_t n = 0) {
  OneMotiveData d = M.data();
  if (n > 0 && !d.curves.empty()) d.torsion_n = n;
  MotiveBiextension mb;
  mb.M1 = OneMotive::from_seven_tuple(d);
  mb.M2 = cartier_dual(mb.M1);
  mb.M3 = unit_torus_motive(d.field);
  mb.name = "P(" + d.name + ")";
  if (mb.M1.has_abelian()) {
    mb.kind = d.x_rank == 0 && d.ydual_rank == 0 ? 1 : 2;
    mb.B.mode = "weil";
    solve_partial_trivializations(mb);
  } else {
    mb.kind = 3;
  }
  if (d.x_rank * d.ydual_rank > 0) {
    mb.Psi.assign(static_cast<std::size_t>(d.x_rank), std::vector<Elem>(static_cast<std::size_t>(d.ydual_rank)));
    for (int i = 0; i < d.x_rank; ++i)
      for (int j = 0; j < d.ydual_rank; ++j) mb.Psi[i][j] = Elem{d.psi(i, j)};
  }
  return mb;
}

/// Inputs of the worked shapes 4-7: a motive M, a target [V -> W(1)] or
/// [V -> A'], and the data (B, Psi1, Psi, lambda, endo) the shape allows.
struct ExampleInputs {
  OneMotive M;
  OneMotive target;
  BiextTables B;
  std::map<std::pair<std::size_t, Elem>, Elem> Psi1;
  std::vector<std::vector<Elem>> Psi;
  IntMatrix lambda;
  IntMatrix endo;
};

inline MotiveBiextension example_biextension(int kind, const ExampleInputs& in, const std::string& name = {}) {
  if (kind < 4 || kind > 7) throw ValidationError("example kinds are 4, 5, 6 and 7");
  MotiveBiextension mb;
  mb.name = name;
  mb.kind = kind;
  mb.M1 = in.M;
  mb.M2 = cartier_dual(in.M);
  mb.M3 = in.target;
  mb.lambda = in.lambda;
  if (kind == 4 || kind == 6) mb.Psi = in.Psi;
  if (kind == 6) {
    mb.B = in.B;
    mb.Psi1 = in.Psi1;
    if (mb.Psi1.empty()) solve_partial_trivializations(mb);
  } else if (in.B.mode != "zero" || !in.Psi1.empty()) {
    throw ValidationError("shape mismatch: kind " + std::to_string(kind) + " has trivial B");
  }
  if (kind == 7) mb.endo = in.endo;
  if ((kind == 5 || kind == 7) && !in.Psi.empty())
    throw ValidationError("shape mismatch: kind " + std::to_string(kind) + " has no torus-valued Psi");
  auto report = verify_motive_biextension(mb);
  if (!report.ok()) throw VerificationFailed(report);
  return mb;
}

/// iota_{3*} (pi_1, pi_2)^* B for semi-abelian point groups G1, G2, G3 over
/// the torsion ranges of B.
inline BiextCocycle push_pull_translate(const BiextCocycle& B, const DeskGroup& G1, const DeskGroup& G2, const DeskGroup& G3) {
  auto pi1 = semiabelian_projection(G1), pi2 = semiabelian_projection(G2);
  auto iota = semiabelian_inclusion(G3);
  if (pi1.target.describe() != B.P.describe() || pi2.target.describe() != B.Q.describe())
    throw ValidationError("range mismatch: B is over (" + B.P.describe() + ", " + B.Q.describe() + "), the groups project to (" +
                          pi1.target.describe() + ", " + pi2.target.describe() + ")");
  if (iota.source.describe() != B.G.describe())
    throw ValidationError("range mismatch: B takes values in " + B.G.describe() + ", G3 has torus " + iota.source.describe());
  return pushforward(pullback(B, pi1, pi2), iota);
}

/// Biextension of (P, Ydual = Z^r) by G_m  ->  biextension of (P, Z) by Y(1) = G_m^r.
inline BiextCocycle tensor_with_cocharacters(const BiextCocycle& B) {
  if (B.Q.kind() != "lattice") throw ValidationError("second factor must be the character lattice Ydual");
  const int r = static_cast<int>(B.Q.zero().size());
  auto* torus = dynamic_cast<const detail::TorusGroup*>(&B.G.impl());
  if (!torus || B.G.zero().size() != 1) throw ValidationError("values must be points of a rank-1 torus");
  const DeskGroup Y1 = DeskGroup::torus(torus->field(), r);
  auto scaled = [r](std::int64_t k, int j) {
    Elem y(static_cast<std::size_t>(r), 0);
    y[static_cast<std::size_t>(j)] = k;
    return y;
  };
  return {B.P, DeskGroup::lattice(1), Y1,
          [B, r, scaled](const Elem& p1, const Elem& p2, const Elem& k) {
            Elem out;
            for (int j = 0; j < r; ++j) out.push_back(B.phi(p1, p2, scaled(k[0], j))[0]);
            return out;
          },
          [B, r, scaled](const Elem& p, const Elem& k1, const Elem& k2) {
            Elem out;
            for (int j = 0; j < r; ++j) out.push_back(B.psi(p, scaled(k1[0], j), scaled(k2[0], j))[0]);
            return out;
          }};
}

/// Inverse direction: (P, Z) by G_m^r  ->  (P, Z^r) by G_m, summing the coordinates.
inline BiextCocycle untensor_cocharacters(const BiextCocycle& B) {
  if (B.Q.kind() != "lattice" || B.Q.zero().size() != 1) throw ValidationError("second factor must be Z");
  auto* torus = dynamic_cast<const detail::TorusGroup*>(&B.G.impl());
  if (!torus) throw ValidationError("values must be points of a torus");
  const int r = static_cast<int>(B.G.zero().size());
  const DeskGroup Gm = DeskGroup::torus(torus->field(), 1);
  const PrimeField F = torus->field();
  return {B.P, DeskGroup::lattice(r), Gm,
          [B, r, F](const Elem& p1, const Elem& p2, const Elem& y) {
            std::int64_t acc = 1;
            for (int j = 0; j < r; ++j) acc = F.mul(acc, B.phi(p1, p2, Elem{y[static_cast<std::size_t>(j)]})[static_cast<std::size_t>(j)]);
            return Elem{acc};
          },
          [B, r, F](const Elem& p, const Elem& y1, const Elem& y2) {
            std::int64_t acc = 1;
            for (int j = 0; j < r; ++j) {
              const auto J = static_cast<std::size_t>(j);
              acc = F.mul(acc, B.psi(p, Elem{y1[J]}, Elem{y2[J]})[J]);
            }
            return Elem{acc};
          }};
}

/// psi -> psi (x) Y on trivializations, and back.
inline Trivialization tensor_with_cocharacters(const Trivialization& t, int r) {
  return {[t, r](const Elem& p, const Elem& k) {
    Elem out;
    for (int j = 0; j < r; ++j) {
      Elem y(static_cast<std::size_t>(r), 0);
      y[static_cast<std::size_t>(j)] = k[0];
      out.push_back(t.tau(p, y)[0]);
    }
    return out;
  }};
}

inline Trivialization untensor_cocharacters(const Trivialization& t, const PrimeField& F) {
  return {[t, F](const Elem& p, const Elem& y) {
    std::int64_t acc = 1;
    for (std::size_t j = 0; j < y.size(); ++j) acc = F.mul(acc, t.tau(p, Elem{y[j]})[j]);
    return Elem{acc};
  }};
}

/// t -> (prod_k t_k^{fT(j,k)})_j on torus points.
inline Elem apply_torus_map(const LatticeMap& fT, const PrimeField& F, const Elem& t) {
  Elem out;
  const auto& m = fT.matrix();
  for (std::size_t j = 0; j < m.rows(); ++j) {
    std::int64_t acc = 1;
    for (std::size_t k = 0; k < m.cols(); ++k) {
      std::int64_t e = m(j, k);
      acc = F.mul(acc, e >= 0 ? F.pow(t[k], e) : F.pow(F.inv(t[k]), -e));
    }
    out.push_back(acc);
  }
  return out;
}

/// Morphism of biextensions: motive morphisms (g_i, f_i) on each factor, a
/// correction F on A1[n] x A2[n] with f3_* B - (f1, f2)^* B' = delta F, and
/// transporters Upsilon1, Upsilon2, Upsilon for the three trivializations.
/// Missing table entries are zero; Upsilon is extended biadditively from
/// generator pairs.
struct BiextMorphismData {
  MotiveMorphism m1, m2, m3;
  std::map<std::pair<Elem, Elem>, Elem> F;
  std::map<std::pair<std::size_t, Elem>, Elem> upsilon1;  // (e_i, b)
  std::map<std::pair<Elem, std::size_t>, Elem> upsilon2;  // (a, f_j)
  std::vector<std::vector<Elem>> upsilon;                 // (e_i, f_j); empty means zero

  static BiextMorphismData identity(const MotiveBiextension& mb) {
    return {MotiveMorphism::identity(mb.M1), MotiveMorphism::identity(mb.M2), MotiveMorphism::identity(mb.M3), {}, {}, {}, {}};
  }
};

inline VerificationReport verify_biext_morphism(const MotiveBiextension& src, const MotiveBiextension& dst,
                                                const BiextMorphismData& d) {
  validate_biextension(src);
  validate_biextension(dst);
  detail::FailureCollector out;
  const PrimeField& Fp = dst.M3.field();
  const DeskGroup T = dst.target();
  auto ix = [](std::size_t i) { return Elem{static_cast<std::int64_t>(i + 1)}; };

  const std::pair<const MotiveMorphism*, std::pair<const OneMotive*, const OneMotive*>> levels[] = {
      {&d.m1, {&src.M1, &dst.M1}}, {&d.m2, {&src.M2, &dst.M2}}, {&d.m3, {&src.M3, &dst.M3}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& [m, pair] = levels[k];
    const auto& f = *m;
    const auto& d1 = pair.first->data();
    const auto& d2 = pair.second->data();
    if (f.fX.source().rank != d1.x_rank || f.fX.target().rank != d2.x_rank || f.fT.source().rank != d1.ydual_rank ||
        f.fT.target().rank != d2.ydual_rank || f.fA.rows() != d2.curves.size() || f.fA.cols() != d1.curves.size())
      throw ValidationError("shape mismatch: morphism of level " + std::to_string(k + 1) + " does not fit the motives");
    if (k < 2)
      if (auto w = morphism_failure(f, *pair.first, *pair.second)) out.fail("motive morphism " + std::to_string(k + 1), {ix(0)});
  }

  const BiextCocycle B = cocycle_of(src), B2 = cocycle_of(dst);
  auto f1 = [&](const Elem& a) { return apply_abelian_map(d.m1.fA, src.M1, dst.M1, a); };
  auto f2 = [&](const Elem& a) { return apply_abelian_map(d.m2.fA, src.M2, dst.M2, a); };
  auto f3 = [&](const Elem& t) { return apply_torus_map(d.m3.fT, Fp, t); };
  auto Fc = [&](const Elem& a, const Elem& b) {
    auto it = d.F.find({a, b});
    return it == d.F.end() ? T.zero() : it->second;
  };
  for (const auto& [k, v] : d.F)
    if (!B.P.contains(k.first) || !B.Q.contains(k.second) || !T.contains(v)) throw ValidationError("F entry outside A1[n] x A2[n] -> Y3'(1)");

  // f3_* B - (f1, f2)^* B' = delta F
  const auto as = test_elements(B.P, 41), bs = test_elements(B.Q, 43);
  for (const auto& a1 : as)
    for (const auto& a2 : as)
      for (const auto& b : bs) {
        Elem dF = T.sub(T.add(Fc(a1, b), Fc(a2, b)), Fc(B.P.add(a1, a2), b));
        if (T.sub(f3(B.phi(a1, a2, b)), B2.phi(f1(a1), f1(a2), f2(b))) != dF) out.fail("F-level", {a1, a2, b});
      }
  for (const auto& a : as)
    for (const auto& b1 : bs)
      for (const auto& b2 : bs) {
        Elem dF = T.sub(T.add(Fc(a, b1), Fc(a, b2)), Fc(a, B.Q.add(b1, b2)));
        if (T.sub(f3(B.psi(a, b1, b2)), B2.psi(f1(a), f2(b1), f2(b2))) != dF) out.fail("F-level", {a, b1, b2});
      }

  // f3 Psi - Psi' o (g, f) - F o (v, v) = Upsilon, on generators of the lattice variables.
  const auto s1 = psi1_trivialization(src), s2 = psi2_trivialization(src), s = psi_trivialization(src);
  const auto t1 = psi1_trivialization(dst), t2 = psi2_trivialization(dst), t = psi_trivialization(dst);
  const std::size_t r1 = static_cast<std::size_t>(src.r1()), r2 = static_cast<std::size_t>(src.r2());
  auto up1 = [&](std::size_t i, const Elem& b) {
    auto it = d.upsilon1.find({i, b});
    return it == d.upsilon1.end() ? T.zero() : it->second;
  };
  auto up2 = [&](const Elem& a, std::size_t j) {
    auto it = d.upsilon2.find({a, j});
    return it == d.upsilon2.end() ? T.zero() : it->second;
  };
  auto up = [&](std::size_t i, std::size_t j) { return d.upsilon.empty() ? T.zero() : d.upsilon[i][j]; };
  for (std::size_t i = 0; i < r1; ++i) {
    IntVector x = OneMotive::unit(src.r1(), static_cast<int>(i));
    for (const auto& b : bs) {
      Elem lhs = T.sub(T.sub(f3(s1.tau(x, b)), t1.tau(d.m1.fX(x), f2(b))), Fc(src.M1.v_of(x), b));
      if (lhs != up1(i, b)) out.fail("Upsilon-level", {ix(i), b});
    }
  }
  for (std::size_t j = 0; j < r2; ++j) {
    IntVector y = OneMotive::unit(src.r2(), static_cast<int>(j));
    for (const auto& a : as) {
      Elem lhs = T.sub(T.sub(f3(s2.tau(a, y)), t2.tau(f1(a), d.m2.fX(y))), Fc(a, src.M2.v_of(y)));
      if (lhs != up2(a, j)) out.fail("Upsilon-level", {a, ix(j)});
    }
  }
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < r2; ++j) {
      IntVector x = OneMotive::unit(src.r1(), static_cast<int>(i)), y = OneMotive::unit(src.r2(), static_cast<int>(j));
      Elem lhs = T.sub(T.sub(f3(s.tau(x, y)), t.tau(d.m1.fX(x), d.m2.fX(y))), Fc(src.M1.v_of(x), src.M2.v_of(y)));
      if (lhs != up(i, j)) out.fail("Upsilon-level", {ix(i), ix(j)});
    }

  // lambda' o (g1 (x) g2) = g3 o lambda
  const IntMatrix lhs = dst.lambda_matrix() * kronecker(d.m1.fX.matrix(), d.m2.fX.matrix());
  const IntMatrix rhs = d.m3.fX.matrix() * src.lambda_matrix();
  for (std::size_t c = 0; c < lhs.cols(); ++c)
    for (std::size_t r = 0; r < lhs.rows(); ++r)
      if (lhs(r, c) != rhs(r, c)) {
        out.fail("lambda-square", {ix(c / r2), ix(c % r2)});
        break;
      }

  // u3' o g3 = f3 o u3 on generators of X3
  const int x3 = src.M3.data().x_rank;
  for (int i = 0; i < x3; ++i) {
    IntVector x = OneMotive::unit(x3, i);
    bool ok = apply_abelian_map(d.m3.fA, src.M3, dst.M3, src.M3.v_of(x)) == dst.M3.v_of(d.m3.fX(x)) &&
              f3(psi3_tensor_y3(src.M3, x)) == psi3_tensor_y3(dst.M3, d.m3.fX(x));
    if (!ok) out.fail("u3-square", {ix(static_cast<std::size_t>(i))});
  }
  return out.take();
}

/// Biext^1(M1, M2; M3) for torus-only M1, M2 and a torus-free M3 = [V -> A3].
/// Every lambda: X1 (x) X2 -> V is verified as a biextension; with Y3 = 0 the
/// transporters are trivial, so there are no relations.
inline GroupDescription biext1_of_motives(const OneMotive& M1, const OneMotive& M2, const OneMotive& M3) {
  if (!M1.is_torus_only() || !M2.is_torus_only() || M3.data().ydual_rank != 0)
    throw DeskLimitError("Biext^1 of motives is computed for torus-only factors into a torus-free target");
  if (!(M1.field() == M2.field()) || !(M1.field() == M3.field())) throw ValidationError("motives over different fields");
  const std::size_t ab = static_cast<std::size_t>(M1.data().x_rank * M2.data().x_rank);
  const std::size_t c = static_cast<std::size_t>(M3.data().x_rank);
  const std::size_t n = checked::mul(static_cast<std::int64_t>(ab), static_cast<std::int64_t>(c));
  MotiveBiextension mb;
  mb.M1 = M1;
  mb.M2 = M2;
  mb.M3 = M3;
  auto base = verify_motive_biextension(mb);
  if (!base.ok()) throw VerificationFailed(base);
  // only the lambda square depends on lambda
  IntMatrix gens(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    mb.lambda = IntMatrix(c, ab);
    mb.lambda(k / ab, k % ab) = 1;
    validate_biextension(mb);
    detail::FailureCollector out;
    detail::check_lambda_square(mb, out);
    VerificationReport report;
    report.merge(out.take());
    if (!report.ok()) throw VerificationFailed(report);
    gens(k, k) = 1;
  }
  return lattice_quotient(gens, IntMatrix(n, 0));
}

}  // namespace motivecalc
