#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motivecalc/abelian.hpp"
#include "motivecalc/semiabelian.hpp"

namespace motivecalc {

/// Raw 7-tuple (X, Y^vee, A, A*, v, v*, psi). A and A* are the same product
/// of elliptic curves; `abelian_is_dual` records that the abelian part plays
/// the role of A* (it flips under Cartier duality).
struct OneMotiveData {
  std::string name;
  int x_rank = 0;
  int ydual_rank = 0;
  PrimeField field;
  std::vector<EllipticCurve> curves;
  std::int64_t torsion_n = 0;
  std::vector<Elem> v;      // images of the basis of X in A[n]
  std::vector<Elem> vstar;  // images of the basis of Y^vee in A*[n]
  IntMatrix psi;            // psi(x_i, y_j) in F_p^*, shape x_rank x ydual_rank
  bool abelian_is_dual = false;

  friend bool operator==(const OneMotiveData& a, const OneMotiveData& b) {
    return a.name == b.name && a.x_rank == b.x_rank && a.ydual_rank == b.ydual_rank && a.field == b.field &&
           a.curves == b.curves && a.torsion_n == b.torsion_n && a.v == b.v && a.vstar == b.vstar &&
           a.psi == b.psi && a.abelian_is_dual == b.abelian_is_dual;
  }
};

struct WeightGraded {
  int gr0_rank = 0;
  int grm1_dim = 0;
  int grm2_rank = 0;
  friend bool operator==(const WeightGraded&, const WeightGraded&) = default;
};

/// Value at `target` of a map f: Z^k -> F_p^* satisfying
/// f(c + s) = f(c) f(s) zeta^{-coc(c, s)}, from its values on basis vectors.
inline std::int64_t extend_along_path(const IntVector& target, const std::function<std::int64_t(std::size_t)>& basis_value,
                                      const std::function<std::int64_t(const IntVector&, const IntVector&)>& coc,
                                      const AbelianTorsion& A, const PrimeField& F) {
  IntVector cur(target.size(), 0);
  std::int64_t val = 1;
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k] == 0) continue;
    IntVector e(target.size(), 0), s(target.size(), 0);
    e[k] = 1;
    const std::int64_t sign = target[k] > 0 ? 1 : -1;
    s[k] = sign;
    std::int64_t fs = basis_value(k);
    if (sign < 0) {
      IntVector me(target.size(), 0);
      me[k] = -1;
      fs = F.mul(A.zeta_pow(coc(e, me)), F.inv(fs));
    }
    for (std::int64_t t = 0; t < sign * target[k]; ++t) {
      val = F.mul(F.mul(val, fs), A.zeta_pow(-coc(cur, s)));
      cur[k] += sign;
    }
  }
  return val;
}

class OneMotive {
 public:
  OneMotive() : OneMotive(OneMotiveData{}) {}

  /// Validates the 7-tuple and materializes the derived data.
  static OneMotive from_seven_tuple(OneMotiveData d) { return OneMotive(std::move(d)); }

  const OneMotiveData& data() const { return d_; }
  const std::string& name() const { return d_.name; }
  Lattice X() const { return Lattice(d_.x_rank, "X"); }
  Lattice Ydual() const { return Lattice(d_.ydual_rank, "Ydual"); }
  const PrimeField& field() const { return d_.field; }
  const AbelianTorsion& abelian() const { return A_; }
  bool has_abelian() const { return !d_.curves.empty(); }
  bool is_torus_only() const { return d_.curves.empty(); }
  DeskGroup torus_points() const { return DeskGroup::torus(d_.field, d_.ydual_rank); }

  Elem v_of(const IntVector& x) const { return combine(d_.v, x); }
  Elem vstar_of(const IntVector& y) const { return combine(d_.vstar, y); }

  /// Cocycle pair (exponents of zeta) of the Poincare biextension on (A, A*).
  std::int64_t pairing_phi(const Elem& a1, const Elem& a2, const Elem& b) const {
    return d_.abelian_is_dual ? 0 : A_.carry_cocycle(a1, a2, b);
  }
  std::int64_t pairing_psi(const Elem& a, const Elem& b1, const Elem& b2) const {
    return d_.abelian_is_dual ? A_.carry_cocycle(b1, b2, a) : 0;
  }

  /// psi(x, y) extended from basis pairs as a trivialization of (v, v*)^* P.
  std::int64_t psi_value(const IntVector& x, const IntVector& y) const {
    const auto& F = d_.field;
    auto row = [&](std::size_t i) {
      IntVector ei(static_cast<std::size_t>(d_.x_rank), 0);
      ei[i] = 1;
      Elem vi = v_of(ei);
      return extend_along_path(
          y, [&](std::size_t j) { return d_.psi(i, j); },
          [&](const IntVector& c, const IntVector& s) { return pairing_psi(vi, vstar_of(c), vstar_of(s)); }, A_, F);
    };
    Elem vy = vstar_of(y);
    return extend_along_path(
        x, row, [&](const IntVector& c, const IntVector& s) { return pairing_phi(v_of(c), v_of(s), vy); }, A_, F);
  }

  /// u(x) = (v(x), (psi(x, y_j))_j) as a point of G.
  Elem u(const IntVector& x) const {
    Elem out = v_of(x);
    for (int j = 0; j < d_.ydual_rank; ++j) out.push_back(psi_value(x, unit(d_.ydual_rank, j)));
    return out;
  }

  /// G as an extension of A[n] by Y(1) points with factor set c_j = zeta^{-phi(a, a'; v*(y_j))}.
  SemiAbelianModel semiabelian_model() const {
    auto self = *this;
    return {A_.group(), torus_points(), [self](const Elem& a1, const Elem& a2) {
              Elem t;
              for (int j = 0; j < self.d_.ydual_rank; ++j)
                t.push_back(self.A_.zeta_pow(-self.pairing_phi(a1, a2, self.vstar_of(unit(self.d_.ydual_rank, j)))));
              return t;
            }};
  }

  /// Twisted addition of G points, without enumerating G.
  Elem g_add(const Elem& p, const Elem& q) const {
    const std::size_t na = A_.group().zero().size();
    Elem a1(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(na)), a2(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(na));
    Elem out = A_.group().add(a1, a2);
    for (int j = 0; j < d_.ydual_rank; ++j) {
      std::size_t k = na + static_cast<std::size_t>(j);
      std::int64_t c = A_.zeta_pow(-pairing_phi(a1, a2, vstar_of(unit(d_.ydual_rank, j))));
      out.push_back(d_.field.mul(d_.field.mul(p[k], q[k]), c));
    }
    return out;
  }

  /// Range on which psi-compatibility is certified.
  std::string certified_range() const {
    if (!has_abelian()) return "all of X x Ydual (no abelian part)";
    return "A[" + std::to_string(d_.torsion_n) + "]: basis pairs and one random sample";
  }

  friend bool operator==(const OneMotive& a, const OneMotive& b) { return a.d_ == b.d_; }

  static IntVector unit(int n, int i) {
    IntVector e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return e;
  }

 private:
  explicit OneMotive(OneMotiveData d) : d_(std::move(d)) {
    auto fail = [&](const std::string& kind, const std::string& what) {
      throw ValidationError(kind + (d_.name.empty() ? "" : " in motive " + d_.name) + ": " + what);
    };
    if (d_.x_rank < 0 || d_.ydual_rank < 0) fail("dimension mismatch", "negative lattice rank");
    if (d_.v.size() != static_cast<std::size_t>(d_.x_rank))
      fail("dimension mismatch", "v has " + std::to_string(d_.v.size()) + " images for rank X = " + std::to_string(d_.x_rank));
    if (d_.vstar.size() != static_cast<std::size_t>(d_.ydual_rank))
      fail("dimension mismatch",
           "vstar has " + std::to_string(d_.vstar.size()) + " images for rank Ydual = " + std::to_string(d_.ydual_rank));
    if (d_.psi.rows() != static_cast<std::size_t>(d_.x_rank) || d_.psi.cols() != static_cast<std::size_t>(d_.ydual_rank)) {
      if (d_.psi.rows() * d_.psi.cols() == 0 && d_.x_rank * d_.ydual_rank == 0)
        d_.psi = IntMatrix(static_cast<std::size_t>(d_.x_rank), static_cast<std::size_t>(d_.ydual_rank));
      else
        fail("dimension mismatch", "psi must be " + std::to_string(d_.x_rank) + "x" + std::to_string(d_.ydual_rank));
    }
    if (d_.curves.empty()) d_.torsion_n = 0;
    A_ = AbelianTorsion(d_.curves, d_.torsion_n, d_.field);
    const DeskGroup& At = A_.group();
    for (std::size_t i = 0; i < d_.v.size(); ++i)
      if (!At.contains(d_.v[i]))
        fail("non-homomorphic v", "image " + elem_to_string(d_.v[i]) + " of x_" + std::to_string(i + 1) + " is not in " +
                                      (has_abelian() ? "A[" + std::to_string(d_.torsion_n) + "]" : "A = 0"));
    for (std::size_t i = 0; i < d_.vstar.size(); ++i)
      if (!At.contains(d_.vstar[i]))
        fail("non-homomorphic vstar", "image " + elem_to_string(d_.vstar[i]) + " of y_" + std::to_string(i + 1) +
                                          " is not in " + (has_abelian() ? "A*[" + std::to_string(d_.torsion_n) + "]" : "A* = 0"));
    for (std::size_t i = 0; i < d_.psi.rows(); ++i)
      for (std::size_t j = 0; j < d_.psi.cols(); ++j) {
        std::int64_t val = mod(d_.psi(i, j), d_.field.p());
        if (val == 0)
          fail("psi-incompatible", "psi(x_" + std::to_string(i + 1) + ", y_" + std::to_string(j + 1) + ") = 0 is not a unit");
        d_.psi(i, j) = val;
      }
    auto vhom = GroupHom{DeskGroup::lattice(d_.x_rank), At, [this](const Elem& x) { return v_of(x); }};
    if (auto w = homomorphism_failure(vhom)) fail("non-homomorphic v", *w);
    auto vshom = GroupHom{DeskGroup::lattice(d_.ydual_rank), At, [this](const Elem& y) { return vstar_of(y); }};
    if (auto w = homomorphism_failure(vshom)) fail("non-homomorphic vstar", *w);
    if (auto w = psi_failure()) fail("psi-incompatible", *w);
  }

  Elem combine(const std::vector<Elem>& images, const IntVector& c) const {
    const DeskGroup& At = A_.group();
    Elem acc = At.zero();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i]) acc = At.add(acc, At.mul(c[i], images[i]));
    return acc;
  }

  // Trivialization identities of the extended psi on basis pairs plus a sample.
  std::optional<std::string> psi_failure() const {
    const auto& F = d_.field;
    std::vector<IntVector> xs, ys;
    for (int i = 0; i < d_.x_rank; ++i) xs.push_back(unit(d_.x_rank, i));
    for (int j = 0; j < d_.ydual_rank; ++j) ys.push_back(unit(d_.ydual_rank, j));
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-2, 2);
    IntVector rx(static_cast<std::size_t>(d_.x_rank)), ry(static_cast<std::size_t>(d_.ydual_rank));
    for (auto& t : rx) t = c(rng);
    for (auto& t : ry) t = c(rng);
    if (d_.x_rank) xs.push_back(rx);
    if (d_.ydual_rank) ys.push_back(ry);
    auto add = [](IntVector a, const IntVector& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
      return a;
    };
    for (const auto& x1 : xs)
      for (const auto& x2 : xs)
        for (const auto& y : ys) {
          std::int64_t lhs = psi_value(add(x1, x2), y);
          std::int64_t rhs = F.mul(F.mul(psi_value(x1, y), psi_value(x2, y)),
                                   A_.zeta_pow(-pairing_phi(v_of(x1), v_of(x2), vstar_of(y))));
          if (lhs != rhs) return "first-law trivialization fails at x=" + elem_to_string(x1) + "+" + elem_to_string(x2);
        }
    for (const auto& x : xs)
      for (const auto& y1 : ys)
        for (const auto& y2 : ys) {
          std::int64_t lhs = psi_value(x, add(y1, y2));
          std::int64_t rhs = F.mul(F.mul(psi_value(x, y1), psi_value(x, y2)),
                                   A_.zeta_pow(-pairing_psi(v_of(x), vstar_of(y1), vstar_of(y2))));
          if (lhs != rhs) return "second-law trivialization fails at y=" + elem_to_string(y1) + "+" + elem_to_string(y2);
        }
    return std::nullopt;
  }

  OneMotiveData d_;
  AbelianTorsion A_;
};

inline OneMotive motive_from_seven_tuple(OneMotiveData d) { return OneMotive::from_seven_tuple(std::move(d)); }

inline WeightGraded weight_graded(const OneMotive& M) {
  return {M.data().x_rank, static_cast<int>(M.data().curves.size()), M.data().ydual_rank};
}

/// (Y^vee, X, A*, A, v*, v, psi o s).
inline OneMotive cartier_dual(const OneMotive& M) {
  OneMotiveData d = M.data();
  std::swap(d.x_rank, d.ydual_rank);
  std::swap(d.v, d.vstar);
  d.psi = d.psi.transpose();
  d.abelian_is_dual = !d.abelian_is_dual;
  return OneMotive::from_seven_tuple(std::move(d));
}

/// Morphism of 1-motives on desk models: lattice map on X, integer
/// multipliers between curve factors, and a cocharacter map on the tori.
struct MotiveMorphism {
  LatticeMap fX;
  IntMatrix fA;  // (#curves of target) x (#curves of source)
  LatticeMap fT; // Y1 -> Y2 on cocharacters

  static MotiveMorphism identity(const OneMotive& M) {
    return {LatticeMap::identity(M.X()), IntMatrix::identity(M.data().curves.size()),
            LatticeMap::identity(Lattice(M.data().ydual_rank))};
  }

  /// this o inner
  MotiveMorphism compose(const MotiveMorphism& inner) const {
    return {fX.compose(inner.fX), fA * inner.fA, fT.compose(inner.fT)};
  }
};

/// Image of a point of A1[n] under the curve multipliers.
inline Elem apply_abelian_map(const IntMatrix& fA, const OneMotive& M1, const OneMotive& M2, const Elem& a) {
  const auto& c1 = M1.data().curves;
  const auto& c2 = M2.data().curves;
  Elem out;
  for (std::size_t k = 0; k < c2.size(); ++k) {
    CurvePoint acc = CurvePoint::at_infinity();
    for (std::size_t l = 0; l < c1.size(); ++l) {
      if (fA(k, l) == 0) continue;
      auto P = detail::elem_curve(Elem(a.begin() + static_cast<std::ptrdiff_t>(3 * l), a.begin() + static_cast<std::ptrdiff_t>(3 * l + 3)));
      acc = c2[k].add(acc, c2[k].mul(fA(k, l), P));
    }
    auto e = detail::curve_elem(acc);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

/// First commutation failure fG(u1(x)) != u2(fX(x)) on basis vectors, if any.
inline std::optional<std::string> morphism_failure(const MotiveMorphism& f, const OneMotive& M1, const OneMotive& M2) {
  const auto& d1 = M1.data();
  const auto& d2 = M2.data();
  if (f.fX.source().rank != d1.x_rank || f.fX.target().rank != d2.x_rank) return std::string("fX has the wrong shape");
  if (f.fT.source().rank != d1.ydual_rank || f.fT.target().rank != d2.ydual_rank) return std::string("fT has the wrong shape");
  if (f.fA.rows() != d2.curves.size() || f.fA.cols() != d1.curves.size()) return std::string("fA has the wrong shape");
  for (std::size_t k = 0; k < d2.curves.size(); ++k)
    for (std::size_t l = 0; l < d1.curves.size(); ++l)
      if (f.fA(k, l) != 0 && !(d2.curves[k] == d1.curves[l]))
        return "fA(" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ") links different curves";
  if (!d1.curves.empty() && !d2.curves.empty() && d1.torsion_n != d2.torsion_n)
    return std::string("torsion levels differ");
  const auto& F = d2.field;
  for (int i = 0; i < d1.x_rank; ++i) {
    IntVector x = OneMotive::unit(d1.x_rank, i);
    IntVector fx = f.fX(x);
    if (apply_abelian_map(f.fA, M1, M2, M1.v_of(x)) != M2.v_of(fx))
      return "abelian component: fA(v1(x_" + std::to_string(i + 1) + ")) != v2(fX(x_" + std::to_string(i + 1) + "))";
    for (int j = 0; j < d2.ydual_rank; ++j) {
      std::int64_t want = 1;
      for (int k = 0; k < d1.ydual_rank; ++k) {
        std::int64_t e = f.fT.matrix()(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
        std::int64_t base = M1.psi_value(x, OneMotive::unit(d1.ydual_rank, k));
        want = F.mul(want, e >= 0 ? F.pow(base, e) : F.pow(F.inv(base), -e));
      }
      if (M2.psi_value(fx, OneMotive::unit(d2.ydual_rank, j)) != want)
        return "torus component " + std::to_string(j + 1) + ": fT(u1(x_" + std::to_string(i + 1) + ")) != u2(fX(x_" +
               std::to_string(i + 1) + "))";
    }
  }
  return std::nullopt;
}

struct IsogenyReport {
  bool isogeny = false;
  std::string diagnostic;
};

inline IsogenyReport is_isogeny(const MotiveMorphism& f, const OneMotive& M1, const OneMotive& M2) {
  if (auto w = morphism_failure(f, M1, M2)) throw ValidationError("not a morphism of 1-motives: " + *w);
  if (!is_lattice_isogeny_part(f.fX)) return {false, "fX is not injective with finite cokernel"};
  if (f.fT.source().rank != f.fT.target().rank || determinant(f.fT.matrix()) == 0)
    return {false, "torus component does not have finite kernel and full image"};
  if (f.fA.rows() != f.fA.cols() || determinant(f.fA) == 0)
    return {false, "abelian component is not an isogeny"};
  return {true, "isogeny"};
}

}  // namespace motivecalc
