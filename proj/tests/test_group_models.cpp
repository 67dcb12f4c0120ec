#include <gtest/gtest.h>

#include <random>
#include <set>

#include "motivecalc/desk_group.hpp"
#include "motivecalc/semiabelian.hpp"
#include "pairing_oracle.hpp"

using namespace motivecalc;

namespace {

const PrimeField F5(5);
const EllipticCurve E_x3x(F5, 1, 0);  // y^2 = x^3 + x
const EllipticCurve E_x31(F5, 0, 1);  // y^2 = x^3 + 1

void expect_group_axioms(const DeskGroup& G) {
  auto el = G.elements();
  ASSERT_LE(el.size(), 64u);
  ASSERT_EQ(static_cast<std::int64_t>(el.size()), G.order());
  std::set<Elem> all(el.begin(), el.end());
  for (const auto& a : el) {
    EXPECT_EQ(G.add(a, G.zero()), a);
    EXPECT_EQ(G.add(a, G.neg(a)), G.zero());
    for (const auto& b : el) {
      auto ab = G.add(a, b);
      EXPECT_TRUE(all.count(ab));
      EXPECT_EQ(ab, G.add(b, a));
      for (const auto& c : el) EXPECT_EQ(G.add(ab, c), G.add(a, G.add(b, c)));
    }
  }
}

}  // namespace

TEST(PrimeField, Validation) {
  EXPECT_THROW(PrimeField(2), ValidationError);
  EXPECT_THROW(PrimeField(9), ValidationError);
  EXPECT_THROW(PrimeField(10007), ValidationError);
  EXPECT_NO_THROW(PrimeField(9973));
}

TEST(Curve, Nonsingular) {
  EXPECT_THROW(EllipticCurve(F5, 0, 0), ValidationError);
  // 4a^3 + 27b^2 = 4*27 + 27*4 = 216 = 1 mod 5 for a=3,b=2.
  EXPECT_NO_THROW(EllipticCurve(F5, 3, 2));
}

TEST(Curve, AddExamples) {
  CurvePoint P = CurvePoint::affine(0, 0);
  EXPECT_EQ(curve_add(E_x3x, P, CurvePoint::at_infinity()), P);
  EXPECT_TRUE(curve_add(E_x3x, P, P).infinity);
  CurvePoint Q = CurvePoint::affine(2, 0);
  EXPECT_TRUE(curve_add(E_x3x, Q, E_x3x.neg(Q)).infinity);
  EXPECT_THROW(curve_add(E_x3x, CurvePoint::affine(1, 1), P), ValidationError);
}

TEST(Curve, BruteForceTableOfX3X) {
  // Points: x in {0..4} with x^3+x a square mod 5.
  std::vector<CurvePoint> pts{CurvePoint::at_infinity()};
  for (std::int64_t x = 0; x < 5; ++x)
    for (std::int64_t y = 0; y < 5; ++y)
      if ((y * y - x * x * x - x) % 5 == 0) pts.push_back(CurvePoint::affine(x, y));
  ASSERT_EQ(pts.size(), 4u);
  // Every affine point has y = 0, so all are 2-torsion and sums of distinct ones give the third.
  for (const auto& P : pts) EXPECT_TRUE(E_x3x.add(P, P).infinity);
  EXPECT_EQ(E_x3x.add(pts[1], pts[2]), pts[3]);
}

TEST(Curve, GroupStructure) {
  auto s = curve_group_structure(E_x3x);
  EXPECT_EQ(s.order, 4);
  EXPECT_EQ(s.invariants.invariant_factors(), (IntVector{2, 2}));
  auto t = curve_group_structure(E_x31);
  EXPECT_EQ(t.order, 6);
  // Independent count.
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < 5; ++x)
    for (std::int64_t y = 0; y < 5; ++y)
      if ((y * y - x * x * x - 1) % 5 == 0) ++count;
  EXPECT_EQ(t.order, count);
  for (std::int64_t p : {7, 11, 13, 31, 101}) {
    PrimeField F(p);
    for (std::int64_t a = 0; a < 4; ++a)
      for (std::int64_t b = 1; b < 4; ++b) {
        std::optional<EllipticCurve> E;
        try {
          E.emplace(F, a, b);
        } catch (const ValidationError&) {
          continue;
        }
        auto st = curve_group_structure(*E);
        EXPECT_EQ(st.invariants.order(), st.order);
        for (std::size_t i = 0; i < st.generators.size(); ++i) {
          std::int64_t o = E->order_of(st.generators[i], st.order);
          EXPECT_EQ(st.order % o, 0);
          EXPECT_EQ(o, st.invariants.invariant_factors()[i]);
        }
      }
  }
}

TEST(Curve, TorsionBasis) {
  auto b = torsion_basis(E_x3x, 2);
  ASSERT_TRUE(b.has_value());
  std::set<CurvePoint> two_torsion{CurvePoint::affine(0, 0), CurvePoint::affine(2, 0), CurvePoint::affine(3, 0)};
  EXPECT_TRUE(two_torsion.count(b->first));
  EXPECT_TRUE(two_torsion.count(b->second));
  EXPECT_FALSE(b->first == b->second);
  EXPECT_FALSE(torsion_basis(E_x31, 4).has_value());
  EXPECT_THROW(torsion_basis(E_x3x, 1), ValidationError);
}

TEST(Weil, WorkedExample) {
  auto P = CurvePoint::affine(0, 0), Q = CurvePoint::affine(2, 0);
  EXPECT_EQ(weil_pairing(E_x3x, 2, P, Q), 4);
  EXPECT_EQ(oracle::divisor_pairing(E_x3x, 2, P, Q), 4);
  EXPECT_EQ(weil_pairing(E_x3x, 2, P, P), 1);
}

TEST(Weil, PreconditionErrorsAreDistinct) {
  try {
    weil_pairing(E_x31, 2, CurvePoint::affine(0, 1), CurvePoint::affine(4, 0));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("not 2-torsion"), std::string::npos);
  }
  try {
    weil_pairing(E_x3x, 3, CurvePoint::at_infinity(), CurvePoint::at_infinity());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mu_3"), std::string::npos);
  }
}

namespace {

struct FullTorsionCase {
  EllipticCurve E;
  std::int64_t n;
};

std::vector<FullTorsionCase> full_torsion_cases() {
  std::vector<FullTorsionCase> out{{E_x3x, 2}};
  // Search p <= 200 for a curve with full rational 3-torsion and 3 | p-1.
  for (std::int64_t p = 7; p <= 200 && out.size() < 3; ++p) {
    if (!is_prime(p) || (p - 1) % 3) continue;
    PrimeField F(p);
    for (std::int64_t a = 0; a < p && out.size() < 3; ++a)
      for (std::int64_t b = 1; b < p && out.size() < 3; ++b) {
        std::optional<EllipticCurve> E;
        try {
          E.emplace(F, a, b);
        } catch (const ValidationError&) {
          continue;
        }
        if (E->point_count() % 9) continue;
        if (torsion_basis(*E, 3)) {
          out.push_back({*E, 3});
          break;
        }
      }
  }
  return out;
}

}  // namespace

TEST(Weil, BilinearAlternatingNondegenerate) {
  auto cases = full_torsion_cases();
  ASSERT_GE(cases.size(), 2u);
  EXPECT_EQ(cases[1].n, 3);
  for (const auto& c : cases) {
    const auto& E = c.E;
    auto G = DeskGroup::curve_torsion(E, c.n);
    auto pts = G.elements();
    ASSERT_EQ(static_cast<std::int64_t>(pts.size()), c.n * c.n);
    auto basis = torsion_basis(E, c.n);
    ASSERT_TRUE(basis);
    std::int64_t ebasis = weil_pairing(E, c.n, basis->first, basis->second);
    EXPECT_EQ(E.field().multiplicative_order(ebasis), c.n);
    for (const auto& a : pts)
      for (const auto& b : pts) {
        auto P = detail::elem_curve(a), Q = detail::elem_curve(b);
        std::int64_t e = weil_pairing(E, c.n, P, Q);
        EXPECT_EQ(E.field().pow(e, c.n), 1);
        EXPECT_EQ(e, oracle::divisor_pairing(E, c.n, P, Q)) << E.to_string() << " " << P.to_string() << Q.to_string();
        EXPECT_EQ(E.field().mul(e, weil_pairing(E, c.n, Q, P)), 1);
        for (const auto& d : pts) {
          auto R = detail::elem_curve(d);
          EXPECT_EQ(weil_pairing(E, c.n, E.add(P, R), Q), E.field().mul(e, weil_pairing(E, c.n, R, Q)));
        }
      }
    for (const auto& a : pts) EXPECT_EQ(weil_pairing(E, c.n, detail::elem_curve(a), detail::elem_curve(a)), 1);
  }
}

TEST(Weil, MatrixOnTwoTorsionIsTheAlternatingForm) {
  std::vector<CurvePoint> basis{CurvePoint::affine(0, 0), CurvePoint::affine(2, 0)};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_EQ(weil_pairing(E_x3x, 2, basis[i], basis[j]), i == j ? 1 : 4);
}

TEST(DeskGroup, AxiomsOnSmallGroups) {
  expect_group_axioms(DeskGroup::finite({2, 4}));
  expect_group_axioms(DeskGroup::finite({3, 3}));
  expect_group_axioms(DeskGroup::torus(PrimeField(7), 1));
  expect_group_axioms(DeskGroup::torus(PrimeField(5), 2));
  expect_group_axioms(DeskGroup::torus(PrimeField(13), 2, 3));
  expect_group_axioms(DeskGroup::curve(E_x31));
  expect_group_axioms(DeskGroup::curve(EllipticCurve(PrimeField(13), 1, 2)));
  expect_group_axioms(DeskGroup::product({DeskGroup::curve(E_x3x), DeskGroup::finite({3})}));
}

TEST(DeskGroup, Decomposition) {
  auto check = [](const DeskGroup& G, const IntVector& inv) {
    auto d = G.decomposition();
    EXPECT_EQ(G.description().torsion.invariant_factors(), inv) << G.describe();
    for (const auto& e : G.elements()) EXPECT_EQ(G.from_coords(d.coords(e)), e);
  };
  check(DeskGroup::finite({2, 3}), {6});
  check(DeskGroup::torus(PrimeField(7), 1), {6});
  check(DeskGroup::torus(PrimeField(13), 1, 4), {4});
  check(DeskGroup::curve(E_x31), {6});
  check(DeskGroup::curve(E_x3x), {2, 2});
  check(DeskGroup::curve(EllipticCurve(PrimeField(13), 1, 2)), curve_group_structure(EllipticCurve(PrimeField(13), 1, 2)).invariants.invariant_factors());
  auto L = DeskGroup::lattice(2);
  EXPECT_EQ(L.description().free_rank, 2);
  EXPECT_FALSE(L.is_finite());
}

TEST(SemiAbelian, SplitIsDirectProduct) {
  auto A = DeskGroup::finite({2});
  auto T = DeskGroup::torus(F5, 1, 2);
  auto G = semiabelian_points(SemiAbelianModel::split(A, T));
  EXPECT_EQ(G.order(), 4);
  EXPECT_EQ(G.description().torsion.invariant_factors(), (IntVector{2, 2}));
  EXPECT_EQ(G.zero(), (Elem{0, 1}));
}

TEST(SemiAbelian, NontrivialFactorSetGivesZ4) {
  auto A = DeskGroup::finite({2});
  auto T = DeskGroup::torus(F5, 1, 2);
  SemiAbelianModel m{A, T, [](const Elem& x, const Elem& y) {
                       return (x[0] == 1 && y[0] == 1) ? Elem{4} : Elem{1};
                     }};
  auto G = semiabelian_points(m);
  // Addition table and element orders by hand.
  std::map<std::int64_t, int> orders;
  for (const auto& e : G.elements()) ++orders[G.element_order(e)];
  EXPECT_EQ(orders[4], 2);
  EXPECT_EQ(orders[2], 1);
  EXPECT_EQ(orders[1], 1);
  EXPECT_EQ(G.description().torsion.invariant_factors(), (IntVector{4}));
  expect_group_axioms(G);
}

TEST(SemiAbelian, RejectsBadFactorSets) {
  auto A = DeskGroup::finite({3});
  auto T = DeskGroup::torus(PrimeField(7), 1);
  SemiAbelianModel asym{A, T, [](const Elem& x, const Elem& y) {
                          return (x[0] == 1 && y[0] == 2) ? Elem{3} : Elem{1};
                        }};
  EXPECT_THROW(semiabelian_points(asym), ValidationError);
  SemiAbelianModel unnorm{A, T, [](const Elem&, const Elem&) { return Elem{2}; }};
  EXPECT_THROW(semiabelian_points(unnorm), ValidationError);
}

TEST(SemiAbelian, OrderIsProduct) {
  auto E = DeskGroup::curve_torsion(E_x3x, 2);
  for (std::int64_t mu : {1, 2, 4}) {
    auto T = DeskGroup::torus(F5, 1, mu);
    auto G = semiabelian_points(SemiAbelianModel::split(E, T));
    EXPECT_EQ(G.order(), E.order() * T.order());
    EXPECT_EQ(static_cast<std::int64_t>(G.elements().size()), G.order());
  }
}
