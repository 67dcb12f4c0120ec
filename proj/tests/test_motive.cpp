#include <gtest/gtest.h>

#include <random>

#include "motivecalc/motive.hpp"

using namespace motivecalc;

namespace {

const PrimeField F5(5);
const PrimeField F7(7);
const EllipticCurve E5(F5, 1, 0, "E5");  // y^2 = x^3 + x, full 2-torsion
const EllipticCurve E7(F7, 6, 0, "E7");  // y^2 = x^3 - x, full 2-torsion

IntMatrix mat(std::size_t r, std::size_t c, std::vector<std::int64_t> v) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

OneMotiveData torus_only(int rx, int ry, const PrimeField& F, IntMatrix psi) {
  OneMotiveData d;
  d.x_rank = rx;
  d.ydual_rank = ry;
  d.field = F;
  d.v.assign(static_cast<std::size_t>(rx), Elem{});
  d.vstar.assign(static_cast<std::size_t>(ry), Elem{});
  d.psi = std::move(psi);
  return d;
}

OneMotive random_motive(std::mt19937& rng, int which) {
  std::uniform_int_distribution<int> rank(0, 2);
  OneMotiveData d;
  d.x_rank = rank(rng);
  d.ydual_rank = rank(rng);
  d.field = which == 2 ? F7 : F5;
  if (which > 0) {
    d.curves = {which == 1 ? E5 : E7};
    d.torsion_n = 2;
  }
  AbelianTorsion A(d.curves, d.torsion_n, d.field);
  auto pts = which > 0 ? A.group().elements() : std::vector<Elem>{Elem{}};
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  std::uniform_int_distribution<std::int64_t> unit(1, d.field.p() - 1);
  for (int i = 0; i < d.x_rank; ++i) d.v.push_back(pts[pick(rng)]);
  for (int j = 0; j < d.ydual_rank; ++j) d.vstar.push_back(pts[pick(rng)]);
  d.psi = IntMatrix(static_cast<std::size_t>(d.x_rank), static_cast<std::size_t>(d.ydual_rank));
  for (std::size_t i = 0; i < d.psi.rows(); ++i)
    for (std::size_t j = 0; j < d.psi.cols(); ++j) d.psi(i, j) = unit(rng);
  return motive_from_seven_tuple(d);
}

OneMotive e5_motive() {
  OneMotiveData d;
  d.name = "M";
  d.x_rank = 1;
  d.ydual_rank = 1;
  d.field = F5;
  d.curves = {E5};
  d.torsion_n = 2;
  d.v = {detail::curve_elem(CurvePoint::affine(0, 0))};
  d.vstar = {detail::curve_elem(CurvePoint::affine(2, 0))};
  d.psi = mat(1, 1, {3});
  return motive_from_seven_tuple(d);
}

}  // namespace

TEST(Motive, PureTate) {
  auto Z0 = motive_from_seven_tuple(torus_only(1, 0, F5, IntMatrix(1, 0)));
  auto Z1 = motive_from_seven_tuple(torus_only(0, 1, F5, IntMatrix(0, 1)));
  EXPECT_EQ(weight_graded(Z0), (WeightGraded{1, 0, 0}));
  EXPECT_EQ(weight_graded(Z1), (WeightGraded{0, 0, 1}));
  EXPECT_EQ(cartier_dual(Z0).data().ydual_rank, 1);
  EXPECT_EQ(cartier_dual(Z0).data().x_rank, 0);
}

TEST(Motive, TorusUValues) {
  auto M = motive_from_seven_tuple(torus_only(1, 1, F5, mat(1, 1, {2})));
  EXPECT_EQ(M.u({1}), (Elem{2}));
  EXPECT_EQ(M.u({2}), (Elem{4}));
  EXPECT_EQ(M.u({3}), (Elem{3}));
  EXPECT_EQ(M.u({-1}), (Elem{3}));
  EXPECT_EQ(M.u({0}), (Elem{1}));
}

TEST(Motive, BiadditivePsiWithoutAbelianPart) {
  auto M = motive_from_seven_tuple(torus_only(2, 2, F7, mat(2, 2, {3, 2, 6, 5})));
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int e = -2; e <= 2; ++e) {
          std::int64_t want = 1;
          const std::int64_t x[2] = {a, b}, y[2] = {c, e};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              std::int64_t k = x[i] * y[j];
              std::int64_t base = k >= 0 ? M.data().psi(i, j) : F7.inv(M.data().psi(i, j));
              want = F7.mul(want, F7.pow(base, k >= 0 ? k : -k));
            }
          EXPECT_EQ(M.psi_value({a, b}, {c, e}), want);
        }
}

TEST(Motive, WeightGraded) {
  EXPECT_EQ(weight_graded(e5_motive()), (WeightGraded{1, 1, 1}));
  auto M = motive_from_seven_tuple(torus_only(2, 3, F5, mat(2, 3, {1, 1, 1, 1, 1, 1})));
  EXPECT_EQ(weight_graded(M), (WeightGraded{2, 0, 3}));
}

TEST(Motive, ValidationErrorsAreNamed) {
  auto expect_error = [](OneMotiveData d, const std::string& needle) {
    try {
      motive_from_seven_tuple(std::move(d));
      ADD_FAILURE() << "accepted, expected " << needle;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto d = torus_only(1, 1, F5, mat(1, 1, {2}));
  d.v.clear();
  expect_error(d, "dimension mismatch");
  d = torus_only(1, 1, F5, mat(1, 2, {2, 2}));
  expect_error(d, "dimension mismatch");
  d = torus_only(1, 1, F5, mat(1, 1, {5}));
  expect_error(d, "psi-incompatible");
  auto e = e5_motive().data();
  e.v = {detail::curve_elem(CurvePoint::affine(1, 1))};
  expect_error(e, "non-homomorphic v");
  e = e5_motive().data();
  e.torsion_n = 3;
  expect_error(e, "mu_3");
}

TEST(Motive, PsiValuesAreReduced) {
  auto M = motive_from_seven_tuple(torus_only(1, 1, F5, mat(1, 1, {-1})));
  EXPECT_EQ(M.data().psi(0, 0), 4);
}

TEST(Motive, TrivializationLawsWithAbelianPart) {
  auto M = e5_motive();
  const auto& A = M.abelian();
  const auto& F = M.field();
  for (int x1 = -3; x1 <= 3; ++x1)
    for (int x2 = -3; x2 <= 3; ++x2)
      for (int y = -3; y <= 3; ++y) {
        auto phi = M.pairing_phi(M.v_of({x1}), M.v_of({x2}), M.vstar_of({y}));
        EXPECT_EQ(M.psi_value({x1 + x2}, {y}),
                  F.mul(F.mul(M.psi_value({x1}, {y}), M.psi_value({x2}, {y})), A.zeta_pow(-phi)));
        auto psi = M.pairing_psi(M.v_of({y}), M.vstar_of({x1}), M.vstar_of({x2}));
        EXPECT_EQ(M.psi_value({y}, {x1 + x2}),
                  F.mul(F.mul(M.psi_value({y}, {x1}), M.psi_value({y}, {x2})), A.zeta_pow(-psi)));
      }
}

TEST(Motive, UIsAHomomorphismIntoG) {
  auto M = e5_motive();
  auto G = semiabelian_points(M.semiabelian_model());
  EXPECT_EQ(G.order(), 16);
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      EXPECT_EQ(M.u({a + b}), G.add(M.u({a}), M.u({b})));
      EXPECT_EQ(M.g_add(M.u({a}), M.u({b})), G.add(M.u({a}), M.u({b})));
    }
}

TEST(Motive, DualOfTorusMotive) {
  auto M = motive_from_seven_tuple(torus_only(1, 2, F5, mat(1, 2, {2, 3})));
  auto D = cartier_dual(M);
  EXPECT_EQ(weight_graded(D), (WeightGraded{2, 0, 1}));
  EXPECT_EQ(D.data().psi, mat(2, 1, {2, 3}));
  EXPECT_EQ(D.psi_value({1, 1}, {2}), F5.mul(M.psi_value({2}, {1, 0}), M.psi_value({2}, {0, 1})));
}

TEST(Motive, DualIsAnInvolution) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    auto M = random_motive(rng, trial % 3);
    auto D = cartier_dual(M);
    EXPECT_EQ(weight_graded(D).gr0_rank, weight_graded(M).grm2_rank);
    EXPECT_EQ(weight_graded(D).grm1_dim, weight_graded(M).grm1_dim);
    EXPECT_EQ(cartier_dual(D), M);
    for (int i = 0; i < M.data().x_rank; ++i)
      for (int j = 0; j < M.data().ydual_rank; ++j) {
        auto x = OneMotive::unit(M.data().x_rank, i), y = OneMotive::unit(M.data().ydual_rank, j);
        EXPECT_EQ(D.psi_value(y, x), M.psi_value(x, y));
      }
  }
}

TEST(Motive, DualSwapsTrivializationLaws) {
  auto M = e5_motive();
  auto D = cartier_dual(M);
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) EXPECT_EQ(D.psi_value({y}, {x}), M.psi_value({x}, {y}));
}

TEST(Motive, IsogenyExamples) {
  auto M = motive_from_seven_tuple(torus_only(1, 1, F5, mat(1, 1, {2})));
  auto id = MotiveMorphism::identity(M);
  EXPECT_TRUE(is_isogeny(id, M, M).isogeny);

  MotiveMorphism two{LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {2})}, IntMatrix(0, 0),
                     LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {2})}};
  EXPECT_TRUE(is_isogeny(two, M, M).isogeny);
  EXPECT_TRUE(is_isogeny(two.compose(two), M, M).isogeny);

  MotiveMorphism zero{LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {0})}, IntMatrix(0, 0),
                      LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {0})}};
  auto r = is_isogeny(zero, M, M);
  EXPECT_FALSE(r.isogeny);
  EXPECT_NE(r.diagnostic.find("fX"), std::string::npos);

  MotiveMorphism bad{LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {1})}, IntMatrix(0, 0),
                     LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {2})}};
  EXPECT_THROW(is_isogeny(bad, M, M), ValidationError);
}

TEST(Motive, MorphismWithAbelianPart) {
  auto M = e5_motive();
  EXPECT_TRUE(is_isogeny(MotiveMorphism::identity(M), M, M).isogeny);
  // -1 on everything: psi(-x, -y) = psi(x, y) twisted by the carry terms.
  MotiveMorphism neg{LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {-1})}, mat(1, 1, {-1}),
                     LatticeMap{Lattice(1), Lattice(1), mat(1, 1, {-1})}};
  auto fail = morphism_failure(neg, M, M);
  bool expected = M.psi_value({-1}, {1}) == F5.inv(M.psi_value({1}, {1}));
  EXPECT_EQ(!fail.has_value(), expected);
  MotiveMorphism wrong_curve = MotiveMorphism::identity(M);
  wrong_curve.fA = mat(1, 1, {0});
  EXPECT_TRUE(morphism_failure(wrong_curve, M, M).has_value());
}
