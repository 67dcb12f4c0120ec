#include <gtest/gtest.h>

#include <random>

#include "motivecalc/tensor_weights.hpp"
#include "test_support.hpp"

using namespace motivecalc;
using namespace motivecalc::testing;

namespace {

OneMotive random_torus(std::mt19937& rng, int rx, int ry) {
  std::uniform_int_distribution<std::int64_t> unit(1, 6);
  IntMatrix psi(static_cast<std::size_t>(rx), static_cast<std::size_t>(ry));
  for (std::size_t i = 0; i < psi.rows(); ++i)
    for (std::size_t j = 0; j < psi.cols(); ++j) psi(i, j) = unit(rng);
  return torus_motive(rx, ry, F7, psi);
}

std::vector<WeightGraded> random_profile(std::mt19937& rng, int l, int lo) {
  std::uniform_int_distribution<int> r(lo, 2);
  std::vector<WeightGraded> g;
  for (int j = 0; j < l; ++j) g.push_back({r(rng), r(rng), r(rng)});
  return g;
}

}  // namespace

TEST(TensorComplex, DualRankOnePair) {
  auto M = torus_motive(1, 1, F5, mat(1, 1, {2}));
  auto c = tensor_complex(M, cartier_dual(M));
  EXPECT_EQ(c.rank0, 1);
  EXPECT_EQ(c.rankm1, 2);
  EXPECT_EQ(c.rankm2, 1);
  // dlog_2(2) = 1 in F_5: d0 = (-1, 1), dm1 = (1, 1).
  EXPECT_EQ(c.d0, mat(2, 1, {-1, 1}));
  EXPECT_EQ(c.dm1, mat(1, 2, {1, 1}));
}

TEST(TensorComplex, ZeroMapsGiveZeroDifferentials) {
  auto M = torus_motive(2, 1, F5, mat(2, 1, {1, 1}));
  auto c = tensor_complex(M, cartier_dual(M));
  EXPECT_TRUE(c.d0.is_zero());
  EXPECT_TRUE(c.dm1.is_zero());
}

TEST(TensorComplex, RankTwoSquaresToZero) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> r(0, 3);
    auto M = random_torus(rng, r(rng), r(rng));
    auto N = random_torus(rng, r(rng), r(rng));
    auto c = tensor_complex(M, N);
    auto dd = c.dm1 * c.d0;
    ASSERT_EQ(dd.rows(), static_cast<std::size_t>(c.rankm2));
    ASSERT_EQ(dd.cols(), static_cast<std::size_t>(c.rank0));
    EXPECT_TRUE(dd.is_zero());
  }
  auto M = random_torus(rng, 2, 2);
  auto c = tensor_complex(M, cartier_dual(M));
  EXPECT_EQ(c.rank0, 4);
  EXPECT_EQ(c.rankm1, 8);
  EXPECT_EQ(c.rankm2, 4);
}

TEST(TensorComplex, AbelianPartIsRejected) {
  OneMotiveData d;
  d.field = F5;
  d.curves = {E5};
  d.torsion_n = 2;
  EXPECT_THROW(tensor_complex(motive_from_seven_tuple(d), torus_motive(1, 1, F5, mat(1, 1, {2}))), ValidationError);
}

TEST(GradedDecomposition, Degenerate) {
  auto s = graded_decomposition(1, 1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].nu_indices, (std::vector<int>{1}));
  EXPECT_TRUE(s[0].iota_indices.empty());
  ASSERT_EQ(s[0].pieces.size(), 1u);
  EXPECT_EQ(s[0].pieces[0].word, (TensorWord{0}));
  EXPECT_EQ(s[0].pieces[0].multiplicity, 1);
}

TEST(GradedDecomposition, TwoFactorsAtThree) {
  auto s = graded_decomposition(2, 3);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].nu_indices.empty());
  EXPECT_EQ(s[0].iota_indices, (std::vector<int>{1, 2}));
  EXPECT_EQ(s[0].factor_description, "(M1(x)M2/W_-3)");
  // Weight > -3 words of M1 (x) M2: XX, XA, AX, XY, AA, YX.
  EXPECT_EQ(s[0].pieces.size(), 6u);
  EXPECT_THROW(graded_decomposition(2, 4), ValidationError);
  EXPECT_THROW(graded_decomposition(2, 0), ValidationError);
}

TEST(GradedRankCheck, HandExpandedTwoFactors) {
  // Ranks (1,0,1): XX weight 0, XY and YX weight -2, YY dropped.
  auto r = graded_rank_check(std::vector<WeightGraded>{{1, 0, 1}, {1, 0, 1}}, 3);
  EXPECT_EQ(r.rhs.at(0), 1);
  EXPECT_EQ(r.rhs.at(-1), 0);
  EXPECT_EQ(r.rhs.at(-2), 2);
  EXPECT_EQ(r.lhs.at(0), 2);
  EXPECT_EQ(r.lhs.at(-2), 2);
  EXPECT_TRUE(r.holds());
}

TEST(GradedRankCheck, ThreeFactorsAllOnes) {
  auto r = graded_rank_check(std::vector<WeightGraded>(3, {1, 1, 1}), 3);
  EXPECT_EQ(r.lhs.at(0), 3 * r.rhs.at(0));
  EXPECT_EQ(r.rhs.at(0), 1);
  EXPECT_EQ(r.rhs.at(-1), 3);
  EXPECT_EQ(r.lhs.at(-1), 6);
}

TEST(GradedRankCheck, RatiosOverRandomProfiles) {
  std::mt19937 rng(4);
  for (int l = 2; l <= 4; ++l)
    for (int i = 1; i <= 3; ++i)
      for (int trial = 0; trial < 20; ++trial) {
        auto g = random_profile(rng, l, 0);
        auto r = graded_rank_check(g, i);
        EXPECT_TRUE(r.holds()) << "l=" << l << " i=" << i;
        // Independent closed forms for the direct quotient.
        std::int64_t gr0 = 1, grm1 = 0;
        for (int j = 0; j < l; ++j) gr0 *= g[static_cast<std::size_t>(j)].gr0_rank;
        for (int k = 0; k < l; ++k) {
          std::int64_t t = g[static_cast<std::size_t>(k)].grm1_dim;
          for (int j = 0; j < l; ++j)
            if (j != k) t *= g[static_cast<std::size_t>(j)].gr0_rank;
          grm1 += t;
        }
        EXPECT_EQ(r.rhs.at(0), gr0);
        EXPECT_EQ(r.rhs.at(-1), i >= 2 ? grm1 : 0);
        if (gr0) EXPECT_DOUBLE_EQ(*r.gr0_ratio, l);
        if (i >= 2 && grm1) EXPECT_DOUBLE_EQ(*r.grm1_ratio, l - 1);
      }
}

TEST(ComponentSolver, TorusTarget) {
  auto m = weight_component_solver(WeightGraded{1, 0, 1}, WeightGraded{1, 0, 1}, WeightGraded{1, 0, 1});
  EXPECT_EQ(m.live_weights(), (std::vector<int>{0, -2}));
  EXPECT_EQ(m.cells[0][0], CellStatus::nonzero);
  EXPECT_EQ(m.cells[2][2], CellStatus::nonzero);
}

TEST(ComponentSolver, TorusFreeTarget) {
  auto m = weight_component_solver(WeightGraded{1, 0, 1}, WeightGraded{1, 0, 1}, WeightGraded{1, 1, 0});
  EXPECT_EQ(m.live_weights(), (std::vector<int>{0}));
}

TEST(ComponentSolver, UnitTarget) {
  auto m = weight_component_solver(WeightGraded{2, 1, 1}, WeightGraded{1, 1, 2}, WeightGraded{1, 0, 0});
  EXPECT_EQ(m.live_weights(), (std::vector<int>{0}));
}

TEST(ComponentSolver, AbelianCellIsSymbolic) {
  auto m = weight_component_solver(WeightGraded{1, 1, 1}, WeightGraded{1, 1, 1}, WeightGraded{1, 1, 0});
  EXPECT_EQ(m.live_weights(), (std::vector<int>{0, -1}));
  EXPECT_EQ(m.at_weight(-1), CellStatus::symbolic);
}

TEST(ComponentSolver, DependsOnlyOnGradedRanks) {
  std::mt19937 rng(8);
  auto base = weight_component_solver(torus_motive(1, 1, F7, mat(1, 1, {3})), torus_motive(1, 1, F7, mat(1, 1, {5})),
                                      torus_motive(1, 1, F7, mat(1, 1, {2})));
  for (int trial = 0; trial < 10; ++trial) {
    auto m = weight_component_solver(random_torus(rng, 1, 1), random_torus(rng, 1, 1), random_torus(rng, 1, 1));
    EXPECT_EQ(m.cells, base.cells);
  }
}

TEST(HomTensor, TwoTorusFactorsIntoTorusFreeTarget) {
  auto M = torus_motive(2, 1, F5, mat(2, 1, {2, 3}));
  OneMotiveData t;
  t.x_rank = 3;
  t.field = F5;
  t.v.assign(3, Elem{});
  auto target = motive_from_seven_tuple(t);
  auto r = hom_tensor_group({M, cartier_dual(M)}, target);
  ASSERT_EQ(r.terms.size(), 2u);
  EXPECT_TRUE(r.terms[0].computed);
  EXPECT_EQ(r.terms[0].group.free_rank, 2 * 1 * 3);
  EXPECT_EQ(r.ordered_total.free_rank, 12);
  EXPECT_EQ(r.unordered_total.free_rank, 6);
}

TEST(HomTensor, UnitFactorOnlyReindexes) {
  auto Z0 = torus_motive(1, 0, F5, IntMatrix(1, 0));
  auto M = torus_motive(2, 1, F5, mat(2, 1, {2, 3}));
  OneMotiveData t;
  t.x_rank = 1;
  t.field = F5;
  t.v.assign(1, Elem{});
  auto target = motive_from_seven_tuple(t);
  auto with = hom_tensor_group({M, cartier_dual(M), Z0}, target);
  auto without = hom_tensor_group({M, cartier_dual(M)}, target);
  // Pair (1,2) is copied once by X of Z(0); pairs with Z(0) add Hom(X_i, V).
  EXPECT_EQ(with.terms.size(), 6u);
  EXPECT_EQ(with.terms[0].multiplicity, 1);
  EXPECT_EQ(with.terms[0].group, without.terms[0].group);
}

TEST(HomTensor, AbelianShapesAreSymbolic) {
  OneMotiveData d;
  d.field = F5;
  d.curves = {E5};
  d.torsion_n = 2;
  auto A = motive_from_seven_tuple(d);
  auto r = hom_tensor_group({A, cartier_dual(A), A}, torus_motive(0, 1, F5, IntMatrix(0, 1)));
  EXPECT_EQ(r.symbolic_ordered, 6);
  EXPECT_EQ(r.symbolic_unordered, 3);
  EXPECT_TRUE(r.terms[0].group.symbolic);
}
