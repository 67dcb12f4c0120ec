#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "motivecalc/biext_group.hpp"

using namespace motivecalc;

namespace {

DeskGroup Zn(std::int64_t n) { return DeskGroup::finite({n}); }

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) { return std::gcd(a, std::gcd(b, c)); }

// Normalized random h: P x Q -> G.
Table2 random_h(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G, std::uint32_t seed) {
  auto gs = G.elements();
  auto table = std::make_shared<std::map<std::pair<Elem, Elem>, Elem>>();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  for (const auto& p : P.elements())
    for (const auto& q : Q.elements()) (*table)[{p, q}] = (p == P.zero() || q == Q.zero()) ? G.zero() : gs[pick(rng)];
  return [table](const Elem& p, const Elem& q) { return table->at({p, q}); };
}

// Carry cocycle of Z/2 in the first slot, paired with q: phi(1,1;q) = q.
BiextCocycle carry_z2() {
  auto Z2 = Zn(2);
  BiextCocycle b = BiextCocycle::zero(Z2, Z2, Z2);
  b.phi = [](const Elem& p1, const Elem& p2, const Elem& q) { return Elem{p1[0] * p2[0] * q[0]}; };
  return b;
}

}  // namespace

TEST(BiextCocycle, ZeroTablesAreValid) {
  EXPECT_TRUE(verify_biext_cocycle(BiextCocycle::zero(Zn(2), Zn(3), Zn(4))).ok());
}

TEST(BiextCocycle, ConstantFirstLawFailsInterchange) {
  auto Z2 = Zn(2);
  BiextCocycle b = BiextCocycle::zero(Z2, Z2, Z2);
  b.phi = [](const Elem& p1, const Elem& p2, const Elem&) { return Elem{p1[0] * p2[0]}; };
  auto r = verify_biext_cocycle(b);
  ASSERT_FALSE(r.ok());
  const Failure* f = r.find("interchange");
  ASSERT_NE(f, nullptr);
  bool has = false;
  for (const auto& w : f->witnesses) has |= witness_to_string(w) == "(1,1,1,1)";
  EXPECT_TRUE(has) << r.to_string();
  EXPECT_EQ(r.find("cocycle(phi)"), nullptr);
}

TEST(BiextCocycle, SingleEntryCarryIsValidAndNontrivial) {
  auto b = carry_z2();
  EXPECT_TRUE(verify_biext_cocycle(b).ok());
  EXPECT_FALSE(find_coboundary(b).has_value());
}

TEST(BiextCocycle, CoboundariesAreValid) {
  std::mt19937 rng(3);
  for (std::int64_t a : {2, 3, 4})
    for (std::int64_t c : {2, 3, 4, 6}) {
      auto P = Zn(a), Q = DeskGroup::finite({2, 2}), G = Zn(c);
      auto h = random_h(P, Q, G, rng());
      auto d = coboundary(P, Q, G, h);
      EXPECT_TRUE(verify_biext_cocycle(d).ok());
      EXPECT_TRUE(verify_trivialization(d, {h}).ok());
      auto found = find_coboundary(d);
      ASSERT_TRUE(found.has_value());
      EXPECT_TRUE(verify_trivialization(d, *found).ok());
    }
}

TEST(BiextCocycle, DomainMismatchIsAnError) {
  auto b = BiextCocycle::zero(Zn(2), Zn(2), Zn(2));
  b.phi = [](const Elem&, const Elem&, const Elem&) { return Elem{0, 0}; };
  EXPECT_THROW(verify_biext_cocycle(b), ValidationError);
}

TEST(Biext0, Examples) {
  EXPECT_EQ(biext0(Zn(2), Zn(2), Zn(2)).torsion.order(), 2);
  auto zz = biext0(DeskGroup::lattice(1), DeskGroup::lattice(1), DeskGroup::lattice(1));
  EXPECT_EQ(zz.free_rank, 1);
  EXPECT_TRUE(zz.torsion.is_trivial());
  EXPECT_TRUE(biext0(Zn(2), Zn(3), Zn(5)).is_trivial());
  EXPECT_EQ(biext0(DeskGroup::lattice(2), DeskGroup::lattice(3), DeskGroup::lattice(1)).free_rank, 6);
  EXPECT_EQ(biext0(DeskGroup::lattice(1), DeskGroup::lattice(1), DeskGroup::torus(PrimeField(5), 1)).to_string(), "Z/4");
}

TEST(Biext0, MatchesExhaustiveCountForSmallCyclicGroups) {
  for (std::int64_t a = 2; a <= 4; ++a)
    for (std::int64_t b = 2; b <= 4; ++b)
      for (std::int64_t c = 2; c <= 4; ++c) {
        auto P = Zn(a), Q = Zn(b), G = Zn(c);
        // Hom(Z/a (x) Z/b, Z/c) = Z/gcd(a,b,c).
        EXPECT_EQ(biext0(P, Q, G).torsion.order(), gcd3(a, b, c));
        auto bf = biext0_brute_force(P, Q, G);
        EXPECT_EQ(bf.cocycles, gcd3(a, b, c));
        EXPECT_EQ(bf.group, biext0(P, Q, G));
      }
}

TEST(Biext1, ExtTorOracleOnCyclicGroups) {
  // Biext^1(Z/a, Z/b; Z/d) = Ext^1(Z/a (x) Z/b, Z/d) + Hom(Tor(Z/a, Z/b), Z/d).
  for (std::int64_t a = 2; a <= 4; ++a)
    for (std::int64_t b = 2; b <= 4; ++b)
      for (std::int64_t d = 2; d <= 4; ++d) {
        auto r = biext1(Zn(a), Zn(b), Zn(d));
        std::int64_t g = gcd3(a, b, d);
        EXPECT_EQ(r.group.torsion.order(), g * g) << a << " " << b << " " << d;
        if (g > 1) EXPECT_EQ(r.group.torsion.invariant_factors(), (IntVector{g, g}));
      }
}

TEST(Biext1, SpecExamples) {
  auto r = biext1(Zn(2), Zn(2), Zn(3));
  EXPECT_TRUE(r.group.is_trivial());
  auto bf = biext1_brute_force(Zn(2), Zn(2), Zn(2));
  auto la = biext1(Zn(2), Zn(2), Zn(2));
  EXPECT_EQ(la.group, bf.group);
  EXPECT_EQ(la.cocycles_order, bf.cocycles);
  EXPECT_EQ(la.coboundaries_order, bf.coboundaries);
}

TEST(Biext1, BruteForceAgreementOnSmallMixedGroups) {
  for (auto P : {Zn(2), Zn(3), Zn(4)})
    for (auto Q : {Zn(2), Zn(3)})
      for (auto G : {Zn(2), Zn(3)}) {
        if (P.order() * Q.order() > 8) continue;
        auto la = biext1(P, Q, G);
        auto bf = biext1_brute_force(P, Q, G);
        EXPECT_EQ(la.group, bf.group) << P.describe() << " " << Q.describe() << " " << G.describe();
      }
}

TEST(Biext1, BruteForceHonorsEnumerationCap) {
  EXPECT_THROW(biext1_brute_force(Zn(3), Zn(3), Zn(3), 1000), DeskLimitError);
}

TEST(Biext1, SolverOutputsPassTheVerifier) {
  std::mt19937 rng(99);
  const std::vector<IntVector> shapes = {{2}, {3}, {4}, {2, 2}, {5}, {6}, {7}, {8}, {2, 4}, {2, 2, 2}};
  std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
  std::uniform_int_distribution<std::size_t> small(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    // Keep P and Q small enough for the exhaustive verifier; G ranges over all shapes.
    auto P = DeskGroup::finite(shapes[small(rng)]);
    auto Q = DeskGroup::finite(shapes[pick(rng)]);
    auto G = DeskGroup::finite(shapes[pick(rng)]);
    auto r = biext1(P, Q, G);
    ASSERT_EQ(r.generators.size(), r.generator_orders.size());
    for (const auto& g : r.generators) ASSERT_TRUE(verify_biext_cocycle(g).ok()) << P.describe() << Q.describe() << G.describe();
    if (r.cocycles_order && r.coboundaries_order)
      ASSERT_EQ(r.cocycles_order, r.coboundaries_order * r.group.torsion.order());
  }
}

TEST(Biext1, LatticeFactorsAreTrivialWithWitness) {
  auto L = DeskGroup::lattice(2);
  for (auto G : {Zn(2), Zn(4), DeskGroup::torus(PrimeField(5), 1)}) {
    EXPECT_TRUE(biext1(L, L, G).group.is_trivial());
    // Pull a nontrivial finite class back along reduction Z^2 -> Z/2.
    auto red = GroupHom{L, Zn(2), [](const Elem& x) { return Elem{mod(x[0] + x[1], 2)}; }};
    auto inc = GroupHom{Zn(2), G, [G](const Elem& t) { return G.mul(t[0] * (G.decomposition().orders[0] / 2), G.decomposition().basis[0]); }};
    auto b = pushforward(pullback(carry_z2(), red, red), inc);
    EXPECT_TRUE(verify_biext_cocycle(b).ok()) << verify_biext_cocycle(b).to_string();
    auto w = lattice_triviality_witness(b);
    EXPECT_TRUE(verify_trivialization(b, w).ok()) << verify_trivialization(b, w).to_string();
  }
}

TEST(Biext1, MixedFactorsAreUnsupported) {
  EXPECT_THROW(biext1(DeskGroup::lattice(1), Zn(2), Zn(2)), DeskLimitError);
  EXPECT_THROW(biext1(Zn(17), Zn(2), Zn(2)), DeskLimitError);
}

TEST(BaerSum, ClassGroupLaws) {
  auto b = carry_z2();
  auto P = b.P, Q = b.Q, G = b.G;
  auto zero = BiextCocycle::zero(P, Q, G);
  auto s = baer_sum(b, zero);
  for (const auto& p1 : P.elements())
    for (const auto& p2 : P.elements())
      for (const auto& q : Q.elements()) EXPECT_EQ(s.phi(p1, p2, q), b.phi(p1, p2, q));
  auto shifted = baer_sum(b, coboundary(P, Q, G, random_h(P, Q, G, 5)));
  auto back = baer_sum(shifted, baer_inverse(b));
  EXPECT_TRUE(verify_biext_cocycle(back).ok());
  EXPECT_TRUE(find_coboundary(back).has_value());
  // The class of the carry cocycle has order 2.
  EXPECT_TRUE(find_coboundary(baer_sum(b, b)).has_value());
}
