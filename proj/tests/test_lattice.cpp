#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "motivecalc/lattice.hpp"
#include "motivecalc/modular.hpp"

using namespace motivecalc;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_diagonal_chain(const IntMatrix& D) {
  std::int64_t prev = 1;
  bool seen_zero = false;
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j) {
      if (i != j && D(i, j) != 0) return false;
      if (i == j) {
        if (D(i, i) < 0) return false;
        if (D(i, i) == 0) {
          seen_zero = true;
          continue;
        }
        if (seen_zero || D(i, i) % prev != 0) return false;
        prev = D(i, i);
      }
    }
  return true;
}

// Elementary divisors as gcd ratios of k x k minors (independent of the reduction).
std::int64_t gcd_of_minors(const IntMatrix& m, std::size_t k) {
  std::int64_t g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t idx, std::size_t start) {
    if (idx == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t r = start; r < m.rows(); ++r) {
      rows[idx] = r;
      pick_rows(idx + 1, r + 1);
    }
  };
  pick_cols = [&](std::size_t idx, std::size_t start) {
    if (idx == k) {
      IntMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
      g = std::gcd(g, std::llabs(determinant(sub)));
      return;
    }
    for (std::size_t c = start; c < m.cols(); ++c) {
      cols[idx] = c;
      pick_cols(idx + 1, c + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

}  // namespace

TEST(SmithNormalForm, WorkedExample) {
  IntMatrix m{{2, 4}, {6, 8}};
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, s.D);
  EXPECT_EQ(s.diagonal, (IntVector{2, 4}));
  // d1 = gcd of entries, d1*d2 = |det|.
  EXPECT_EQ(gcd_of_minors(m, 1), 2);
  EXPECT_EQ(gcd_of_minors(m, 2), 8);
}

TEST(SmithNormalForm, IdentityAndZero) {
  auto s = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(s.D, IntMatrix::identity(3));
  auto z = smith_normal_form(IntMatrix(2, 3));
  EXPECT_TRUE(z.D.is_zero());
  EXPECT_EQ(z.rank(), 0u);
}

TEST(SmithNormalForm, RandomRoundTrip) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    auto m = random_matrix(rng, dim(rng), dim(rng));
    auto s = smith_normal_form(m);
    ASSERT_EQ(s.U * m * s.V, s.D) << m;
    ASSERT_EQ(std::llabs(determinant(s.U)), 1);
    ASSERT_EQ(std::llabs(determinant(s.V)), 1);
    ASSERT_EQ(s.U * s.U_inv, IntMatrix::identity(m.rows()));
    ASSERT_EQ(s.V * s.V_inv, IntMatrix::identity(m.cols()));
    ASSERT_TRUE(is_diagonal_chain(s.D)) << s.D;
    // Determinantal divisors agree with the diagonal prefix products.
    std::int64_t prod = 1;
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, s.rank()); ++k) {
      prod *= s.diagonal[k - 1];
      ASSERT_EQ(gcd_of_minors(m, k), prod) << m;
    }
  }
}

TEST(SmithNormalForm, OverflowIsReported) {
  const std::int64_t big = std::int64_t{1} << 62;
  EXPECT_THROW(checked::mul(big, 4), OverflowError);
  EXPECT_THROW((void)(IntMatrix{{big, big}} * IntMatrix{{1}, {1}}), OverflowError);
  EXPECT_THROW((void)determinant(IntMatrix{{big, 3}, {-3, big}}), OverflowError);
}

TEST(Tensor, Ranks) {
  EXPECT_EQ(tensor_product(Lattice(2), Lattice(3)).rank, 6);
  EXPECT_EQ(tensor_product(Lattice(0), Lattice(5)).rank, 0);
  EXPECT_EQ(tensor_product(Lattice(1), Lattice(1)).rank, 1);
}

TEST(Tensor, MapExamples) {
  LatticeMap f(Lattice(1), Lattice(1), {{2}}), g(Lattice(1), Lattice(1), {{3}});
  EXPECT_EQ(tensor_map(f, g).matrix(), (IntMatrix{{6}}));
  EXPECT_EQ(tensor_map(LatticeMap::identity(Lattice(2)), LatticeMap::identity(Lattice(3))).matrix(),
            IntMatrix::identity(6));
  LatticeMap h(Lattice(2), Lattice(1), {{1, 0}}), k(Lattice(1), Lattice(2), {{0}, {1}});
  // (1x2) (x) (2x1): entry (i*2+k, j*1+l) = h(i,j) k(k,l).
  EXPECT_EQ(tensor_map(h, k).matrix(), (IntMatrix{{0, 0}, {1, 0}}));
}

TEST(Tensor, Functoriality) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dim(1, 3);
  for (int t = 0; t < 50; ++t) {
    int a = dim(rng), b = dim(rng), c = dim(rng), x = dim(rng), y = dim(rng), z = dim(rng);
    LatticeMap f1(Lattice(a), Lattice(b), random_matrix(rng, b, a, -3, 3));
    LatticeMap f2(Lattice(b), Lattice(c), random_matrix(rng, c, b, -3, 3));
    LatticeMap g1(Lattice(x), Lattice(y), random_matrix(rng, y, x, -3, 3));
    LatticeMap g2(Lattice(y), Lattice(z), random_matrix(rng, z, y, -3, 3));
    EXPECT_EQ(tensor_map(f2.compose(f1), g2.compose(g1)), tensor_map(f2, g2).compose(tensor_map(f1, g1)));
  }
}

TEST(Hom, Ranks) {
  EXPECT_EQ(hom_lattice(Lattice(2), Lattice(3)).rank, 6);
  EXPECT_EQ(hom_lattice(Lattice(0), Lattice(3)).rank, 0);
  EXPECT_EQ(hom_lattice(Lattice(1), Lattice(1)).rank, 1);
}

TEST(Cokernel, Examples) {
  auto c = cokernel(LatticeMap(Lattice(1), Lattice(1), {{3}}));
  EXPECT_EQ(c.free_rank, 0);
  EXPECT_EQ(c.torsion.invariant_factors(), (IntVector{3}));
  c = cokernel(LatticeMap::identity(Lattice(2)));
  EXPECT_EQ(c.free_rank, 0);
  EXPECT_TRUE(c.torsion.is_trivial());
  c = cokernel(LatticeMap::zero(Lattice(1), Lattice(1)));
  EXPECT_EQ(c.free_rank, 1);
  EXPECT_TRUE(c.torsion.is_trivial());
}

TEST(Cokernel, OrderMatchesDeterminant) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < 100; ++t) {
    int n = dim(rng);
    LatticeMap f{Lattice(n), Lattice(n), random_matrix(rng, n, n, -5, 5)};
    if (!is_lattice_isogeny_part(f)) continue;
    auto c = cokernel(f);
    EXPECT_EQ(c.free_rank, 0);
    EXPECT_EQ(c.torsion.order(), std::llabs(determinant(f.matrix())));
  }
}

TEST(IsogenyPart, Examples) {
  EXPECT_TRUE(is_lattice_isogeny_part(LatticeMap(Lattice(2), Lattice(2), {{2, 0}, {0, 3}})));
  EXPECT_FALSE(is_lattice_isogeny_part(LatticeMap(Lattice(2), Lattice(2), {{1, 1}, {1, 1}})));
  EXPECT_FALSE(is_lattice_isogeny_part(LatticeMap(Lattice(1), Lattice(2), {{1}, {0}})));
}

TEST(LatticeMap, RejectsBadShape) {
  EXPECT_THROW(LatticeMap(Lattice(2), Lattice(1), {{1}}), ValidationError);
  EXPECT_THROW(Lattice(-1), ValidationError);
  EXPECT_THROW(FiniteAbelianGroup({2, 3}), ValidationError);
}

TEST(SolveMod, Examples) {
  auto s = solve_linear_system_mod({{2}}, {0}, {4}, {4});
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->group().torsion.order(), 2);
  EXPECT_FALSE(solve_linear_system_mod({{2}}, {1}, {4}, {4}).has_value());
  auto u = solve_linear_system_mod({{1}}, {7}, {0});
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(u->particular, (IntVector{7}));
  EXPECT_TRUE(u->kernel.empty());
}

namespace {

// Enumerates residue vectors x (x_j in Z/vm_j) and counts solutions of A x = b.
std::set<IntVector> enumerate_solutions(const IntMatrix& a, const IntVector& b, const IntVector& moduli,
                                        const IntVector& vm) {
  std::set<IntVector> out;
  IntVector x(vm.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == vm.size()) {
      for (std::size_t r = 0; r < a.rows(); ++r) {
        std::int64_t s = -b[r];
        for (std::size_t k = 0; k < vm.size(); ++k) s += a(r, k) * x[k];
        if (mod(s, moduli[r]) != 0) return;
      }
      out.insert(x);
      return;
    }
    for (std::int64_t v = 0; v < vm[j]; ++v) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST(SolveMod, AgreesWithEnumeration) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> nvars(1, 2), nrows(1, 3), modd(2, 6), coef(-6, 6);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = nvars(rng), m = nrows(rng);
    IntVector vm(n), moduli(m), b(m);
    for (auto& v : vm) v = modd(rng);
    // Each row is read modulo a common divisor of the moduli of its variables.
    IntMatrix a(m, n);
    for (std::size_t r = 0; r < m; ++r) {
      std::int64_t g = 0;
      for (std::size_t j = 0; j < n; ++j) g = std::gcd(g, vm[j]);
      moduli[r] = g;
      for (std::size_t j = 0; j < n; ++j) a(r, j) = coef(rng);
      b[r] = coef(rng);
    }
    auto brute = enumerate_solutions(a, b, moduli, vm);
    auto sol = solve_linear_system_mod(a, b, moduli, vm);
    ASSERT_EQ(sol.has_value(), !brute.empty());
    if (!sol) continue;
    EXPECT_EQ(sol->group().torsion.order(), static_cast<std::int64_t>(brute.size()));
    EXPECT_EQ(sol->group().free_rank, 0);
    IntVector p = sol->particular;
    EXPECT_TRUE(brute.count(p));
    for (const auto& k : sol->kernel) {
      IntVector q(n);
      for (std::size_t j = 0; j < n; ++j) q[j] = mod(p[j] + k[j], vm[j]);
      EXPECT_TRUE(brute.count(q));
    }
  }
}

TEST(LatticeQuotient, Basic) {
  // Z^2 / <(2,0),(0,3)> = Z/6
  auto g = lattice_quotient(IntMatrix::identity(2), IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(g.free_rank, 0);
  EXPECT_EQ(g.torsion.invariant_factors(), (IntVector{6}));
  EXPECT_EQ(g.to_string(), "Z/6");
  auto h = lattice_quotient(IntMatrix::identity(2), IntMatrix{{2}, {0}});
  EXPECT_EQ(h.to_string(), "Z + Z/2");
}

TEST(HomologyMod, MatchesCounts) {
  // Complex (Z/4)^1 --0--> (Z/4)^2 --[2 0]--> Z/4: ker = {x0 in {0,2}} x Z/4, order 8.
  IntMatrix a{{2, 0}};
  IntMatrix bnd{{2}, {0}};
  auto h = homology_mod(a, bnd, 4);
  EXPECT_EQ(h.cycles_order, 8);
  EXPECT_EQ(h.boundaries_order, 2);
  EXPECT_EQ(h.group.order(), 4);
  EXPECT_EQ(h.group.invariant_factors(), (IntVector{4}));
  // Over Z/6 mixing two primes.
  auto h6 = homology_mod(IntMatrix{{3, 0}, {0, 2}}, IntMatrix(2, 0), 6);
  EXPECT_EQ(h6.cycles_order, 6);
  EXPECT_EQ(h6.group.invariant_factors(), (IntVector{6}));
  for (std::size_t g = 0; g < h6.generators.size(); ++g) {
    const auto& x = h6.generators[g];
    EXPECT_EQ(mod(3 * x[0], 6), 0);
    EXPECT_EQ(mod(2 * x[1], 6), 0);
  }
}

TEST(HomologyMod, RandomAgainstEnumeration) {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> coef(0, 11);
  const std::int64_t choices[] = {2, 3, 4, 6, 8, 12};
  for (int t = 0; t < 60; ++t) {
    std::int64_t d = choices[t % 6];
    std::size_t n = 3;
    IntMatrix a(2, n);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = coef(rng) % d;
    // Boundaries: random elements of ker(a), found by enumeration.
    std::vector<IntVector> cycles;
    IntVector x(n);
    for (x[0] = 0; x[0] < d; ++x[0])
      for (x[1] = 0; x[1] < d; ++x[1])
        for (x[2] = 0; x[2] < d; ++x[2]) {
          auto y = a * x;
          if (mod(y[0], d) == 0 && mod(y[1], d) == 0) cycles.push_back(x);
        }
    std::uniform_int_distribution<std::size_t> pick(0, cycles.size() - 1);
    std::vector<IntVector> bcols{cycles[pick(rng)], cycles[pick(rng)]};
    auto h = homology_mod(a, IntMatrix::from_columns(bcols, n), d);
    EXPECT_EQ(h.cycles_order, static_cast<std::int64_t>(cycles.size()));
    std::set<IntVector> span;
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t u = 0; u < d; ++u) {
        IntVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = mod(s * bcols[0][i] + u * bcols[1][i], d);
        span.insert(v);
      }
    EXPECT_EQ(h.boundaries_order, static_cast<std::int64_t>(span.size()));
    EXPECT_EQ(h.group.order() * static_cast<std::int64_t>(span.size()), static_cast<std::int64_t>(cycles.size()));
  }
}
