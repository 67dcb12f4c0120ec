#pragma once

#include <map>
#include <vector>

#include "motivecalc/lattice.hpp"

namespace motivecalc {

struct PrimePower {
  std::int64_t prime;
  int exponent;
  std::int64_t value;
};

inline std::vector<PrimePower> factor_prime_powers(std::int64_t n) {
  std::vector<PrimePower> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.exponent;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

/// Smith form over the local ring Z/p^k: V_inv and V track the column
/// operations, pivots are normalized to p^v.
struct LocalSmith {
  IntMatrix V;
  IntMatrix V_inv;
  /// Valuation of each pivot (0 <= v < k), in pivot order.
  std::vector<int> valuations;
};

inline int valuation_mod(std::int64_t a, const PrimePower& q) {
  a = mod(a, q.value);
  if (a == 0) return q.exponent;
  int v = 0;
  while (a % q.prime == 0) {
    a /= q.prime;
    ++v;
  }
  return v;
}

inline LocalSmith local_smith(IntMatrix d, const PrimePower& q) {
  const std::int64_t Q = q.value;
  if (Q > (std::int64_t{1} << 31)) throw DeskLimitError("local Smith form modulus too large");
  const std::size_t rows = d.rows(), cols = d.cols();
  d = d.reduced_mod(Q);
  IntMatrix V = IntMatrix::identity(cols), V_inv = IntMatrix::identity(cols);
  std::vector<int> vals;
  const std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    int best = q.exponent;
    std::size_t pr = 0, pc = 0;
    for (std::size_t i = t; i < rows && best > 0; ++i) {
      const std::int64_t* row = d.row_ptr(i);
      for (std::size_t j = t; j < cols; ++j) {
        if (row[j] == 0) continue;
        int v = valuation_mod(row[j], q);
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
          if (v == 0) break;
        }
      }
    }
    if (best == q.exponent) break;
    d.swap_rows(t, pr);
    d.swap_cols(t, pc);
    V.swap_cols(t, pc);
    V_inv.swap_rows(t, pc);
    std::int64_t pv = 1;
    for (int e = 0; e < best; ++e) pv *= q.prime;
    const std::int64_t uinv = inv_mod(d(t, t) / pv, Q);
    std::int64_t* prow = d.row_ptr(t);
    for (std::size_t j = t; j < cols; ++j) prow[j] = prow[j] * uinv % Q;
    // Rows below: entries left of t are already zero.
    for (std::size_t i = t + 1; i < rows; ++i) {
      std::int64_t* row = d.row_ptr(i);
      if (!row[t]) continue;
      const std::int64_t f = mod(-(row[t] / pv), Q);
      for (std::size_t j = t; j < cols; ++j)
        if (prow[j]) row[j] = (row[j] + f * prow[j]) % Q;
    }
    // Column operations now only touch row t of d.
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (!prow[j]) continue;
      const std::int64_t f = mod(-(prow[j] / pv), Q);
      prow[j] = 0;
      for (std::size_t i = 0; i < cols; ++i) V(i, j) = (V(i, j) + f * V(i, t)) % Q;
      for (std::size_t k = 0; k < cols; ++k) V_inv(t, k) = mod(V_inv(t, k) - f * V_inv(j, k), Q);
    }
    vals.push_back(best);
  }
  return {std::move(V), std::move(V_inv), std::move(vals)};
}

/// Homology ker(A) / im(B) of a complex of free Z/d-modules.
///
/// `constraints` is m x n (A), `boundaries` is n x g (columns generate im B,
/// which must lie in ker A). Returns invariant factors of the quotient and one
/// representative vector (mod d) per cyclic generator.
struct ModularHomology {
  FiniteAbelianGroup group;
  /// Representatives of cyclic generators, paired with their orders; the
  /// orders are prime powers (primary decomposition).
  std::vector<IntVector> generators;
  IntVector generator_orders;
  /// Order of ker(A) and of im(B) (as subgroups of (Z/d)^n); 0 when the
  /// order does not fit in 64 bits.
  std::int64_t cycles_order = 1;
  std::int64_t boundaries_order = 1;
};

namespace detail {

inline std::int64_t saturating_mul_pow(std::int64_t acc, std::int64_t p, int e) {
  for (int i = 0; i < e && acc != 0; ++i) {
    std::int64_t r;
    acc = __builtin_mul_overflow(acc, p, &r) ? 0 : r;
  }
  return acc;
}

}  // namespace detail

inline ModularHomology homology_mod(const IntMatrix& constraints, const IntMatrix& boundaries, std::int64_t d) {
  const std::size_t n = constraints.cols();
  ModularHomology out;
  IntVector all_orders;
  for (const auto& q : factor_prime_powers(d)) {
    const std::int64_t Q = q.value;
    auto ppow = [&](int e) {
      std::int64_t r = 1;
      for (int i = 0; i < e; ++i) r *= q.prime;
      return r;
    };
    // Cycles: y = V^{-1} x with p^{v_i} y_i == 0.
    auto ls = local_smith(constraints, q);
    struct Slot {
      std::size_t column;
      std::int64_t scale;  // x = V[:, column] * scale generates the slot
      std::int64_t order;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < n; ++i) {
      int v = i < ls.valuations.size() ? ls.valuations[i] : q.exponent;
      if (v == 0) continue;
      slots.push_back({i, ppow(q.exponent - v), ppow(v)});
    }
    int cycle_exp = 0;
    for (const auto& s : slots) cycle_exp += q.exponent - valuation_mod(s.scale, q);
    out.cycles_order = detail::saturating_mul_pow(out.cycles_order, q.prime, cycle_exp);
    // Boundary generators in slot coordinates.
    const std::size_t r = slots.size();
    std::vector<IntVector> rel_rows;
    for (std::size_t g = 0; g < boundaries.cols(); ++g) {
      IntVector y(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) y[i] = mod(y[i] + mul_mod(ls.V_inv(i, k), boundaries(k, g), Q), Q);
      IntVector c(r, 0);
      for (std::size_t s = 0; s < r; ++s) {
        std::int64_t yi = y[slots[s].column];
        if (yi % slots[s].scale != 0) throw ValidationError("homology_mod: boundary is not a cycle");
        c[s] = yi / slots[s].scale;
      }
      rel_rows.push_back(std::move(c));
    }
    for (std::size_t s = 0; s < r; ++s) {
      IntVector e(r, 0);
      e[s] = slots[s].order % Q;
      rel_rows.push_back(std::move(e));
    }
    if (r == 0) {
      out.boundaries_order = detail::saturating_mul_pow(out.boundaries_order, q.prime, 0);
      continue;
    }
    IntMatrix rel = IntMatrix::from_rows(rel_rows, r);
    auto red = local_smith(rel, q);
    int homology_exp = 0;
    for (std::size_t j = 0; j < r; ++j) homology_exp += j < red.valuations.size() ? red.valuations[j] : q.exponent;
    out.boundaries_order = detail::saturating_mul_pow(out.boundaries_order, q.prime, cycle_exp - homology_exp);
    for (std::size_t j = 0; j < r; ++j) {
      int v = j < red.valuations.size() ? red.valuations[j] : q.exponent;
      if (v == 0) continue;
      // Generator: row j of V^{-1} in slot coordinates, mapped back to x.
      IntVector x(n, 0);
      for (std::size_t s = 0; s < r; ++s) {
        std::int64_t c = red.V_inv(j, s);
        if (!c) continue;
        for (std::size_t i = 0; i < n; ++i)
          x[i] = mod(x[i] + mul_mod(c, mul_mod(ls.V(i, slots[s].column), slots[s].scale, Q), Q), Q);
      }
      // Lift from Z/Q to Z/d via CRT: x * (d/Q) * ((d/Q)^{-1} mod Q).
      const std::int64_t co = d / Q;
      const std::int64_t lift = mul_mod(co, inv_mod(co, Q), d);
      for (auto& xi : x) xi = mul_mod(xi, lift, d);
      out.generators.push_back(std::move(x));
      out.generator_orders.push_back(ppow(v));
      all_orders.push_back(ppow(v));
    }
  }
  out.group = FiniteAbelianGroup::from_cyclic_orders(all_orders);
  return out;
}

}  // namespace motivecalc
