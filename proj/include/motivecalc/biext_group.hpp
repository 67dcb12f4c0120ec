#pragma once

#include <array>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>

#include "motivecalc/biext_cocycle.hpp"
#include "motivecalc/modular.hpp"

namespace motivecalc {

inline std::int64_t max_enum_from_env() {
  const char* s = std::getenv("MOTIVECALC_MAX_ENUM");
  if (!s || !*s) return 1000000;
  char* end = nullptr;
  long long v = std::strtoll(s, &end, 10);
  if (*end != '\0' || v <= 0) throw ValidationError(std::string("MOTIVECALC_MAX_ENUM is not a positive integer: ") + s);
  return v;
}

namespace detail {

/// Finite group with elements numbered and an addition table.
struct IndexedGroup {
  DeskGroup group;
  std::vector<Elem> elems;
  std::map<Elem, std::size_t> index_of;
  std::vector<std::vector<std::size_t>> sum;
  std::size_t zero = 0;

  explicit IndexedGroup(const DeskGroup& g) : group(g), elems(g.elements()) {
    for (std::size_t i = 0; i < elems.size(); ++i) index_of[elems[i]] = i;
    zero = index_of.at(g.zero());
    sum.assign(elems.size(), std::vector<std::size_t>(elems.size()));
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (std::size_t j = 0; j < elems.size(); ++j) sum[i][j] = index_of.at(g.add(elems[i], elems[j]));
  }
  std::size_t size() const { return elems.size(); }
  std::size_t index(const Elem& e) const {
    auto it = index_of.find(e);
    if (it == index_of.end()) throw ValidationError("element " + elem_to_string(e) + " is not in " + group.describe());
    return it->second;
  }
};

/// Free entries of a normalized symmetric cocycle pair: phi(i, j; q) with
/// 0 < i <= j, q != 0 and psi(p; i, j) with p != 0, 0 < i <= j.
struct CocycleVariables {
  std::size_t np, nq;
  std::vector<long> phi_var, psi_var;
  std::size_t count = 0;

  CocycleVariables(const IndexedGroup& P, const IndexedGroup& Q) : np(P.size()), nq(Q.size()) {
    phi_var.assign(np * np * nq, -1);
    psi_var.assign(np * nq * nq, -1);
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = i; j < np; ++j)
        for (std::size_t q = 0; q < nq; ++q) {
          if (i == P.zero || j == P.zero || q == Q.zero) continue;
          phi_var[(i * np + j) * nq + q] = phi_var[(j * np + i) * nq + q] = static_cast<long>(count++);
        }
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = i; j < nq; ++j) {
          if (p == P.zero || i == Q.zero || j == Q.zero) continue;
          psi_var[(p * nq + i) * nq + j] = psi_var[(p * nq + j) * nq + i] = static_cast<long>(count++);
        }
  }
  long phi(std::size_t i, std::size_t j, std::size_t q) const { return phi_var[(i * np + j) * nq + q]; }
  long psi(std::size_t p, std::size_t i, std::size_t j) const { return psi_var[(p * nq + i) * nq + j]; }
};

using SparseRow = std::map<long, std::int64_t>;

inline void bump(SparseRow& r, long var, std::int64_t c) {
  if (var < 0) return;
  auto& v = r[var];
  v += c;
  if (v == 0) r.erase(var);
}

/// Cocycle and interchange identities as integer rows in the free entries.
inline std::vector<SparseRow> cocycle_rows(const IndexedGroup& P, const IndexedGroup& Q, const CocycleVariables& V) {
  std::set<std::vector<std::pair<long, std::int64_t>>> seen;
  std::vector<SparseRow> rows;
  auto keep = [&](const SparseRow& r) {
    if (r.empty()) return;
    std::vector<std::pair<long, std::int64_t>> key(r.begin(), r.end());
    if (key.front().second < 0)
      for (auto& kv : key) kv.second = -kv.second;
    if (seen.insert(key).second) rows.push_back(r);
  };
  const std::size_t np = P.size(), nq = Q.size();
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t x = 0; x < np; ++x)
      for (std::size_t y = 0; y < np; ++y)
        for (std::size_t w = 0; w < np; ++w) {
          SparseRow r;
          bump(r, V.phi(x, y, q), 1);
          bump(r, V.phi(P.sum[x][y], w, q), 1);
          bump(r, V.phi(y, w, q), -1);
          bump(r, V.phi(x, P.sum[y][w], q), -1);
          keep(r);
        }
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t x = 0; x < nq; ++x)
      for (std::size_t y = 0; y < nq; ++y)
        for (std::size_t w = 0; w < nq; ++w) {
          SparseRow r;
          bump(r, V.psi(p, x, y), 1);
          bump(r, V.psi(p, Q.sum[x][y], w), 1);
          bump(r, V.psi(p, y, w), -1);
          bump(r, V.psi(p, x, Q.sum[y][w]), -1);
          keep(r);
        }
  for (std::size_t p1 = 0; p1 < np; ++p1)
    for (std::size_t p2 = 0; p2 < np; ++p2)
      for (std::size_t q1 = 0; q1 < nq; ++q1)
        for (std::size_t q2 = 0; q2 < nq; ++q2) {
          SparseRow r;
          bump(r, V.phi(p1, p2, q1), 1);
          bump(r, V.phi(p1, p2, q2), 1);
          bump(r, V.psi(P.sum[p1][p2], q1, q2), 1);
          bump(r, V.psi(p1, q1, q2), -1);
          bump(r, V.psi(p2, q1, q2), -1);
          bump(r, V.phi(p1, p2, Q.sum[q1][q2]), -1);
          keep(r);
        }
  return rows;
}

/// Columns delta(e_{a,b}) for the normalized functions h: P x Q -> G.
inline IntMatrix coboundary_columns(const IndexedGroup& P, const IndexedGroup& Q, const CocycleVariables& V) {
  const std::size_t np = P.size(), nq = Q.size();
  std::vector<IntVector> cols;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < nq; ++b) {
      if (a == P.zero || b == Q.zero) continue;
      IntVector c(V.count, 0);
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = i; j < np; ++j) {
          long v = V.phi(i, j, b);
          if (v < 0) continue;
          c[static_cast<std::size_t>(v)] += (i == a) + (j == a) - (P.sum[i][j] == a);
        }
      for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = i; j < nq; ++j) {
          long v = V.psi(a, i, j);
          if (v < 0) continue;
          c[static_cast<std::size_t>(v)] += (i == b) + (j == b) - (Q.sum[i][j] == b);
        }
      cols.push_back(std::move(c));
    }
  if (cols.empty()) return IntMatrix(V.count, 0);
  return IntMatrix::from_columns(cols, V.count);
}

/// Invariant factors of a finite abelian group of order n from
/// killed(k) = #{x : k x = 0} at prime powers k.
inline FiniteAbelianGroup structure_from_kill_counts(std::int64_t n, const std::function<std::int64_t(std::int64_t)>& killed) {
  IntVector cyclic;
  for (const auto& q : factor_prime_powers(n)) {
    std::int64_t prev = 1, pk = 1;
    std::vector<int> at_least;  // at_least[j-1] = #{cyclic factors of order >= p^j}
    for (int j = 1; j <= q.exponent; ++j) {
      pk *= q.prime;
      std::int64_t c = killed(pk);
      std::int64_t ratio = c / prev;
      int r = 0;
      while (ratio > 1) {
        ratio /= q.prime;
        ++r;
      }
      at_least.push_back(r);
      prev = c;
      if (r == 0) break;
    }
    std::int64_t ord = 1;
    for (std::size_t j = 0; j < at_least.size(); ++j) {
      ord *= q.prime;
      int exact = at_least[j] - (j + 1 < at_least.size() ? at_least[j + 1] : 0);
      for (int t = 0; t < exact; ++t) cyclic.push_back(ord);
    }
  }
  return FiniteAbelianGroup::from_cyclic_orders(cyclic);
}

}  // namespace detail

/// Biadditive maps P x Q -> G, i.e. Hom(P (x) Q, G).
inline GroupDescription biext0(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G) {
  const auto& dp = P.decomposition();
  const auto& dq = Q.decomposition();
  const auto& dg = G.decomposition();
  std::vector<std::array<std::size_t, 3>> vars;
  IntVector var_mod;
  for (std::size_t i = 0; i < dp.orders.size(); ++i)
    for (std::size_t j = 0; j < dq.orders.size(); ++j)
      for (std::size_t k = 0; k < dg.orders.size(); ++k) {
        vars.push_back({i, j, k});
        var_mod.push_back(dg.orders[k]);
      }
  if (vars.empty()) return {};
  std::vector<IntVector> rows;
  IntVector moduli;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    auto [i, j, k] = vars[v];
    for (std::int64_t a : {dp.orders[i], dq.orders[j]}) {
      if (a == 0) continue;
      IntVector r(vars.size(), 0);
      r[v] = a;
      rows.push_back(r);
      moduli.push_back(dg.orders[k]);
    }
  }
  if (rows.empty()) {
    ModularSolution free;
    free.variable_moduli = var_mod;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      IntVector e(vars.size(), 0);
      e[v] = 1;
      free.kernel.push_back(e);
    }
    return free.group();
  }
  auto sol = solve_linear_system_mod(IntMatrix::from_rows(rows, vars.size()), IntVector(rows.size(), 0), moduli, var_mod);
  return sol->group();
}

struct Biext1Result {
  GroupDescription group;
  /// One cocycle pair per cyclic generator (prime-power orders).
  std::vector<BiextCocycle> generators;
  IntVector generator_orders;
  /// 0 when the order does not fit in 64 bits.
  std::int64_t cocycles_order = 1;
  std::int64_t coboundaries_order = 1;
};

/// Trivialization of a cocycle pair over lattice factors with zero anchors.
inline Trivialization lattice_triviality_witness(const BiextCocycle& b) {
  return lattice_trivialization(b, [G = b.G](std::size_t, std::size_t) { return G.zero(); });
}

/// Isomorphism classes of biextensions of (P, Q) by G: cocycle pairs modulo coboundaries.
inline Biext1Result biext1(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G) {
  const bool pl = P.kind() == "lattice", ql = Q.kind() == "lattice";
  if (pl && ql) return {};
  if (pl || ql || !P.is_finite() || !Q.is_finite())
    throw DeskLimitError("biext1 is unsupported for mixed lattice and finite factors");
  if (!G.is_finite()) throw DeskLimitError("biext1 needs a finite value group");
  if (P.order() > 16 || Q.order() > 16 || G.order() > 16)
    throw DeskLimitError("biext1 is limited to groups of order at most 16");
  auto IP = std::make_shared<const detail::IndexedGroup>(P);
  auto IQ = std::make_shared<const detail::IndexedGroup>(Q);
  auto V = std::make_shared<const detail::CocycleVariables>(*IP, *IQ);
  const auto& dg = G.decomposition();
  Biext1Result out;
  if (V->count == 0) return out;
  auto rows = detail::cocycle_rows(*IP, *IQ, *V);
  IntMatrix A(rows.size(), V->count);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [var, c] : rows[r]) A(r, static_cast<std::size_t>(var)) = c;
  IntMatrix B = detail::coboundary_columns(*IP, *IQ, *V);
  IntVector orders;
  for (std::size_t k = 0; k < dg.orders.size(); ++k) {
    const std::int64_t d = dg.orders[k];
    auto h = homology_mod(A, B, d);
    auto sat = [](std::int64_t a, std::int64_t b) {
      std::int64_t r;
      return (a == 0 || b == 0 || __builtin_mul_overflow(a, b, &r)) ? std::int64_t{0} : r;
    };
    out.cocycles_order = sat(out.cocycles_order, h.cycles_order);
    out.coboundaries_order = sat(out.coboundaries_order, h.boundaries_order);
    for (std::size_t g = 0; g < h.generators.size(); ++g) {
      auto x = std::make_shared<const IntVector>(h.generators[g]);
      auto value = [G, k, x, ncoords = dg.orders.size()](long var) {
        IntVector c(ncoords, 0);
        if (var >= 0) c[k] = (*x)[static_cast<std::size_t>(var)];
        return G.from_coords(c);
      };
      BiextCocycle cyc{P, Q, G,
                       [IP, IQ, V, value](const Elem& p1, const Elem& p2, const Elem& q) {
                         return value(V->phi(IP->index(p1), IP->index(p2), IQ->index(q)));
                       },
                       [IP, IQ, V, value](const Elem& p, const Elem& q1, const Elem& q2) {
                         return value(V->psi(IP->index(p), IQ->index(q1), IQ->index(q2)));
                       }};
      out.generators.push_back(std::move(cyc));
      out.generator_orders.push_back(h.generator_orders[g]);
      orders.push_back(h.generator_orders[g]);
    }
  }
  out.group.torsion = FiniteAbelianGroup::from_cyclic_orders(orders);
  return out;
}

/// h with delta(h) = b when b is a coboundary (finite P, Q).
inline std::optional<Trivialization> find_coboundary(const BiextCocycle& b) {
  auto IP = std::make_shared<const detail::IndexedGroup>(b.P);
  auto IQ = std::make_shared<const detail::IndexedGroup>(b.Q);
  detail::CocycleVariables V(*IP, *IQ);
  const auto& dg = b.G.decomposition();
  IntMatrix B = detail::coboundary_columns(*IP, *IQ, V);
  // Right-hand side: coordinates of the free entries of b.
  std::vector<IntVector> rhs(dg.orders.size(), IntVector(V.count, 0));
  auto put = [&](long var, const Elem& value) {
    if (var < 0) return;
    auto c = dg.coords(value);
    for (std::size_t k = 0; k < c.size(); ++k) rhs[k][static_cast<std::size_t>(var)] = c[k];
  };
  for (std::size_t i = 0; i < IP->size(); ++i)
    for (std::size_t j = 0; j < IP->size(); ++j)
      for (std::size_t q = 0; q < IQ->size(); ++q) put(V.phi(i, j, q), b.phi(IP->elems[i], IP->elems[j], IQ->elems[q]));
  for (std::size_t p = 0; p < IP->size(); ++p)
    for (std::size_t i = 0; i < IQ->size(); ++i)
      for (std::size_t j = 0; j < IQ->size(); ++j) put(V.psi(p, i, j), b.psi(IP->elems[p], IQ->elems[i], IQ->elems[j]));
  if (verify_biext_cocycle(b).ok() == false) return std::nullopt;
  auto values = std::make_shared<std::vector<IntVector>>(IP->size() * IQ->size(), IntVector(dg.orders.size(), 0));
  for (std::size_t k = 0; k < dg.orders.size(); ++k) {
    auto sol = solve_linear_system_mod(B, rhs[k], IntVector(V.count, dg.orders[k]), IntVector(B.cols(), dg.orders[k]));
    if (!sol) return std::nullopt;
    std::size_t c = 0;
    for (std::size_t a = 0; a < IP->size(); ++a)
      for (std::size_t q = 0; q < IQ->size(); ++q) {
        if (a == IP->zero || q == IQ->zero) continue;
        (*values)[a * IQ->size() + q][k] = sol->particular[c++];
      }
  }
  DeskGroup G = b.G;
  return Trivialization{[IP, IQ, values, G](const Elem& p, const Elem& q) {
    return G.from_coords((*values)[IP->index(p) * IQ->size() + IQ->index(q)]);
  }};
}

struct BruteForceResult {
  GroupDescription group;
  std::int64_t candidates = 0;
  std::int64_t cocycles = 0;
  std::int64_t coboundaries = 0;
};

namespace detail {

inline std::int64_t checked_pow(std::int64_t base, std::size_t e, std::int64_t cap, const std::string& what) {
  std::int64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / std::max<std::int64_t>(base, 1))
      throw DeskLimitError(what + ": more than " + std::to_string(cap) + " candidates (MOTIVECALC_MAX_ENUM)");
    r *= base;
  }
  return r;
}

/// Odometer over all vectors in {0..base-1}^n.
inline bool next_tuple(std::vector<std::size_t>& t, std::size_t base) {
  for (auto& v : t) {
    if (++v < base) return true;
    v = 0;
  }
  return false;
}

}  // namespace detail

/// Exhaustive Biext^1 count: all normalized symmetric tables, filtered by the
/// cocycle and interchange identities, modulo all coboundaries.
inline BruteForceResult biext1_brute_force(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G,
                                           std::int64_t max_enum = max_enum_from_env()) {
  detail::IndexedGroup IP(P), IQ(Q), IG(G);
  detail::CocycleVariables V(IP, IQ);
  const std::size_t np = IP.size(), nq = IQ.size(), ng = IG.size();
  BruteForceResult out;
  out.candidates = detail::checked_pow(static_cast<std::int64_t>(ng), V.count, max_enum, "biext1 brute force");
  using Table = std::vector<std::size_t>;
  auto val = [&](const Table& t, long var) { return var < 0 ? IG.zero : t[static_cast<std::size_t>(var)]; };
  auto add = [&](std::size_t a, std::size_t b) { return IG.sum[a][b]; };
  auto valid = [&](const Table& t) {
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t x = 0; x < np; ++x)
        for (std::size_t y = 0; y < np; ++y)
          for (std::size_t w = 0; w < np; ++w)
            if (add(val(t, V.phi(x, y, q)), val(t, V.phi(IP.sum[x][y], w, q))) !=
                add(val(t, V.phi(y, w, q)), val(t, V.phi(x, IP.sum[y][w], q))))
              return false;
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t x = 0; x < nq; ++x)
        for (std::size_t y = 0; y < nq; ++y)
          for (std::size_t w = 0; w < nq; ++w)
            if (add(val(t, V.psi(p, x, y)), val(t, V.psi(p, IQ.sum[x][y], w))) !=
                add(val(t, V.psi(p, y, w)), val(t, V.psi(p, x, IQ.sum[y][w]))))
              return false;
    for (std::size_t p1 = 0; p1 < np; ++p1)
      for (std::size_t p2 = 0; p2 < np; ++p2)
        for (std::size_t q1 = 0; q1 < nq; ++q1)
          for (std::size_t q2 = 0; q2 < nq; ++q2) {
            std::size_t l = add(add(val(t, V.phi(p1, p2, q1)), val(t, V.phi(p1, p2, q2))), val(t, V.psi(IP.sum[p1][p2], q1, q2)));
            std::size_t r = add(add(val(t, V.psi(p1, q1, q2)), val(t, V.psi(p2, q1, q2))), val(t, V.phi(p1, p2, IQ.sum[q1][q2])));
            if (l != r) return false;
          }
    return true;
  };
  std::vector<Table> cocycles;
  Table t(V.count, 0);
  do {
    if (valid(t)) cocycles.push_back(t);
  } while (detail::next_tuple(t, ng));
  out.cocycles = static_cast<std::int64_t>(cocycles.size());

  // Coboundaries of all normalized h.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < nq; ++b)
      if (a != IP.zero && b != IQ.zero) cells.emplace_back(a, b);
  detail::checked_pow(static_cast<std::int64_t>(ng), cells.size(), max_enum, "coboundary enumeration");
  std::vector<std::size_t> neg(ng);
  for (std::size_t i = 0; i < ng; ++i)
    for (std::size_t j = 0; j < ng; ++j)
      if (IG.sum[i][j] == IG.zero) neg[i] = j;
  std::set<Table> bounds;
  std::vector<std::size_t> h(cells.size(), 0);
  std::vector<std::size_t> hv(np * nq);
  do {
    std::fill(hv.begin(), hv.end(), IG.zero);
    for (std::size_t c = 0; c < cells.size(); ++c) hv[cells[c].first * nq + cells[c].second] = h[c];
    auto H = [&](std::size_t p, std::size_t q) { return hv[p * nq + q]; };
    Table d(V.count);
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j)
        for (std::size_t q = 0; q < nq; ++q) {
          long v = V.phi(i, j, q);
          if (v >= 0) d[static_cast<std::size_t>(v)] = add(add(H(i, q), H(j, q)), neg[H(IP.sum[i][j], q)]);
        }
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
          long v = V.psi(p, i, j);
          if (v >= 0) d[static_cast<std::size_t>(v)] = add(add(H(p, i), H(p, j)), neg[H(p, IQ.sum[i][j])]);
        }
    bounds.insert(std::move(d));
  } while (detail::next_tuple(h, ng));
  out.coboundaries = static_cast<std::int64_t>(bounds.size());

  const std::int64_t order = out.cocycles / out.coboundaries;
  auto scaled = [&](const Table& c, std::int64_t k) {
    Table r(c.size(), IG.zero);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::int64_t s = 0; s < k; ++s) r[i] = add(r[i], c[i]);
    return r;
  };
  auto killed = [&](std::int64_t k) {
    std::int64_t n = 0;
    for (const auto& c : cocycles)
      if (bounds.count(scaled(c, k))) ++n;
    return n / out.coboundaries;
  };
  out.group.torsion = detail::structure_from_kill_counts(order, killed);
  return out;
}

/// Exhaustive Biext^0: all tables on nonzero pairs that are biadditive.
inline BruteForceResult biext0_brute_force(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G,
                                           std::int64_t max_enum = max_enum_from_env()) {
  detail::IndexedGroup IP(P), IQ(Q), IG(G);
  const std::size_t np = IP.size(), nq = IQ.size(), ng = IG.size();
  BruteForceResult out;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < nq; ++b)
      if (a != IP.zero && b != IQ.zero) cells.emplace_back(a, b);
  out.candidates = detail::checked_pow(static_cast<std::int64_t>(ng), cells.size(), max_enum, "biext0 brute force");
  std::vector<std::vector<std::size_t>> maps;
  std::vector<std::size_t> t(cells.size(), 0), f(np * nq);
  do {
    std::fill(f.begin(), f.end(), IG.zero);
    for (std::size_t c = 0; c < cells.size(); ++c) f[cells[c].first * nq + cells[c].second] = t[c];
    bool ok = true;
    for (std::size_t a = 0; a < np && ok; ++a)
      for (std::size_t b = 0; b < np && ok; ++b)
        for (std::size_t q = 0; q < nq && ok; ++q)
          ok = f[IP.sum[a][b] * nq + q] == IG.sum[f[a * nq + q]][f[b * nq + q]];
    for (std::size_t p = 0; p < np && ok; ++p)
      for (std::size_t a = 0; a < nq && ok; ++a)
        for (std::size_t b = 0; b < nq && ok; ++b)
          ok = f[p * nq + IQ.sum[a][b]] == IG.sum[f[p * nq + a]][f[p * nq + b]];
    if (ok) maps.push_back(f);
  } while (detail::next_tuple(t, ng));
  out.cocycles = static_cast<std::int64_t>(maps.size());
  out.coboundaries = 1;
  auto killed = [&](std::int64_t k) {
    std::int64_t n = 0;
    for (const auto& m : maps) {
      bool zero = true;
      for (auto v : m) {
        std::size_t acc = IG.zero;
        for (std::int64_t s = 0; s < k; ++s) acc = IG.sum[acc][v];
        zero &= acc == IG.zero;
      }
      n += zero;
    }
    return n;
  };
  out.group.torsion = detail::structure_from_kill_counts(out.cocycles, killed);
  return out;
}

}  // namespace motivecalc
