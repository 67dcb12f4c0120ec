#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "motivecalc/biext_motive.hpp"

namespace motivecalc {

/// C0 -> Cm1 -> Cm2 with lattice coordinates. Torus values enter through
/// discrete logarithms, so the differentials are integer matrices.
struct ThreeTermComplex {
  std::vector<std::string> C0, Cm1, Cm2;  // labels of the summands
  int rank0 = 0, rankm1 = 0, rankm2 = 0;
  IntMatrix d0;   // rankm1 x rank0
  IntMatrix dm1;  // rankm2 x rankm1
};

namespace detail {

inline std::int64_t field_dlog(const PrimeField& F, std::int64_t v) {
  const std::int64_t g = F.primitive_root();
  std::int64_t x = 1;
  for (std::int64_t k = 0; k < F.p() - 1; ++k) {
    if (x == F.reduce(v)) return k;
    x = F.mul(x, g);
  }
  throw ValidationError("no discrete logarithm of " + std::to_string(v) + " in F_" + std::to_string(F.p()));
}

/// u: X -> Y(1) as the matrix of discrete logs, rank Y x rank X.
inline IntMatrix dlog_matrix(const OneMotive& M) {
  const auto& d = M.data();
  IntMatrix U(static_cast<std::size_t>(d.ydual_rank), static_cast<std::size_t>(d.x_rank));
  for (std::size_t i = 0; i < U.cols(); ++i)
    for (std::size_t j = 0; j < U.rows(); ++j) U(j, i) = field_dlog(d.field, d.psi(i, j));
  return U;
}

}  // namespace detail

/// M (x) N for torus-only M = [X -> Y(1)], N = [X' -> Y'(1)]:
/// X(x)X' -> X(x)Y'(1) + Y(1)(x)X' -> Y(1)(x)Y'(1), with d0 = (-id (x) u_N, u_M (x) id)
/// and dm1 = u_M (x) id + id (x) u_N.
inline ThreeTermComplex tensor_complex(const OneMotive& M, const OneMotive& N) {
  if (M.has_abelian() || N.has_abelian()) throw ValidationError("tensor complex needs motives without abelian part");
  if (!(M.field() == N.field())) throw ValidationError("motives over different fields");
  const IntMatrix UM = detail::dlog_matrix(M), UN = detail::dlog_matrix(N);
  const std::size_t x = UM.cols(), y = UM.rows(), x2 = UN.cols(), y2 = UN.rows();
  const IntMatrix IX = IntMatrix::identity(x), IX2 = IntMatrix::identity(x2), IY = IntMatrix::identity(y),
                  IY2 = IntMatrix::identity(y2);
  IntMatrix neg = kronecker(IX, UN);
  for (std::size_t i = 0; i < neg.rows(); ++i)
    for (std::size_t j = 0; j < neg.cols(); ++j) neg(i, j) = -neg(i, j);
  ThreeTermComplex c;
  const std::string m = M.name().empty() ? "M" : M.name(), n = N.name().empty() ? "N" : N.name();
  c.C0 = {"X_" + m + "(x)X_" + n};
  c.Cm1 = {"X_" + m + "(x)Y_" + n + "(1)", "Y_" + m + "(1)(x)X_" + n};
  c.Cm2 = {"Y_" + m + "(1)(x)Y_" + n + "(1)"};
  c.rank0 = static_cast<int>(x * x2);
  c.rankm1 = static_cast<int>(x * y2 + y * x2);
  c.rankm2 = static_cast<int>(y * y2);
  c.d0 = neg.vstack(kronecker(UM, IX2));
  c.dm1 = kronecker(UM, IY2).hstack(kronecker(IY, UN));
  const IntMatrix dd = c.dm1 * c.d0;
  for (std::size_t i = 0; i < dd.rows(); ++i)
    for (std::size_t j = 0; j < dd.cols(); ++j)
      if (dd(i, j) != 0) throw std::logic_error("tensor complex: dm1 o d0 != 0");
  return c;
}

/// A tensor word over l motives: letter 0 = X_j (weight 0), 1 = A_j (weight -1),
/// 2 = Y_j(1) (weight -2) in position j.
using TensorWord = std::vector<int>;

inline int word_weight(const TensorWord& w) {
  int s = 0;
  for (int c : w) s -= c;
  return s;
}

inline std::int64_t word_rank(const TensorWord& w, const std::vector<WeightGraded>& g) {
  std::int64_t r = 1;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const int piece = w[j] == 0 ? g[j].gr0_rank : w[j] == 1 ? g[j].grm1_dim : g[j].grm2_rank;
    r = checked::mul(r, piece);
  }
  return r;
}

inline std::string word_to_string(const TensorWord& w) {
  std::string s;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) s += "(x)";
    s += (w[j] == 0 ? "X" : w[j] == 1 ? "A" : "Y") + std::to_string(j + 1) + (w[j] == 2 ? "(1)" : "");
  }
  return s;
}

struct GradedPiece {
  TensorWord word;
  int multiplicity = 0;  // p + m: X factors of the nu-block plus weight-0 factors of the iota-block
};

struct GradedSummand {
  std::vector<int> nu_indices;    // 1-based, increasing
  std::vector<int> iota_indices;  // 1-based, increasing
  int multiplicity = 0;           // of the weight-0 piece
  std::string factor_description;
  std::vector<GradedPiece> pieces;
};

/// Summands X_nu (x) (M_iota / W_{-i}) over ordered splittings of {1..l}
/// with |iota| = i - 1 and |nu| = l - i + 1.
inline std::vector<GradedSummand> graded_decomposition(int l, int i) {
  if (l < 1 || i < 1 || i > l + 1)
    throw ValidationError("graded decomposition needs l >= 1 and 1 <= i <= l + 1 (got l = " + std::to_string(l) +
                          ", i = " + std::to_string(i) + ")");
  std::vector<GradedSummand> out;
  const int k = i - 1;
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    if (std::popcount(mask) != k) continue;
    GradedSummand s;
    for (int j = 0; j < l; ++j) ((mask >> j) & 1u ? s.iota_indices : s.nu_indices).push_back(j + 1);
    const int p = static_cast<int>(s.nu_indices.size());
    std::string desc;
    for (int j : s.nu_indices) desc += "X" + std::to_string(j) + "(x)";
    std::string inner;
    for (int j : s.iota_indices) inner += (inner.empty() ? "M" : "(x)M") + std::to_string(j);
    desc += inner.empty() ? "Z(0)" : "(" + inner + "/W_-" + std::to_string(i) + ")";
    s.factor_description = desc;
    // Words of the iota-block of weight > -i, padded with X on the nu-block.
    std::vector<int> letters(static_cast<std::size_t>(k), 0);
    while (true) {
      int wt = 0;
      for (int c : letters) wt -= c;
      if (wt > -i) {
        TensorWord w(static_cast<std::size_t>(l), 0);
        int m = 0;
        for (int t = 0; t < k; ++t) {
          w[static_cast<std::size_t>(s.iota_indices[static_cast<std::size_t>(t)] - 1)] = letters[static_cast<std::size_t>(t)];
          m += letters[static_cast<std::size_t>(t)] == 0;
        }
        s.pieces.push_back({w, p + m});
      }
      int t = 0;
      while (t < k && letters[static_cast<std::size_t>(t)] == 2) letters[static_cast<std::size_t>(t++)] = 0;
      if (t == k) break;
      ++letters[static_cast<std::size_t>(t)];
    }
    s.multiplicity = p + k;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<WeightGraded> graded_profile(const std::vector<OneMotive>& motives) {
  std::vector<WeightGraded> g;
  for (const auto& M : motives) g.push_back(weight_graded(M));
  return g;
}

/// Ranks of Gr_0, Gr_-1, Gr_-2, ... indexed by -weight.
struct GradedRanks {
  std::vector<std::int64_t> by_weight;
  std::int64_t at(int w) const {
    const auto k = static_cast<std::size_t>(-w);
    return k < by_weight.size() ? by_weight[k] : 0;
  }
  void add(int w, std::int64_t r) {
    const auto k = static_cast<std::size_t>(-w);
    if (by_weight.size() <= k) by_weight.resize(k + 1, 0);
    by_weight[k] = checked::add(by_weight[k], r);
  }
};

struct GradedRankCheck {
  int l = 0, i = 0;
  GradedRanks lhs;  // formula side, with multiplicities
  GradedRanks rhs;  // direct quotient
  std::int64_t gr0_multiplier = 0, grm1_multiplier = 0;
  bool gr0_holds = false, grm1_holds = false;
  /// lhs / rhs for Gr_0 and Gr_-1 when rhs is nonzero.
  std::optional<double> gr0_ratio, grm1_ratio;
  bool holds() const { return gr0_holds && grm1_holds; }
};

/// Formula side by (nu, iota) splittings, each distinct word counted once with
/// multiplicity p + m; direct side by expanding all 3^l words of (x) M_j and
/// truncating at weight -i.
inline GradedRankCheck graded_rank_check(const std::vector<WeightGraded>& g, int i) {
  const int l = static_cast<int>(g.size());
  GradedRankCheck out;
  out.l = l;
  out.i = i;
  std::map<TensorWord, int> seen;
  for (const auto& s : graded_decomposition(l, i))
    for (const auto& piece : s.pieces) {
      auto [it, fresh] = seen.emplace(piece.word, piece.multiplicity);
      if (!fresh && it->second != piece.multiplicity)
        throw std::logic_error("inconsistent multiplicity for " + word_to_string(piece.word));
    }
  for (const auto& [w, mult] : seen) out.lhs.add(word_weight(w), checked::mul(mult, word_rank(w, g)));

  TensorWord w(static_cast<std::size_t>(l), 0);
  while (true) {
    if (word_weight(w) > -i) out.rhs.add(word_weight(w), word_rank(w, g));
    std::size_t t = 0;
    while (t < w.size() && w[t] == 2) w[t++] = 0;
    if (t == w.size()) break;
    ++w[t];
  }
  out.gr0_multiplier = l;
  out.grm1_multiplier = l - 1;
  out.gr0_holds = out.lhs.at(0) == checked::mul(l, out.rhs.at(0));
  out.grm1_holds = out.lhs.at(-1) == checked::mul(l - 1, out.rhs.at(-1));
  if (out.rhs.at(0)) out.gr0_ratio = static_cast<double>(out.lhs.at(0)) / static_cast<double>(out.rhs.at(0));
  if (out.rhs.at(-1)) out.grm1_ratio = static_cast<double>(out.lhs.at(-1)) / static_cast<double>(out.rhs.at(-1));
  return out;
}

inline GradedRankCheck graded_rank_check(const std::vector<OneMotive>& motives, int i) {
  return graded_rank_check(graded_profile(motives), i);
}

enum class CellStatus { forbidden, nonzero, symbolic };

inline std::string to_string(CellStatus c) {
  switch (c) {
    case CellStatus::forbidden: return "forbidden";
    case CellStatus::nonzero: return "possibly-nonzero";
    case CellStatus::symbolic: return "symbolic";
  }
  return "";
}

/// Rows: Gr_0 .. Gr_-4 of M1 (x) M2. Columns: X3 (weight 0), A3 (-1), Y3(1) (-2).
struct ComponentMatrix {
  std::vector<std::string> row_labels, col_labels;
  std::vector<std::int64_t> row_ranks, col_ranks;
  std::vector<std::vector<CellStatus>> cells;

  static int row_weight(std::size_t r) { return -static_cast<int>(r); }
  static int col_weight(std::size_t c) { return -static_cast<int>(c); }

  /// Weights w of the rows holding a non-forbidden cell, e.g. {0, -2}.
  std::vector<int> live_weights() const {
    std::vector<int> out;
    for (std::size_t r = 0; r < cells.size(); ++r)
      for (auto c : cells[r])
        if (c != CellStatus::forbidden) {
          out.push_back(row_weight(r));
          break;
        }
    return out;
  }
  CellStatus at_weight(int w) const {
    for (std::size_t r = 0; r < cells.size(); ++r)
      if (row_weight(r) == w)
        for (auto c : cells[r])
          if (c != CellStatus::forbidden) return c;
    return CellStatus::forbidden;
  }
};

/// Components of a morphism M1 (x) M2 -> M3 allowed by weights. Depends only
/// on the graded ranks. The Gr_-1 -> A3 cell (abelian to abelian) is symbolic.
inline ComponentMatrix weight_component_solver(const WeightGraded& g1, const WeightGraded& g2, const WeightGraded& g3) {
  ComponentMatrix m;
  auto x = [](const WeightGraded& g) -> std::int64_t { return g.gr0_rank; };
  auto a = [](const WeightGraded& g) -> std::int64_t { return g.grm1_dim; };
  auto y = [](const WeightGraded& g) -> std::int64_t { return g.grm2_rank; };
  m.row_labels = {"X1(x)X2", "X1(x)A2 + A1(x)X2", "X1(x)Y2(1) + A1(x)A2 + Y1(1)(x)X2", "A1(x)Y2(1) + Y1(1)(x)A2", "Y1(1)(x)Y2(1)"};
  m.row_ranks = {x(g1) * x(g2), x(g1) * a(g2) + a(g1) * x(g2), x(g1) * y(g2) + a(g1) * a(g2) + y(g1) * x(g2),
                 a(g1) * y(g2) + y(g1) * a(g2), y(g1) * y(g2)};
  m.col_labels = {"X3", "A3", "Y3(1)"};
  m.col_ranks = {x(g3), a(g3), y(g3)};
  for (std::size_t r = 0; r < m.row_ranks.size(); ++r) {
    std::vector<CellStatus> row;
    for (std::size_t c = 0; c < m.col_ranks.size(); ++c) {
      CellStatus st = CellStatus::forbidden;
      if (ComponentMatrix::row_weight(r) == ComponentMatrix::col_weight(c) && m.row_ranks[r] > 0 && m.col_ranks[c] > 0)
        st = c == 1 ? CellStatus::symbolic : CellStatus::nonzero;
      row.push_back(st);
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

inline ComponentMatrix weight_component_solver(const OneMotive& M1, const OneMotive& M2, const OneMotive& M3) {
  return weight_component_solver(weight_graded(M1), weight_graded(M2), weight_graded(M3));
}

struct HomTensorTerm {
  int i = 0, j = 0;                // ordered pair, 1-based
  std::int64_t multiplicity = 0;   // copies from tensoring by the other lattices
  bool computed = false;
  GroupDescription group;          // Biext^1(M_i, M_j; M) when computed
  std::string description;
};

struct HomTensorResult {
  std::vector<HomTensorTerm> terms;
  GroupDescription ordered_total, unordered_total;  // over computed terms, with multiplicities
  int symbolic_ordered = 0, symbolic_unordered = 0;
};

/// Hom(M_1 (x) ... (x) M_l, M) as a sum over ordered pairs i != j of
/// Biext^1(M_i, M_j; M). Pairs of torus-only motives into a torus-free M give
/// Hom(X_i (x) X_j, V); other shapes are reported symbolically.
inline HomTensorResult hom_tensor_group(const std::vector<OneMotive>& motives, const OneMotive& M) {
  const int l = static_cast<int>(motives.size());
  if (l < 2) throw ValidationError("hom_tensor_group needs at least two factors");
  HomTensorResult out;
  const auto& dM = M.data();
  for (int i = 1; i <= l; ++i)
    for (int j = 1; j <= l; ++j) {
      if (i == j) continue;
      HomTensorTerm t;
      t.i = i;
      t.j = j;
      t.multiplicity = 1;
      for (int k = 1; k <= l; ++k)
        if (k != i && k != j) t.multiplicity = checked::mul(t.multiplicity, motives[static_cast<std::size_t>(k - 1)].data().x_rank);
      const auto& Mi = motives[static_cast<std::size_t>(i - 1)];
      const auto& Mj = motives[static_cast<std::size_t>(j - 1)];
      const std::string name = "Biext^1(M" + std::to_string(i) + ",M" + std::to_string(j) + ";M)";
      if (Mi.is_torus_only() && Mj.is_torus_only() && dM.ydual_rank == 0) {
        t.computed = true;
        t.group = biext1_of_motives(Mi, Mj, M);
        const std::int64_t r = t.group.free_rank;
        t.description = name + " = Hom(X" + std::to_string(i) + "(x)X" + std::to_string(j) + ", V) = " + t.group.to_string();
        out.ordered_total.free_rank += static_cast<int>(checked::mul(t.multiplicity, r));
        if (i < j) out.unordered_total.free_rank += static_cast<int>(checked::mul(t.multiplicity, r));
      } else {
        t.group.symbolic = true;
        t.group.symbol = name;
        t.description = name + " (symbolic)";
        ++out.symbolic_ordered;
        if (i < j) ++out.symbolic_unordered;
      }
      out.terms.push_back(std::move(t));
    }
  return out;
}

}  // namespace motivecalc
