#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "motivecalc/smith.hpp"

namespace motivecalc {

/// Free Z-module of finite rank, Z^rank.
struct Lattice {
  int rank = 0;
  std::string label;

  Lattice() = default;
  explicit Lattice(int r, std::string l = {}) : rank(r), label(std::move(l)) {
    if (r < 0) throw ValidationError("lattice rank must be non-negative");
  }
  friend bool operator==(const Lattice& a, const Lattice& b) { return a.rank == b.rank; }
};

/// Z-linear map between lattices, matrix of shape target.rank x source.rank.
class LatticeMap {
 public:
  LatticeMap(Lattice source, Lattice target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != static_cast<std::size_t>(target_.rank) ||
        matrix_.cols() != static_cast<std::size_t>(source_.rank))
      throw ValidationError("lattice map matrix has shape " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", expected " + std::to_string(target_.rank) + "x" +
                            std::to_string(source_.rank));
  }

  static LatticeMap identity(const Lattice& l) { return {l, l, IntMatrix::identity(l.rank)}; }
  static LatticeMap zero(const Lattice& s, const Lattice& t) { return {s, t, IntMatrix(t.rank, s.rank)}; }

  const Lattice& source() const { return source_; }
  const Lattice& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  IntVector operator()(const IntVector& x) const { return matrix_ * x; }

  /// this o inner
  LatticeMap compose(const LatticeMap& inner) const {
    if (inner.target_.rank != source_.rank) throw ValidationError("composition of non-composable lattice maps");
    return {inner.source_, target_, matrix_ * inner.matrix_};
  }

  friend bool operator==(const LatticeMap& a, const LatticeMap& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
  }

 private:
  Lattice source_;
  Lattice target_;
  IntMatrix matrix_;
};

/// Finite abelian group Z/d1 x ... x Z/dk in invariant-factor form.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(IntVector invariant_factors) : factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2) throw ValidationError("invariant factors must be >= 2");
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw ValidationError("invariant factors must form a divisibility chain");
    }
  }

  /// Normalizes an arbitrary list of cyclic orders (entries <= 1 are dropped).
  static FiniteAbelianGroup from_cyclic_orders(const IntVector& orders) {
    IntVector kept;
    for (auto o : orders)
      if (o > 1) kept.push_back(o);
    if (kept.empty()) return {};
    auto snf = smith_normal_form(IntMatrix::diagonal(kept));
    IntVector inv;
    for (auto d : snf.diagonal)
      if (d > 1) inv.push_back(d);
    return FiniteAbelianGroup(inv);
  }

  const IntVector& invariant_factors() const { return factors_; }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto d : factors_) o = checked::mul(o, d);
    return o;
  }
  bool is_trivial() const { return factors_.empty(); }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.factors_ == b.factors_; }

 private:
  IntVector factors_;
};

/// A finitely generated abelian group Z^free_rank x torsion, or a named
/// symbolic group that is out of desk reach.
struct GroupDescription {
  int free_rank = 0;
  FiniteAbelianGroup torsion;
  bool symbolic = false;
  std::string symbol;

  bool is_trivial() const { return !symbolic && free_rank == 0 && torsion.is_trivial(); }

  std::string to_string() const {
    if (symbolic) return symbol;
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
      os << "Z";
      if (free_rank > 1) os << "^" << free_rank;
      first = false;
    }
    for (auto d : torsion.invariant_factors()) {
      os << (first ? "" : " + ") << "Z/" << d;
      first = false;
    }
    return os.str();
  }

  friend bool operator==(const GroupDescription& a, const GroupDescription& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion && a.symbolic == b.symbolic && a.symbol == b.symbol;
  }
};

inline Lattice tensor_product(const Lattice& a, const Lattice& b) {
  return Lattice(a.rank * b.rank, a.label.empty() || b.label.empty() ? std::string{} : a.label + "(x)" + b.label);
}

inline LatticeMap tensor_map(const LatticeMap& f, const LatticeMap& g) {
  return {tensor_product(f.source(), g.source()), tensor_product(f.target(), g.target()),
          kronecker(f.matrix(), g.matrix())};
}

/// Hom(a, b) as a lattice; an element is a b.rank x a.rank matrix, flattened row-major.
inline Lattice hom_lattice(const Lattice& a, const Lattice& b) { return Lattice(a.rank * b.rank); }

struct Cokernel {
  int free_rank = 0;
  FiniteAbelianGroup torsion;
};

inline Cokernel cokernel(const LatticeMap& f) {
  auto snf = smith_normal_form(f.matrix());
  IntVector tors;
  for (auto d : snf.diagonal)
    if (d > 1) tors.push_back(d);
  return {f.target().rank - static_cast<int>(snf.rank()), FiniteAbelianGroup(tors)};
}

/// Injective with finite cokernel: square with non-zero determinant.
inline bool is_lattice_isogeny_part(const LatticeMap& f) {
  if (f.source().rank != f.target().rank) return false;
  return determinant(f.matrix()) != 0;
}

/// Structure of L / S for lattices S <= L <= Z^n given by generator columns.
inline GroupDescription lattice_quotient(const IntMatrix& l_gens, const IntMatrix& s_gens) {
  const std::size_t n = l_gens.rows();
  if (s_gens.rows() != n && s_gens.cols() != 0) throw ValidationError("lattice_quotient dimension mismatch");
  auto snf = smith_normal_form(l_gens);
  const std::size_t r = snf.rank();
  if (s_gens.cols() == 0) return {static_cast<int>(r), {}, false, {}};
  // Coordinates of S generators in the basis U^{-1}[:, i] * d_i of L.
  IntMatrix us = snf.U * s_gens;
  IntMatrix coords(r, s_gens.cols());
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) {
      if (i >= r) {
        if (us(i, j) != 0) throw ValidationError("lattice_quotient: S is not contained in L");
        continue;
      }
      if (us(i, j) % snf.diagonal[i] != 0) throw ValidationError("lattice_quotient: S is not contained in L");
      coords(i, j) = us(i, j) / snf.diagonal[i];
    }
  auto q = smith_normal_form(coords);
  IntVector tors;
  for (auto d : q.diagonal)
    if (d > 1) tors.push_back(d);
  return {static_cast<int>(r - q.rank()), FiniteAbelianGroup(tors), false, {}};
}

/// Solutions of A x = b where row r is read modulo moduli[r] (0 = over Z)
/// and variable j lives in Z/variable_moduli[j] (0 = Z).
struct ModularSolution {
  IntVector particular;
  /// Generators of the homogeneous solution group (excluding the variable-modulus multiples).
  std::vector<IntVector> kernel;
  IntVector variable_moduli;

  /// Structure of the homogeneous solution group.
  GroupDescription group() const {
    const std::size_t n = variable_moduli.size();
    std::vector<IntVector> lcols = kernel, scols;
    for (std::size_t j = 0; j < n; ++j)
      if (variable_moduli[j] > 0) {
        IntVector e(n, 0);
        e[j] = variable_moduli[j];
        lcols.push_back(e);
        scols.push_back(e);
      }
    if (lcols.empty()) return {};
    return lattice_quotient(IntMatrix::from_columns(lcols, n),
                            scols.empty() ? IntMatrix(n, 0) : IntMatrix::from_columns(scols, n));
  }
};

inline std::optional<ModularSolution> solve_linear_system_mod(const IntMatrix& a, const IntVector& b,
                                                              const IntVector& moduli, IntVector variable_moduli = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || moduli.size() != m) throw ValidationError("solve_linear_system_mod: shape mismatch");
  if (variable_moduli.empty()) variable_moduli.assign(n, 0);
  if (variable_moduli.size() != n) throw ValidationError("solve_linear_system_mod: variable moduli mismatch");
  // Augment with slack columns for modular rows: [A | M] (x, y) = b over Z.
  std::vector<std::size_t> slack_rows;
  for (std::size_t r = 0; r < m; ++r)
    if (moduli[r] > 0) slack_rows.push_back(r);
  IntMatrix aug(m, n + slack_rows.size());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
  for (std::size_t k = 0; k < slack_rows.size(); ++k) aug(slack_rows[k], n + k) = moduli[slack_rows[k]];

  auto snf = smith_normal_form(aug);
  IntVector ub = snf.U * b;
  const std::size_t total = aug.cols();
  IntVector z(total, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < snf.rank()) {
      if (ub[i] % snf.diagonal[i] != 0) return std::nullopt;
      z[i] = ub[i] / snf.diagonal[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  IntVector full = snf.V * z;
  ModularSolution sol;
  sol.variable_moduli = variable_moduli;
  sol.particular.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t j = 0; j < n; ++j)
    if (variable_moduli[j] > 0) sol.particular[j] = mod(sol.particular[j], variable_moduli[j]);
  for (std::size_t k = snf.rank(); k < total; ++k) {
    IntVector g(n);
    bool nonzero = false;
    for (std::size_t j = 0; j < n; ++j) {
      g[j] = snf.V(j, k);
      if (variable_moduli[j] > 0) g[j] = mod(g[j], variable_moduli[j]);
      nonzero |= g[j] != 0;
    }
    if (nonzero) sol.kernel.push_back(std::move(g));
  }
  return sol;
}

}  // namespace motivecalc
