#pragma once

// Concrete group models behind DeskGroup.

#include <algorithm>

#include "motivecalc/desk_group.hpp"

namespace motivecalc {

namespace detail {

inline Elem curve_elem(const CurvePoint& P) { return P.infinity ? Elem{1, 0, 0} : Elem{0, P.x, P.y}; }
inline CurvePoint elem_curve(const Elem& e) {
  return e.at(0) ? CurvePoint::at_infinity() : CurvePoint::affine(e.at(1), e.at(2));
}

class LatticeGroup final : public GroupImpl {
 public:
  explicit LatticeGroup(int rank) : rank_(rank) {
    if (rank < 0) throw ValidationError("lattice rank must be non-negative");
  }
  std::string kind() const override { return "lattice"; }
  std::string describe() const override { return rank_ == 0 ? "0" : rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_); }
  Elem zero() const override { return Elem(static_cast<std::size_t>(rank_), 0); }
  Elem add(const Elem& a, const Elem& b) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::add(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::neg(a[i]);
    return r;
  }
  bool contains(const Elem& a) const override { return a.size() == static_cast<std::size_t>(rank_); }
  bool is_finite() const override { return rank_ == 0; }
  std::int64_t order() const override {
    if (rank_ == 0) return 1;
    throw DeskLimitError("lattice of positive rank is infinite");
  }
  std::vector<Elem> elements() const override {
    if (rank_ == 0) return {zero()};
    throw DeskLimitError("cannot enumerate a lattice of positive rank");
  }
  std::vector<Elem> generators() const override {
    std::vector<Elem> g;
    for (int i = 0; i < rank_; ++i) {
      Elem e = zero();
      e[static_cast<std::size_t>(i)] = 1;
      g.push_back(e);
    }
    return g;
  }
  CyclicDecomposition decomposition() const override {
    CyclicDecomposition d;
    d.orders.assign(static_cast<std::size_t>(rank_), 0);
    d.basis = generators();
    d.coords = [](const Elem& e) { return IntVector(e); };
    return d;
  }
  int rank() const { return rank_; }

 private:
  int rank_;
};

class FiniteGroup final : public GroupImpl {
 public:
  explicit FiniteGroup(const IntVector& orders) {
    for (auto o : orders) {
      if (o < 1) throw ValidationError("cyclic orders must be positive");
      if (o > 1) orders_.push_back(o);
    }
    std::int64_t n = 1;
    for (auto o : orders_) n = checked::mul(n, o);
    if (n > kMaxGroupElements) throw DeskLimitError("finite group too large: order " + std::to_string(n));
  }
  std::string kind() const override { return "finite"; }
  std::string describe() const override {
    if (orders_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < orders_.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(orders_[i]);
    return s;
  }
  Elem zero() const override { return Elem(orders_.size(), 0); }
  Elem add(const Elem& a, const Elem& b) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] + b[i], orders_[i]);
    return r;
  }
  Elem neg(const Elem& a) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(-a[i], orders_[i]);
    return r;
  }
  bool contains(const Elem& a) const override {
    if (a.size() != orders_.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] < 0 || a[i] >= orders_[i]) return false;
    return true;
  }
  std::int64_t order() const override {
    std::int64_t n = 1;
    for (auto o : orders_) n *= o;
    return n;
  }
  std::vector<Elem> elements() const override {
    std::vector<Elem> out{zero()};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      std::vector<Elem> next;
      for (const auto& e : out)
        for (std::int64_t v = 0; v < orders_[i]; ++v) {
          Elem f = e;
          f[i] = v;
          next.push_back(f);
        }
      out = std::move(next);
    }
    return out;
  }
  std::vector<Elem> generators() const override {
    std::vector<Elem> g;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      Elem e = zero();
      e[i] = 1;
      g.push_back(e);
    }
    return g;
  }
  CyclicDecomposition decomposition() const override {
    CyclicDecomposition d;
    d.orders = orders_;
    d.basis = generators();
    d.coords = [](const Elem& e) { return IntVector(e); };
    return d;
  }
  const IntVector& orders() const { return orders_; }

 private:
  IntVector orders_;
};

/// Points of a split torus (F_p^*)^rank, or of its subgroup mu_m^rank.
class TorusGroup final : public GroupImpl {
 public:
  TorusGroup(PrimeField field, int rank, std::int64_t mu) : field_(field), rank_(rank), mu_(mu ? mu : field.p() - 1) {
    if (rank < 0) throw ValidationError("torus rank must be non-negative");
    if ((field.p() - 1) % mu_ != 0)
      throw ValidationError("mu_" + std::to_string(mu_) + " is not contained in F_" + std::to_string(field.p()) + "^*");
    auto table = std::make_shared<IntVector>(static_cast<std::size_t>(field.p()), -1);
    root_ = field.primitive_root();
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < field.p() - 1; ++k) {
      (*table)[static_cast<std::size_t>(x)] = k;
      x = field.mul(x, root_);
    }
    dlog_ = table;
    generator_ = field.pow(root_, (field.p() - 1) / mu_);
  }
  std::string kind() const override { return "torus"; }
  std::string describe() const override {
    std::string base = mu_ == field_.p() - 1 ? "F_" + std::to_string(field_.p()) + "^*"
                                             : "mu_" + std::to_string(mu_) + "(F_" + std::to_string(field_.p()) + ")";
    if (rank_ == 1) return base;
    return "(" + base + ")^" + std::to_string(rank_);
  }
  Elem zero() const override { return Elem(static_cast<std::size_t>(rank_), 1); }
  Elem add(const Elem& a, const Elem& b) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.mul(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const override {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.inv(a[i]);
    return r;
  }
  bool contains(const Elem& a) const override {
    if (a.size() != static_cast<std::size_t>(rank_)) return false;
    for (auto v : a) {
      if (v <= 0 || v >= field_.p()) return false;
      if (field_.pow(v, mu_) != 1) return false;
    }
    return true;
  }
  std::int64_t order() const override {
    std::int64_t n = 1;
    for (int i = 0; i < rank_; ++i) n = checked::mul(n, mu_);
    return n;
  }
  std::vector<Elem> elements() const override {
    if (order() > kMaxGroupElements) throw DeskLimitError("torus point group too large to enumerate");
    IntVector vals;
    for (std::int64_t k = 0; k < mu_; ++k) vals.push_back(field_.pow(generator_, k));
    std::sort(vals.begin(), vals.end());
    std::vector<Elem> out{Elem{}};
    for (int i = 0; i < rank_; ++i) {
      std::vector<Elem> next;
      for (const auto& e : out)
        for (auto v : vals) {
          Elem f = e;
          f.push_back(v);
          next.push_back(f);
        }
      out = std::move(next);
    }
    return out;
  }
  std::vector<Elem> generators() const override {
    std::vector<Elem> g;
    if (mu_ == 1) return g;
    for (int i = 0; i < rank_; ++i) {
      Elem e = zero();
      e[static_cast<std::size_t>(i)] = generator_;
      g.push_back(e);
    }
    return g;
  }
  CyclicDecomposition decomposition() const override {
    CyclicDecomposition d;
    d.basis = generators();
    d.orders.assign(d.basis.size(), mu_);
    auto table = dlog_;
    const std::int64_t step = (field_.p() - 1) / mu_;
    d.coords = [table, step, trivial = mu_ == 1](const Elem& e) {
      if (trivial) return IntVector{};
      IntVector c(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) c[i] = (*table)[static_cast<std::size_t>(e[i])] / step;
      return c;
    };
    return d;
  }

  const PrimeField& field() const { return field_; }
  int rank() const { return rank_; }
  std::int64_t mu() const { return mu_; }
  std::int64_t root() const { return root_; }
  /// Discrete logarithm of a unit to the base of root().
  std::int64_t dlog(std::int64_t v) const { return (*dlog_)[static_cast<std::size_t>(field_.reduce(v))]; }

 private:
  PrimeField field_;
  int rank_;
  std::int64_t mu_;
  std::int64_t root_ = 1;
  std::int64_t generator_ = 1;
  std::shared_ptr<const IntVector> dlog_;
};

/// Rational points of an elliptic curve, or its n-torsion subgroup (n = 0: all points).
class CurveGroup final : public GroupImpl {
 public:
  CurveGroup(EllipticCurve E, std::int64_t n) : E_(std::move(E)), n_(n) {
    for (const auto& P : E_.points())
      if (n_ == 0 || E_.mul(n_, P).infinity) points_.push_back(curve_elem(P));
    std::sort(points_.begin(), points_.end(), [](const Elem& a, const Elem& b) {
      return elem_curve(a) < elem_curve(b);
    });
  }
  std::string kind() const override { return "curve"; }
  std::string describe() const override {
    std::string s = E_.name().empty() ? "E" : E_.name();
    return n_ ? s + "[" + std::to_string(n_) + "]" : s + "(F_" + std::to_string(E_.field().p()) + ")";
  }
  Elem zero() const override { return Elem{1, 0, 0}; }
  Elem add(const Elem& a, const Elem& b) const override {
    return curve_elem(E_.add(elem_curve(a), elem_curve(b)));
  }
  Elem neg(const Elem& a) const override { return curve_elem(E_.neg(elem_curve(a))); }
  bool contains(const Elem& a) const override {
    if (a.size() != 3) return false;
    if (a[0]) return a[1] == 0 && a[2] == 0;
    auto P = elem_curve(a);
    return E_.contains(P) && (n_ == 0 || E_.mul(n_, P).infinity);
  }
  std::int64_t order() const override { return static_cast<std::int64_t>(points_.size()); }
  std::vector<Elem> elements() const override { return points_; }
  std::vector<Elem> generators() const override {
    if (n_ >= 2) {
      if (auto b = torsion_basis(E_, n_)) return {curve_elem(b->first), curve_elem(b->second)};
    }
    return decomposition().basis;
  }
  const EllipticCurve& curve() const { return E_; }
  std::int64_t level() const { return n_; }

 private:
  EllipticCurve E_;
  std::int64_t n_;
  std::vector<Elem> points_;
};

class ProductGroup final : public GroupImpl {
 public:
  explicit ProductGroup(std::vector<DeskGroup> factors) : factors_(std::move(factors)) {
    std::size_t off = 0;
    for (const auto& f : factors_) {
      offsets_.push_back(off);
      off += f.zero().size();
    }
    offsets_.push_back(off);
  }
  std::string kind() const override { return "product"; }
  std::string describe() const override {
    if (factors_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " x " : "") + factors_[i].describe();
    return s;
  }
  Elem part(const Elem& a, std::size_t i) const {
    return Elem(a.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                a.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
  Elem join(const std::vector<Elem>& parts) const {
    Elem r;
    for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
    return r;
  }
  Elem embed(const Elem& a, std::size_t i) const {
    std::vector<Elem> parts;
    for (std::size_t j = 0; j < factors_.size(); ++j) parts.push_back(j == i ? a : factors_[j].zero());
    return join(parts);
  }
  Elem zero() const override {
    std::vector<Elem> parts;
    for (const auto& f : factors_) parts.push_back(f.zero());
    return join(parts);
  }
  Elem add(const Elem& a, const Elem& b) const override {
    std::vector<Elem> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].add(part(a, i), part(b, i)));
    return join(parts);
  }
  Elem neg(const Elem& a) const override {
    std::vector<Elem> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].neg(part(a, i)));
    return join(parts);
  }
  bool contains(const Elem& a) const override {
    if (a.size() != offsets_.back()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (!factors_[i].contains(part(a, i))) return false;
    return true;
  }
  bool is_finite() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const DeskGroup& f) { return f.is_finite(); });
  }
  std::int64_t order() const override {
    std::int64_t n = 1;
    for (const auto& f : factors_) n = checked::mul(n, f.order());
    return n;
  }
  std::vector<Elem> elements() const override {
    if (order() > kMaxGroupElements) throw DeskLimitError("product group too large to enumerate");
    std::vector<Elem> out{Elem{}};
    for (const auto& f : factors_) {
      std::vector<Elem> next;
      auto fe = f.elements();
      for (const auto& e : out)
        for (const auto& x : fe) {
          Elem g = e;
          g.insert(g.end(), x.begin(), x.end());
          next.push_back(g);
        }
      out = std::move(next);
    }
    return out;
  }
  std::vector<Elem> generators() const override {
    std::vector<Elem> g;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      for (const auto& x : factors_[i].generators()) g.push_back(embed(x, i));
    return g;
  }
  CyclicDecomposition decomposition() const override {
    CyclicDecomposition d;
    std::vector<std::function<IntVector(const Elem&)>> fc;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& fd = factors_[i].decomposition();
      d.orders.insert(d.orders.end(), fd.orders.begin(), fd.orders.end());
      for (const auto& b : fd.basis) d.basis.push_back(embed(b, i));
      fc.push_back(fd.coords);
    }
    auto offsets = offsets_;
    d.coords = [fc, offsets](const Elem& a) {
      IntVector c;
      for (std::size_t i = 0; i < fc.size(); ++i) {
        Elem p(a.begin() + static_cast<std::ptrdiff_t>(offsets[i]), a.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
        auto ci = fc[i](p);
        c.insert(c.end(), ci.begin(), ci.end());
      }
      return c;
    };
    return d;
  }
  const std::vector<DeskGroup>& factors() const { return factors_; }

 private:
  std::vector<DeskGroup> factors_;
  std::vector<std::size_t> offsets_;
};

}  // namespace detail

inline DeskGroup DeskGroup::lattice(int rank) { return DeskGroup(std::make_shared<detail::LatticeGroup>(rank)); }
inline DeskGroup DeskGroup::finite(const IntVector& cyclic_orders) {
  return DeskGroup(std::make_shared<detail::FiniteGroup>(cyclic_orders));
}
inline DeskGroup DeskGroup::torus(const PrimeField& field, int rank, std::int64_t mu) {
  return DeskGroup(std::make_shared<detail::TorusGroup>(field, rank, mu));
}
inline DeskGroup DeskGroup::curve(const EllipticCurve& E) {
  return DeskGroup(std::make_shared<detail::CurveGroup>(E, 0));
}
inline DeskGroup DeskGroup::curve_torsion(const EllipticCurve& E, std::int64_t n) {
  if (n < 1) throw ValidationError("torsion level must be positive");
  return DeskGroup(std::make_shared<detail::CurveGroup>(E, n));
}
inline DeskGroup DeskGroup::product(const std::vector<DeskGroup>& factors) {
  return DeskGroup(std::make_shared<detail::ProductGroup>(factors));
}

}  // namespace motivecalc
