#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "motivecalc/curve.hpp"
#include "motivecalc/lattice.hpp"

namespace motivecalc {

/// Element of a desk group, in the encoding of its group model.
using Elem = std::vector<std::int64_t>;

inline std::string elem_to_string(const Elem& e) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ")";
  return os.str();
}

/// Cyclic decomposition G = Z/o_1 + ... + Z/o_k (o_i = 0 for Z) with
/// coordinates of each element in the chosen basis.
struct CyclicDecomposition {
  IntVector orders;
  std::vector<Elem> basis;
  std::function<IntVector(const Elem&)> coords;

  GroupDescription description() const {
    GroupDescription g;
    IntVector finite;
    for (auto o : orders) {
      if (o == 0)
        ++g.free_rank;
      else
        finite.push_back(o);
    }
    g.torsion = FiniteAbelianGroup::from_cyclic_orders(finite);
    return g;
  }
};

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;
  virtual std::string kind() const = 0;
  virtual std::string describe() const = 0;
  virtual Elem zero() const = 0;
  virtual Elem add(const Elem& a, const Elem& b) const = 0;
  virtual Elem neg(const Elem& a) const = 0;
  virtual bool contains(const Elem& a) const = 0;
  virtual bool is_finite() const { return true; }
  virtual std::vector<Elem> elements() const = 0;
  virtual std::vector<Elem> generators() const = 0;
  virtual std::int64_t order() const { return static_cast<std::int64_t>(elements().size()); }
  virtual CyclicDecomposition decomposition() const;
};

namespace detail {

constexpr std::int64_t kMaxGroupElements = 1000000;

inline Elem impl_mul(const GroupImpl& g, std::int64_t k, const Elem& a) {
  Elem base = k < 0 ? g.neg(a) : a;
  std::int64_t e = k < 0 ? -k : k;
  Elem acc = g.zero();
  while (e > 0) {
    if (e & 1) acc = g.add(acc, base);
    base = g.add(base, base);
    e >>= 1;
  }
  return acc;
}

// Generic decomposition of a finite group from its elements: greedy
// generators, one relation per generator, then Smith form.
inline CyclicDecomposition generic_decomposition(const GroupImpl& g) {
  const auto elems = g.elements();
  std::map<Elem, IntVector> span;  // element -> coordinates in the greedy generators
  std::vector<Elem> gens;
  std::vector<IntVector> relations;
  span[g.zero()] = {};
  for (const auto& cand : elems) {
    if (span.count(cand)) continue;
    const std::size_t k = gens.size();
    gens.push_back(cand);
    for (auto& [e, c] : span) c.push_back(0);
    for (auto& r : relations) r.push_back(0);
    // Smallest m with m*cand in span.
    std::int64_t m = 1;
    Elem acc = cand;
    while (!span.count(acc)) {
      acc = g.add(acc, cand);
      ++m;
    }
    IntVector rel = span.at(acc);
    for (auto& v : rel) v = -v;
    rel[k] += m;
    relations.push_back(rel);
    std::vector<std::pair<Elem, IntVector>> base(span.begin(), span.end());
    Elem step = cand;
    for (std::int64_t j = 1; j < m; ++j) {
      for (const auto& [e, c] : base) {
        IntVector cc = c;
        cc[k] = j;
        span.emplace(g.add(e, step), std::move(cc));
      }
      step = g.add(step, cand);
    }
  }
  const std::size_t k = gens.size();
  CyclicDecomposition out;
  if (k == 0) {
    out.coords = [](const Elem&) { return IntVector{}; };
    return out;
  }
  auto snf = smith_normal_form(IntMatrix::from_rows(relations, k));
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t d = i < snf.rank() ? snf.diagonal[i] : 0;
    if (d == 1) continue;
    kept.push_back(i);
    out.orders.push_back(d);
    // h_i = sum_j V^{-1}(i, j) g_j
    Elem h = g.zero();
    for (std::size_t j = 0; j < k; ++j) {
      h = g.add(h, impl_mul(g, snf.V_inv(i, j), gens[j]));
    }
    out.basis.push_back(h);
  }
  auto table = std::make_shared<std::map<Elem, IntVector>>(std::move(span));
  IntMatrix V = snf.V;
  IntVector orders = out.orders;
  out.coords = [table, V, kept, orders](const Elem& e) {
    const IntVector& c = table->at(e);
    IntVector r(kept.size(), 0);
    for (std::size_t t = 0; t < kept.size(); ++t) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < c.size(); ++j) s = checked::add(s, checked::mul(c[j], V(j, kept[t])));
      r[t] = orders[t] ? mod(s, orders[t]) : s;
    }
    return r;
  };
  return out;
}

}  // namespace detail

inline CyclicDecomposition GroupImpl::decomposition() const { return detail::generic_decomposition(*this); }

/// Shared immutable handle on a concrete group model.
class DeskGroup {
 public:
  DeskGroup() = default;
  explicit DeskGroup(std::shared_ptr<const GroupImpl> impl)
      : impl_(std::move(impl)), cache_(std::make_shared<DecompositionCache>()) {}

  static DeskGroup lattice(int rank);
  static DeskGroup finite(const IntVector& cyclic_orders);
  static DeskGroup torus(const PrimeField& field, int rank, std::int64_t mu = 0);
  static DeskGroup curve(const EllipticCurve& E);
  static DeskGroup curve_torsion(const EllipticCurve& E, std::int64_t n);
  static DeskGroup product(const std::vector<DeskGroup>& factors);

  const GroupImpl& impl() const { return *impl_; }
  std::shared_ptr<const GroupImpl> impl_ptr() const { return impl_; }

  std::string kind() const { return impl_->kind(); }
  std::string describe() const { return impl_->describe(); }
  Elem zero() const { return impl_->zero(); }
  Elem add(const Elem& a, const Elem& b) const { return impl_->add(a, b); }
  Elem neg(const Elem& a) const { return impl_->neg(a); }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  bool contains(const Elem& a) const { return impl_->contains(a); }
  bool is_finite() const { return impl_->is_finite(); }
  std::int64_t order() const { return impl_->order(); }
  std::vector<Elem> elements() const { return impl_->elements(); }
  std::vector<Elem> generators() const { return impl_->generators(); }

  /// The decomposition is computed once per group object.
  const CyclicDecomposition& decomposition() const {
    std::call_once(cache_->once, [this] { cache_->value = impl_->decomposition(); });
    return cache_->value;
  }
  GroupDescription description() const { return decomposition().description(); }

  Elem mul(std::int64_t k, const Elem& a) const {
    Elem base = k < 0 ? neg(a) : a;
    std::int64_t e = k < 0 ? -k : k;
    Elem acc = zero();
    while (e > 0) {
      if (e & 1) acc = add(acc, base);
      base = add(base, base);
      e >>= 1;
    }
    return acc;
  }

  /// Element with the given coordinates in decomposition().basis.
  Elem from_coords(const IntVector& c) const {
    const auto& d = decomposition();
    Elem acc = zero();
    for (std::size_t i = 0; i < c.size(); ++i) acc = add(acc, mul(c[i], d.basis[i]));
    return acc;
  }

  std::int64_t element_order(const Elem& a) const {
    if (!is_finite()) return a == zero() ? 1 : 0;
    std::int64_t o = 1;
    Elem acc = a;
    const Elem z = zero();
    while (acc != z) {
      acc = add(acc, a);
      ++o;
    }
    return o;
  }

 private:
  struct DecompositionCache {
    std::once_flag once;
    CyclicDecomposition value;
  };
  std::shared_ptr<const GroupImpl> impl_;
  std::shared_ptr<DecompositionCache> cache_;
};

/// A map of desk groups given by a function on elements.
struct GroupHom {
  DeskGroup source;
  DeskGroup target;
  std::function<Elem(const Elem&)> map;

  Elem operator()(const Elem& a) const { return map(a); }

  static GroupHom identity(const DeskGroup& g) {
    return {g, g, [](const Elem& a) { return a; }};
  }
  static GroupHom zero(const DeskGroup& s, const DeskGroup& t) {
    return {s, t, [t](const Elem&) { return t.zero(); }};
  }
  GroupHom compose(const GroupHom& inner) const {
    auto outer = map;
    auto in = inner.map;
    return {inner.source, target, [outer, in](const Elem& a) { return outer(in(a)); }};
  }
};

/// Checks f(a + b) = f(a) + f(b) on generator pairs and one random sample;
/// returns a witness description on failure.
inline std::optional<std::string> homomorphism_failure(const GroupHom& f, std::uint32_t seed = 1) {
  auto gens = f.source.generators();
  auto check = [&](const Elem& a, const Elem& b) -> std::optional<std::string> {
    if (f(f.source.add(a, b)) != f.target.add(f(a), f(b)))
      return "f(a+b) != f(a)+f(b) at a=" + elem_to_string(a) + ", b=" + elem_to_string(b);
    return std::nullopt;
  };
  if (f(f.source.zero()) != f.target.zero()) return std::string("f(0) != 0");
  for (const auto& a : gens)
    for (const auto& b : gens)
      if (auto w = check(a, b)) return w;
  if (!gens.empty()) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> c(-3, 3);
    Elem a = f.source.zero(), b = f.source.zero();
    for (const auto& g : gens) {
      a = f.source.add(a, f.source.mul(c(rng), g));
      b = f.source.add(b, f.source.mul(c(rng), g));
    }
    if (auto w = check(a, b)) return w;
  }
  return std::nullopt;
}

}  // namespace motivecalc

#include "motivecalc/desk_group_impl.hpp"
