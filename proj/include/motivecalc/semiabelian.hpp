#pragma once

#include "motivecalc/desk_group.hpp"

namespace motivecalc {

using FactorSet = std::function<Elem(const Elem&, const Elem&)>;

/// Extension of a finite abelian torsion range A_tors by torus points, given
/// by a symmetric normalized 2-cocycle c: A_tors x A_tors -> T.
struct SemiAbelianModel {
  DeskGroup abelian;  // designated finite subgroup of the abelian part
  DeskGroup torus;
  FactorSet factor_set;

  static SemiAbelianModel split(const DeskGroup& a, const DeskGroup& t) {
    return {a, t, [t](const Elem&, const Elem&) { return t.zero(); }};
  }
};

/// First failing factor-set identity, if any.
inline std::optional<std::string> factor_set_failure(const SemiAbelianModel& G) {
  const auto& A = G.abelian;
  const auto& T = G.torus;
  if (!A.is_finite()) return std::string("designated torsion subgroup is not finite");
  const auto elems = A.elements();
  const Elem z = A.zero();
  for (const auto& x : elems) {
    if (G.factor_set(z, x) != T.zero()) return "not normalized: c(0," + elem_to_string(x) + ") != 1";
    for (const auto& y : elems)
      if (G.factor_set(x, y) != G.factor_set(y, x))
        return "not symmetric at (" + elem_to_string(x) + "," + elem_to_string(y) + ")";
  }
  for (const auto& x : elems)
    for (const auto& y : elems)
      for (const auto& w : elems) {
        Elem l = T.add(G.factor_set(x, y), G.factor_set(A.add(x, y), w));
        Elem r = T.add(G.factor_set(y, w), G.factor_set(x, A.add(y, w)));
        if (l != r)
          return "cocycle identity fails at (" + elem_to_string(x) + "," + elem_to_string(y) + "," + elem_to_string(w) +
                 ")";
      }
  return std::nullopt;
}

namespace detail {

class SemiAbelianGroup final : public GroupImpl {
 public:
  explicit SemiAbelianGroup(SemiAbelianModel m) : m_(std::move(m)), na_(m_.abelian.zero().size()) {}
  std::string kind() const override { return "semiabelian"; }
  std::string describe() const override { return "ext(" + m_.abelian.describe() + ", " + m_.torus.describe() + ")"; }
  Elem a_part(const Elem& e) const { return Elem(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(na_)); }
  Elem t_part(const Elem& e) const { return Elem(e.begin() + static_cast<std::ptrdiff_t>(na_), e.end()); }
  static Elem join(Elem a, const Elem& t) {
    a.insert(a.end(), t.begin(), t.end());
    return a;
  }
  Elem zero() const override { return join(m_.abelian.zero(), m_.torus.zero()); }
  Elem add(const Elem& x, const Elem& y) const override {
    Elem a1 = a_part(x), a2 = a_part(y);
    Elem t = m_.torus.add(m_.torus.add(t_part(x), t_part(y)), m_.factor_set(a1, a2));
    return join(m_.abelian.add(a1, a2), t);
  }
  Elem neg(const Elem& x) const override {
    Elem a = a_part(x);
    Elem na = m_.abelian.neg(a);
    Elem t = m_.torus.neg(m_.torus.add(t_part(x), m_.factor_set(a, na)));
    return join(na, t);
  }
  bool contains(const Elem& x) const override {
    return x.size() == zero().size() && m_.abelian.contains(a_part(x)) && m_.torus.contains(t_part(x));
  }
  std::int64_t order() const override { return checked::mul(m_.abelian.order(), m_.torus.order()); }
  std::vector<Elem> elements() const override {
    if (order() > kMaxGroupElements) throw DeskLimitError("semi-abelian point group too large");
    std::vector<Elem> out;
    auto ts = m_.torus.elements();
    for (const auto& a : m_.abelian.elements())
      for (const auto& t : ts) out.push_back(join(a, t));
    return out;
  }
  std::vector<Elem> generators() const override { return decomposition().basis; }
  const SemiAbelianModel& model() const { return m_; }

 private:
  SemiAbelianModel m_;
  std::size_t na_;
};

}  // namespace detail

/// Points of G as a desk group with the twisted law
/// (a1,t1) + (a2,t2) = (a1 + a2, t1 t2 c(a1,a2)).
inline DeskGroup semiabelian_points(const SemiAbelianModel& G) {
  if (auto w = factor_set_failure(G)) throw ValidationError("invalid factor set: " + *w);
  if (!G.torus.is_finite()) throw ValidationError("torus point group must be finite");
  return DeskGroup(std::make_shared<detail::SemiAbelianGroup>(G));
}

/// Projection G -> A_tors and inclusion T -> G.
inline GroupHom semiabelian_projection(const DeskGroup& G) {
  const auto& impl = dynamic_cast<const detail::SemiAbelianGroup&>(G.impl());
  auto keep = G.impl_ptr();
  return {G, impl.model().abelian,
          [keep](const Elem& e) { return static_cast<const detail::SemiAbelianGroup&>(*keep).a_part(e); }};
}

inline GroupHom semiabelian_inclusion(const DeskGroup& G) {
  const auto& impl = dynamic_cast<const detail::SemiAbelianGroup&>(G.impl());
  Elem za = impl.model().abelian.zero();
  return {impl.model().torus, G, [za](const Elem& t) { return detail::SemiAbelianGroup::join(za, t); }};
}

}  // namespace motivecalc
