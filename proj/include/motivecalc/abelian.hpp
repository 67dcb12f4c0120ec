#pragma once

#include "motivecalc/desk_group.hpp"

namespace motivecalc {

/// n-torsion of a product of elliptic curves with its Weil pairing, in
/// coordinates (Z/n)^{2g} relative to a torsion basis of each factor.
class AbelianTorsion {
 public:
  AbelianTorsion() : AbelianTorsion({}, 0, PrimeField(5)) {}

  AbelianTorsion(std::vector<EllipticCurve> curves, std::int64_t n, const PrimeField& field)
      : curves_(std::move(curves)), n_(n), field_(field) {
    std::vector<DeskGroup> parts;
    if (!curves_.empty()) {
      if (n_ < 2) throw ValidationError("abelian part needs a torsion level n >= 2");
      if ((field_.p() - 1) % n_ != 0)
        throw ValidationError("mu_" + std::to_string(n_) + " is not rational over F_" + std::to_string(field_.p()));
      zeta_ = field_.pow(field_.primitive_root(), (field_.p() - 1) / n_);
    }
    const std::size_t g = curves_.size();
    form_ = IntMatrix(2 * g, 2 * g);
    for (std::size_t k = 0; k < g; ++k) {
      const auto& E = curves_[k];
      if (!(E.field() == field_)) throw ValidationError("curve " + E.name() + " is not over F_" + std::to_string(field_.p()));
      auto basis = torsion_basis(E, n_);
      if (!basis) throw ValidationError("E[" + std::to_string(n_) + "] is not rational for " + E.to_string());
      bases_.push_back(*basis);
      std::int64_t e = weil_pairing(E, n_, basis->first, basis->second);
      std::int64_t w = 0, z = 1;
      while (z != e) {
        z = field_.mul(z, zeta_);
        ++w;
      }
      form_(2 * k, 2 * k + 1) = w;
      form_(2 * k + 1, 2 * k) = mod(-w, n_);
      std::map<Elem, std::pair<std::int64_t, std::int64_t>> table;
      for (std::int64_t a = 0; a < n_; ++a)
        for (std::int64_t b = 0; b < n_; ++b)
          table[detail::curve_elem(E.add(E.mul(a, basis->first), E.mul(b, basis->second)))] = {a, b};
      coord_tables_.push_back(std::move(table));
      parts.push_back(DeskGroup::curve_torsion(E, n_));
    }
    group_ = DeskGroup::product(parts);
  }

  const std::vector<EllipticCurve>& curves() const { return curves_; }
  std::size_t dimension() const { return curves_.size(); }
  bool is_zero() const { return curves_.empty(); }
  std::int64_t level() const { return n_; }
  const PrimeField& field() const { return field_; }
  /// Fixed primitive n-th root of unity; pairing values are zeta^k.
  std::int64_t zeta() const { return zeta_; }
  const DeskGroup& group() const { return group_; }
  /// Alternating form with e(a, b) = zeta^{coords(a) . form . coords(b)}.
  const IntMatrix& form() const { return form_; }
  const std::vector<std::pair<CurvePoint, CurvePoint>>& bases() const { return bases_; }

  IntVector coords(const Elem& a) const {
    IntVector c;
    for (std::size_t k = 0; k < curves_.size(); ++k) {
      Elem part(a.begin() + static_cast<std::ptrdiff_t>(3 * k), a.begin() + static_cast<std::ptrdiff_t>(3 * k + 3));
      auto it = coord_tables_[k].find(part);
      if (it == coord_tables_[k].end())
        throw ValidationError("point " + elem_to_string(part) + " is not in E[" + std::to_string(n_) + "]");
      c.push_back(it->second.first);
      c.push_back(it->second.second);
    }
    return c;
  }

  Elem from_coords(const IntVector& c) const {
    Elem out;
    for (std::size_t k = 0; k < curves_.size(); ++k) {
      const auto& E = curves_[k];
      auto P = E.add(E.mul(c[2 * k], bases_[k].first), E.mul(c[2 * k + 1], bases_[k].second));
      auto e = detail::curve_elem(P);
      out.insert(out.end(), e.begin(), e.end());
    }
    return out;
  }

  /// Exponent k with e_n(a, b) = zeta^k, summed over factors.
  std::int64_t pairing_exponent(const Elem& a, const Elem& b) const {
    if (is_zero()) return 0;
    auto ca = coords(a), cb = coords(b);
    std::int64_t s = 0;
    for (std::size_t i = 0; i < ca.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j) s = mod(s + ca[i] * form_(i, j) * cb[j], n_);
    return s;
  }

  /// Product of Weil pairings of the factors, computed by Miller's algorithm.
  std::int64_t weil(const Elem& a, const Elem& b) const {
    std::int64_t r = 1;
    for (std::size_t k = 0; k < curves_.size(); ++k) {
      auto P = detail::elem_curve(Elem(a.begin() + static_cast<std::ptrdiff_t>(3 * k), a.begin() + static_cast<std::ptrdiff_t>(3 * k + 3)));
      auto Q = detail::elem_curve(Elem(b.begin() + static_cast<std::ptrdiff_t>(3 * k), b.begin() + static_cast<std::ptrdiff_t>(3 * k + 3)));
      r = field_.mul(r, weil_pairing(curves_[k], n_, P, Q));
    }
    return r;
  }

  /// Carry cocycle: sum_i carry(a_i, a'_i) (form . coords(b))_i mod n, where
  /// carry(s, t) = 1 when the residues overflow (s + t >= n).
  std::int64_t carry_cocycle(const Elem& a1, const Elem& a2, const Elem& b) const {
    if (is_zero()) return 0;
    auto c1 = coords(a1), c2 = coords(a2), cb = coords(b);
    std::int64_t s = 0;
    for (std::size_t i = 0; i < c1.size(); ++i) {
      if (c1[i] + c2[i] < n_) continue;
      std::int64_t fb = 0;
      for (std::size_t j = 0; j < cb.size(); ++j) fb += form_(i, j) * cb[j];
      s = mod(s + fb, n_);
    }
    return s;
  }

  std::int64_t zeta_pow(std::int64_t k) const { return is_zero() ? 1 : field_.pow(zeta_, mod(k, n_)); }

 private:
  std::vector<EllipticCurve> curves_;
  std::int64_t n_ = 0;
  PrimeField field_;
  std::int64_t zeta_ = 1;
  IntMatrix form_;
  std::vector<std::pair<CurvePoint, CurvePoint>> bases_;
  std::vector<std::map<Elem, std::pair<std::int64_t, std::int64_t>>> coord_tables_;
  DeskGroup group_;
};

}  // namespace motivecalc
