#pragma once

#include "motivecalc/motive.hpp"

namespace motivecalc::testing {

inline const PrimeField F5(5);
inline const PrimeField F7(7);
inline const EllipticCurve E5(F5, 1, 0, "E5");  // y^2 = x^3 + x, full 2-torsion
inline const EllipticCurve E7(F7, 6, 0, "E7");  // y^2 = x^3 - x, full 2-torsion

inline IntMatrix mat(std::size_t r, std::size_t c, std::vector<std::int64_t> v) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

inline OneMotive torus_motive(int rx, int ry, const PrimeField& F, IntMatrix psi, std::string name = {}) {
  OneMotiveData d;
  d.name = std::move(name);
  d.x_rank = rx;
  d.ydual_rank = ry;
  d.field = F;
  d.v.assign(static_cast<std::size_t>(rx), Elem{});
  d.vstar.assign(static_cast<std::size_t>(ry), Elem{});
  d.psi = std::move(psi);
  return motive_from_seven_tuple(d);
}

inline Elem pt(std::int64_t x, std::int64_t y) { return detail::curve_elem(CurvePoint::affine(x, y)); }
inline Elem inf() { return detail::curve_elem(CurvePoint::at_infinity()); }

/// [Z -> E5 x G_m] with v = (0,0), v* = (2,0), psi = 3, n = 2.
inline OneMotive e5_motive(Elem vstar = pt(2, 0)) {
  OneMotiveData d;
  d.name = "M";
  d.x_rank = 1;
  d.ydual_rank = 1;
  d.field = F5;
  d.curves = {E5};
  d.torsion_n = 2;
  d.v = {pt(0, 0)};
  d.vstar = {std::move(vstar)};
  d.psi = mat(1, 1, {3});
  return motive_from_seven_tuple(d);
}

inline OneMotive abelian_only(const EllipticCurve& E, std::int64_t n) {
  OneMotiveData d;
  d.name = "A";
  d.field = E.field();
  d.curves = {E};
  d.torsion_n = n;
  return motive_from_seven_tuple(d);
}

}  // namespace motivecalc::testing
