#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motivecalc/lattice.hpp"

namespace motivecalc {

/// The prime field F_p for a small odd prime p.
class PrimeField {
 public:
  static constexpr std::int64_t kMaxPrime = 10000;

  PrimeField() : p_(5) {}
  explicit PrimeField(std::int64_t p) : p_(p) {
    if (p < 3 || p > kMaxPrime) throw ValidationError("field prime must satisfy 3 <= p <= 10^4, got " + std::to_string(p));
    if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  }

  std::int64_t p() const { return p_; }
  std::int64_t reduce(std::int64_t a) const { return mod(a, p_); }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return mod(a + b, p_); }
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return mod(a - b, p_); }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return mul_mod(a, b, p_); }
  std::int64_t neg(std::int64_t a) const { return mod(-a, p_); }
  std::int64_t inv(std::int64_t a) const { return inv_mod(a, p_); }
  std::int64_t pow(std::int64_t a, std::int64_t e) const { return pow_mod(a, e, p_); }

  /// Order of a unit in F_p^*.
  std::int64_t multiplicative_order(std::int64_t a) const {
    a = reduce(a);
    if (a == 0) throw ValidationError("0 is not a unit");
    std::int64_t o = 1, x = a;
    while (x != 1) {
      x = mul(x, a);
      ++o;
    }
    return o;
  }

  /// Smallest generator of F_p^*.
  std::int64_t primitive_root() const {
    for (std::int64_t g = 2; g < p_; ++g)
      if (multiplicative_order(g) == p_ - 1) return g;
    return 1;  // p == 2 never happens
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::int64_t p_;
};

struct CurvePoint {
  bool infinity = true;
  std::int64_t x = 0;
  std::int64_t y = 0;

  static CurvePoint at_infinity() { return {}; }
  static CurvePoint affine(std::int64_t x, std::int64_t y) { return {false, x, y}; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinity != b.infinity) return a.infinity;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }

  std::string to_string() const {
    return infinity ? "inf" : "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  }
};

/// y^2 = x^3 + a x + b over a prime field.
class EllipticCurve {
 public:
  EllipticCurve(PrimeField field, std::int64_t a, std::int64_t b, std::string name = {})
      : field_(field), a_(field.reduce(a)), b_(field.reduce(b)), name_(std::move(name)) {
    std::int64_t disc = field_.add(field_.mul(4, field_.pow(a_, 3)), field_.mul(27, field_.mul(b_, b_)));
    if (disc == 0) throw ValidationError("singular curve: 4a^3 + 27b^2 = 0 mod " + std::to_string(field_.p()));
  }

  const PrimeField& field() const { return field_; }
  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  const std::string& name() const { return name_; }

  bool contains(const CurvePoint& P) const {
    if (P.infinity) return true;
    if (P.x < 0 || P.x >= field_.p() || P.y < 0 || P.y >= field_.p()) return false;
    return field_.mul(P.y, P.y) == rhs(P.x);
  }

  std::int64_t rhs(std::int64_t x) const {
    return field_.add(field_.add(field_.pow(x, 3), field_.mul(a_, x)), b_);
  }

  CurvePoint neg(const CurvePoint& P) const {
    if (P.infinity) return P;
    return CurvePoint::affine(P.x, field_.neg(P.y));
  }

  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    if (P.x == Q.x && field_.add(P.y, Q.y) == 0) return CurvePoint::at_infinity();
    std::int64_t lambda = slope(P, Q);
    std::int64_t x3 = field_.sub(field_.sub(field_.mul(lambda, lambda), P.x), Q.x);
    std::int64_t y3 = field_.sub(field_.mul(lambda, field_.sub(P.x, x3)), P.y);
    return CurvePoint::affine(x3, y3);
  }

  /// Slope of the chord (or tangent) through P and Q; requires Q != -P.
  std::int64_t slope(const CurvePoint& P, const CurvePoint& Q) const {
    if (P.x == Q.x) {
      std::int64_t num = field_.add(field_.mul(3, field_.mul(P.x, P.x)), a_);
      return field_.mul(num, field_.inv(field_.mul(2, P.y)));
    }
    return field_.mul(field_.sub(Q.y, P.y), field_.inv(field_.sub(Q.x, P.x)));
  }

  CurvePoint mul(std::int64_t k, const CurvePoint& P) const {
    CurvePoint base = k < 0 ? neg(P) : P;
    if (k < 0) k = -k;
    CurvePoint acc = CurvePoint::at_infinity();
    while (k > 0) {
      if (k & 1) acc = add(acc, base);
      base = add(base, base);
      k >>= 1;
    }
    return acc;
  }

  /// All rational points, infinity first, then affine points by (x, y).
  std::vector<CurvePoint> points() const {
    std::vector<CurvePoint> pts{CurvePoint::at_infinity()};
    const std::int64_t p = field_.p();
    std::vector<std::vector<std::int64_t>> roots(static_cast<std::size_t>(p));
    for (std::int64_t y = 0; y < p; ++y) roots[static_cast<std::size_t>(field_.mul(y, y))].push_back(y);
    for (std::int64_t x = 0; x < p; ++x)
      for (auto y : roots[static_cast<std::size_t>(rhs(x))]) pts.push_back(CurvePoint::affine(x, y));
    return pts;
  }

  std::int64_t point_count() const { return static_cast<std::int64_t>(points().size()); }

  /// Order of P, given a multiple of it (the group order).
  std::int64_t order_of(const CurvePoint& P, std::int64_t group_order) const {
    std::int64_t best = group_order;
    for (std::int64_t d = 1; d * d <= group_order; ++d) {
      if (group_order % d) continue;
      if (mul(d, P).infinity) return d;
      std::int64_t e = group_order / d;
      if (e < best && mul(e, P).infinity) best = e;
    }
    return best;
  }

  std::string to_string() const {
    return "y^2 = x^3 + " + std::to_string(a_) + "x + " + std::to_string(b_) + " over F_" + std::to_string(field_.p());
  }

  friend bool operator==(const EllipticCurve& l, const EllipticCurve& r) {
    return l.field_ == r.field_ && l.a_ == r.a_ && l.b_ == r.b_;
  }

 private:
  PrimeField field_;
  std::int64_t a_;
  std::int64_t b_;
  std::string name_;
};

inline CurvePoint curve_add(const EllipticCurve& E, const CurvePoint& P, const CurvePoint& Q) {
  if (!E.contains(P) || !E.contains(Q))
    throw ValidationError("curve_add: point not on " + E.to_string());
  return E.add(P, Q);
}

struct CurveGroupStructure {
  std::int64_t order = 1;
  FiniteAbelianGroup invariants;
  /// One generator per invariant factor, in the same order.
  std::vector<CurvePoint> generators;
};

inline CurveGroupStructure curve_group_structure(const EllipticCurve& E) {
  if (E.field().p() > PrimeField::kMaxPrime) throw DeskLimitError("field too large for point enumeration");
  const auto pts = E.points();
  const std::int64_t N = static_cast<std::int64_t>(pts.size());
  CurveGroupStructure out;
  out.order = N;
  if (N == 1) return out;
  CurvePoint P;
  std::int64_t n2 = 1;
  for (const auto& pt : pts) {
    std::int64_t o = E.order_of(pt, N);
    if (o > n2) {
      n2 = o;
      P = pt;
      if (o == N) break;
    }
  }
  const std::int64_t n1 = N / n2;
  if (n1 == 1) {
    out.invariants = FiniteAbelianGroup({n2});
    out.generators = {P};
    return out;
  }
  std::vector<CurvePoint> cyc;
  for (std::int64_t k = 0; k < n2; ++k) cyc.push_back(E.mul(k, P));
  std::sort(cyc.begin(), cyc.end());
  auto in_cyc = [&](const CurvePoint& R) { return std::binary_search(cyc.begin(), cyc.end(), R); };
  for (const auto& Q : pts) {
    if (!E.mul(n1, Q).infinity) continue;
    // Q completes P to a basis iff no k in [1, n1) puts kQ in <P>.
    std::int64_t k = 1;
    while (k < n1 && !in_cyc(E.mul(k, Q))) ++k;
    if (k == n1) {
      out.invariants = FiniteAbelianGroup({n1, n2});
      out.generators = {Q, P};
      return out;
    }
  }
  throw std::logic_error("curve_group_structure: no complement found");
}

/// Basis of E[n] when it is fully rational, otherwise nullopt.
inline std::optional<std::pair<CurvePoint, CurvePoint>> torsion_basis(const EllipticCurve& E, std::int64_t n) {
  if (n < 2) throw ValidationError("torsion_basis requires n >= 2");
  auto s = curve_group_structure(E);
  const auto& f = s.invariants.invariant_factors();
  if (f.size() < 2 || f[0] % n != 0) return std::nullopt;
  return std::make_pair(E.mul(f[0] / n, s.generators[0]), E.mul(f[1] / n, s.generators[1]));
}

namespace detail {

// Value at S of the normalized line through T and U (tangent if T == U),
// or of the vertical line when U == -T.
inline std::int64_t line_value(const EllipticCurve& E, const CurvePoint& T, const CurvePoint& U, const CurvePoint& S) {
  const auto& F = E.field();
  if (T.infinity || U.infinity) return 1;
  if (T.x == U.x && F.add(T.y, U.y) == 0) return F.sub(S.x, T.x);
  std::int64_t lambda = E.slope(T, U);
  return F.sub(F.sub(S.y, T.y), F.mul(lambda, F.sub(S.x, T.x)));
}

inline std::int64_t vertical_value(const EllipticCurve& E, const CurvePoint& R, const CurvePoint& S) {
  if (R.infinity) return 1;
  return E.field().sub(S.x, R.x);
}

// f_{n,P}(S) for the normalized Miller function with divisor n(P) - n(inf).
inline std::int64_t miller(const EllipticCurve& E, std::int64_t n, const CurvePoint& P, const CurvePoint& S) {
  const auto& F = E.field();
  int top = 62;
  while (!((n >> top) & 1)) --top;
  CurvePoint T = P;
  std::int64_t num = 1, den = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    CurvePoint T2 = E.add(T, T);
    num = F.mul(F.mul(num, num), line_value(E, T, T, S));
    den = F.mul(F.mul(den, den), vertical_value(E, T2, S));
    T = T2;
    if ((n >> bit) & 1) {
      CurvePoint TP = E.add(T, P);
      num = F.mul(num, line_value(E, T, P, S));
      den = F.mul(den, vertical_value(E, TP, S));
      T = TP;
    }
  }
  if (num == 0 || den == 0) throw std::logic_error("miller: evaluation at a zero or pole");
  return F.mul(num, F.inv(den));
}

inline bool in_cyclic_span(const EllipticCurve& E, const CurvePoint& P, std::int64_t n, const CurvePoint& Q) {
  CurvePoint acc = CurvePoint::at_infinity();
  for (std::int64_t k = 0; k < n; ++k) {
    if (acc == Q) return true;
    acc = E.add(acc, P);
  }
  return false;
}

}  // namespace detail

/// Weil pairing e_n(P, Q) in mu_n of F_p, via Miller's algorithm:
/// e_n(P,Q) = (-1)^n f_{n,P}(Q) / f_{n,Q}(P).
inline std::int64_t weil_pairing(const EllipticCurve& E, std::int64_t n, const CurvePoint& P, const CurvePoint& Q) {
  if (n < 1) throw ValidationError("weil_pairing requires n >= 1");
  if (!E.contains(P) || !E.contains(Q)) throw ValidationError("weil_pairing: point not on " + E.to_string());
  if (!E.mul(n, P).infinity || !E.mul(n, Q).infinity)
    throw ValidationError("weil_pairing: point is not " + std::to_string(n) + "-torsion");
  if ((E.field().p() - 1) % n != 0)
    throw ValidationError("weil_pairing: mu_" + std::to_string(n) + " is not rational over F_" +
                          std::to_string(E.field().p()));
  if (P.infinity || Q.infinity) return 1;
  if (detail::in_cyclic_span(E, P, n, Q) || detail::in_cyclic_span(E, Q, n, P)) return 1;
  const auto& F = E.field();
  std::int64_t r = F.mul(detail::miller(E, n, P, Q), F.inv(detail::miller(E, n, Q, P)));
  return n % 2 ? F.neg(r) : r;
}

}  // namespace motivecalc
