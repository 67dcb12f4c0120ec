#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "motivecalc/desk_group.hpp"

namespace motivecalc {

using Law3 = std::function<Elem(const Elem&, const Elem&, const Elem&)>;
using Table2 = std::function<Elem(const Elem&, const Elem&)>;

/// Biextension of (P, Q) by G as a normalized symmetric cocycle pair.
/// phi(p1, p2; q) is the first-law cocycle, psi(p; q1, q2) the second.
struct BiextCocycle {
  DeskGroup P, Q, G;
  Law3 phi;
  Law3 psi;

  static BiextCocycle zero(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G) {
    auto z = [G](const Elem&, const Elem&, const Elem&) { return G.zero(); };
    return {P, Q, G, z, z};
  }
};

/// Biadditive section up to the cocycles:
/// phi(p1,p2;q) = tau(p1,q) + tau(p2,q) - tau(p1+p2,q), and likewise for psi.
struct Trivialization {
  Table2 tau;
};

struct Failure {
  std::string identity;
  std::vector<std::vector<Elem>> witnesses;  // lexicographic, capped
  std::size_t count = 0;
};

inline std::string witness_to_string(const std::vector<Elem>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += w[i].size() == 1 ? std::to_string(w[i][0]) : elem_to_string(w[i]);
  }
  return s + ")";
}

struct VerificationReport {
  std::vector<Failure> failures;

  bool ok() const { return failures.empty(); }

  const Failure* find(const std::string& identity) const {
    for (const auto& f : failures)
      if (f.identity == identity) return &f;
    return nullptr;
  }

  void merge(const VerificationReport& other, const std::string& prefix = {}) {
    for (auto f : other.failures) {
      f.identity = prefix + f.identity;
      failures.push_back(std::move(f));
    }
  }

  std::string to_string() const {
    if (ok()) return "valid";
    std::string s;
    for (const auto& f : failures) {
      s += f.identity + ": " + std::to_string(f.count) + " failure(s), first at " + witness_to_string(f.witnesses.front()) + "\n";
    }
    return s;
  }
};

namespace detail {

constexpr std::size_t kMaxWitnesses = 16;

class FailureCollector {
 public:
  void fail(const std::string& identity, std::vector<Elem> w) {
    auto it = std::find_if(out_.failures.begin(), out_.failures.end(), [&](const Failure& f) { return f.identity == identity; });
    if (it == out_.failures.end()) {
      out_.failures.push_back({identity, {}, 0});
      it = out_.failures.end() - 1;
    }
    ++it->count;
    it->witnesses.push_back(std::move(w));
    std::sort(it->witnesses.begin(), it->witnesses.end());
    if (it->witnesses.size() > kMaxWitnesses) it->witnesses.pop_back();
  }
  VerificationReport take() { return std::move(out_); }

 private:
  VerificationReport out_;
};

}  // namespace detail

/// Elements an identity is checked on: everything for small finite groups,
/// otherwise zero, generators, their negatives and pairwise sums, plus one
/// random combination.
inline std::vector<Elem> test_elements(const DeskGroup& G, std::uint32_t seed = 11, std::int64_t exhaustive_limit = 16) {
  if (G.is_finite() && G.order() <= exhaustive_limit) return G.elements();
  std::vector<Elem> out{G.zero()};
  auto gens = G.generators();
  for (const auto& g : gens) {
    out.push_back(g);
    out.push_back(G.neg(g));
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) out.push_back(G.add(gens[i], gens[j]));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> c(-3, 3);
  Elem r = G.zero();
  for (const auto& g : gens) r = G.add(r, G.mul(c(rng), g));
  out.push_back(r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline VerificationReport verify_biext_cocycle(const BiextCocycle& b) {
  if (!b.phi || !b.psi) throw ValidationError("table domain mismatch: missing cocycle table");
  const auto& P = b.P;
  const auto& Q = b.Q;
  const auto& G = b.G;
  const auto ps = test_elements(P, 11);
  const auto qs = test_elements(Q, 13);
  const Elem zp = P.zero(), zq = Q.zero(), zg = G.zero();
  detail::FailureCollector out;
  auto in_G = [&](const Elem& v) {
    if (!G.contains(v)) throw ValidationError("table domain mismatch: value " + elem_to_string(v) + " is not in " + G.describe());
    return v;
  };
  for (const auto& p : ps)
    for (const auto& q : qs) {
      if (in_G(b.phi(zp, p, q)) != zg) out.fail("normalization(phi)", {zp, p, q});
      if (in_G(b.psi(p, zq, q)) != zg) out.fail("normalization(psi)", {p, zq, q});
    }
  for (const auto& p1 : ps)
    for (const auto& p2 : ps)
      for (const auto& q : qs)
        if (b.phi(p1, p2, q) != b.phi(p2, p1, q)) out.fail("symmetry(phi)", {p1, p2, q});
  for (const auto& p : ps)
    for (const auto& q1 : qs)
      for (const auto& q2 : qs)
        if (b.psi(p, q1, q2) != b.psi(p, q2, q1)) out.fail("symmetry(psi)", {p, q1, q2});
  for (const auto& x : ps)
    for (const auto& y : ps)
      for (const auto& w : ps)
        for (const auto& q : qs) {
          Elem l = G.add(b.phi(x, y, q), b.phi(P.add(x, y), w, q));
          Elem r = G.add(b.phi(y, w, q), b.phi(x, P.add(y, w), q));
          if (l != r) out.fail("cocycle(phi)", {x, y, w, q});
        }
  for (const auto& p : ps)
    for (const auto& x : qs)
      for (const auto& y : qs)
        for (const auto& w : qs) {
          Elem l = G.add(b.psi(p, x, y), b.psi(p, Q.add(x, y), w));
          Elem r = G.add(b.psi(p, y, w), b.psi(p, x, Q.add(y, w)));
          if (l != r) out.fail("cocycle(psi)", {p, x, y, w});
        }
  for (const auto& p1 : ps)
    for (const auto& p2 : ps)
      for (const auto& q1 : qs)
        for (const auto& q2 : qs) {
          Elem l = G.add(G.add(b.phi(p1, p2, q1), b.phi(p1, p2, q2)), b.psi(P.add(p1, p2), q1, q2));
          Elem r = G.add(G.add(b.psi(p1, q1, q2), b.psi(p2, q1, q2)), b.phi(p1, p2, Q.add(q1, q2)));
          if (l != r) out.fail("interchange", {p1, p2, q1, q2});
        }
  return out.take();
}

/// Checks that delta(tau) equals the cocycle pair.
inline VerificationReport verify_trivialization(const BiextCocycle& b, const Trivialization& t) {
  const auto& P = b.P;
  const auto& Q = b.Q;
  const auto& G = b.G;
  const auto ps = test_elements(P, 17);
  const auto qs = test_elements(Q, 19);
  detail::FailureCollector out;
  for (const auto& p1 : ps)
    for (const auto& p2 : ps)
      for (const auto& q : qs) {
        Elem d = G.sub(G.add(t.tau(p1, q), t.tau(p2, q)), t.tau(P.add(p1, p2), q));
        if (d != b.phi(p1, p2, q)) out.fail("first law", {p1, p2, q});
      }
  for (const auto& p : ps)
    for (const auto& q1 : qs)
      for (const auto& q2 : qs) {
        Elem d = G.sub(G.add(t.tau(p, q1), t.tau(p, q2)), t.tau(p, Q.add(q1, q2)));
        if (d != b.psi(p, q1, q2)) out.fail("second law", {p, q1, q2});
      }
  return out.take();
}

/// Coboundary of h: P x Q -> G.
inline BiextCocycle coboundary(const DeskGroup& P, const DeskGroup& Q, const DeskGroup& G, const Table2& h) {
  return {P, Q, G,
          [P, G, h](const Elem& p1, const Elem& p2, const Elem& q) {
            return G.sub(G.add(h(p1, q), h(p2, q)), h(P.add(p1, p2), q));
          },
          [Q, G, h](const Elem& p, const Elem& q1, const Elem& q2) {
            return G.sub(G.add(h(p, q1), h(p, q2)), h(p, Q.add(q1, q2)));
          }};
}

/// (f, g)^* b for homomorphisms f: P' -> P and g: Q' -> Q.
inline BiextCocycle pullback(const BiextCocycle& b, const GroupHom& f, const GroupHom& g) {
  return {f.source, g.source,
          b.G,
          [b, f, g](const Elem& p1, const Elem& p2, const Elem& q) { return b.phi(f(p1), f(p2), g(q)); },
          [b, f, g](const Elem& p, const Elem& q1, const Elem& q2) { return b.psi(f(p), g(q1), g(q2)); }};
}

/// h_* b for a homomorphism h: G -> G'.
inline BiextCocycle pushforward(const BiextCocycle& b, const GroupHom& h) {
  return {b.P, b.Q, h.target,
          [b, h](const Elem& p1, const Elem& p2, const Elem& q) { return h(b.phi(p1, p2, q)); },
          [b, h](const Elem& p, const Elem& q1, const Elem& q2) { return h(b.psi(p, q1, q2)); }};
}

inline Trivialization pullback(const Trivialization& t, const GroupHom& f, const GroupHom& g) {
  return {[t, f, g](const Elem& p, const Elem& q) { return t.tau(f(p), g(q)); }};
}

/// Baer sum of cocycle pairs over the same (P, Q, G).
inline BiextCocycle baer_sum(const BiextCocycle& a, const BiextCocycle& b) {
  if (!(a.P.describe() == b.P.describe() && a.Q.describe() == b.Q.describe() && a.G.describe() == b.G.describe()))
    throw ValidationError("Baer sum of biextensions over different groups");
  const auto& G = a.G;
  return {a.P, a.Q, G,
          [a, b, G](const Elem& p1, const Elem& p2, const Elem& q) { return G.add(a.phi(p1, p2, q), b.phi(p1, p2, q)); },
          [a, b, G](const Elem& p, const Elem& q1, const Elem& q2) { return G.add(a.psi(p, q1, q2), b.psi(p, q1, q2)); }};
}

inline BiextCocycle baer_inverse(const BiextCocycle& a) {
  const auto& G = a.G;
  return {a.P, a.Q, G, [a, G](const Elem& p1, const Elem& p2, const Elem& q) { return G.neg(a.phi(p1, p2, q)); },
          [a, G](const Elem& p, const Elem& q1, const Elem& q2) { return G.neg(a.psi(p, q1, q2)); }};
}

/// Additive path extension: value at `target` of a map f on Z^k with
/// f(c + s) = f(c) + f(s) - coc(c, s), from its values on basis vectors.
inline Elem extend_additively(const DeskGroup& G, const IntVector& target, const std::function<Elem(std::size_t)>& basis_value,
                              const std::function<Elem(const IntVector&, const IntVector&)>& coc) {
  IntVector cur(target.size(), 0);
  Elem val = G.zero();
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target[k] == 0) continue;
    IntVector e(target.size(), 0), s(target.size(), 0);
    e[k] = 1;
    const std::int64_t sign = target[k] > 0 ? 1 : -1;
    s[k] = sign;
    Elem fs = basis_value(k);
    if (sign < 0) {
      IntVector me(target.size(), 0);
      me[k] = -1;
      // 0 = f(e) + f(-e) - coc(e, -e)
      fs = G.sub(coc(e, me), fs);
    }
    for (std::int64_t t = 0; t < sign * target[k]; ++t) {
      val = G.sub(G.add(val, fs), coc(cur, s));
      cur[k] += sign;
    }
  }
  return val;
}

/// Trivialization of a cocycle pair over lattices P = Z^r, Q = Z^s with the
/// given values on basis pairs, built by path induction in q then in p.
inline Trivialization lattice_trivialization(const BiextCocycle& b, std::function<Elem(std::size_t, std::size_t)> anchor) {
  if (b.P.kind() != "lattice" || b.Q.kind() != "lattice")
    throw ValidationError("lattice trivialization needs lattice factors");
  return {[b, anchor](const Elem& p, const Elem& q) {
    const std::size_t r = p.size();
    auto row = [&](std::size_t i) {
      Elem ei(r, 0);
      ei[i] = 1;
      return extend_additively(
          b.G, q, [&](std::size_t j) { return anchor(i, j); },
          [&](const IntVector& c, const IntVector& s) { return b.psi(ei, c, s); });
    };
    return extend_additively(b.G, p, row, [&](const IntVector& c, const IntVector& s) { return b.phi(c, s, q); });
  }};
}

}  // namespace motivecalc
