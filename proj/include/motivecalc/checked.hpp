#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace motivecalc {

/// Raised whenever an exact integer operation leaves the int64 range.
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// Raised when an input exceeds what the desk-scale algorithms accept.
class DeskLimitError : public std::runtime_error {
 public:
  explicit DeskLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed or inconsistent mathematical input.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

}  // namespace checked

/// Non-negative residue of a modulo m (m > 0).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Floor division for m > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  std::int64_t q = a / m;
  if ((a % m) != 0 && (a < 0)) --q;
  return q;
}

struct ExtendedGcd {
  std::int64_t g;  // gcd, non-negative
  std::int64_t x;  // a*x + b*y == g
  std::int64_t y;
};

inline ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = checked::sub(old_r, checked::mul(q, r));
    old_r = r;
    r = tmp;
    tmp = checked::sub(old_s, checked::mul(q, s));
    old_s = s;
    s = tmp;
    tmp = checked::sub(old_t, checked::mul(q, t));
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline std::int64_t pow_mod(std::int64_t base, std::int64_t e, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod(base, m);
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

/// Inverse of a modulo m, throws if a is not a unit.
inline std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  auto e = extended_gcd(mod(a, m), m);
  if (e.g != 1) throw ValidationError("element " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod(e.x, m);
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace motivecalc
