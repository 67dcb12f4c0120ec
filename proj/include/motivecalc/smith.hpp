#pragma once

#include <cstdlib>
#include <optional>
#include <vector>

#include "motivecalc/matrix.hpp"

namespace motivecalc {

/// Result of a Smith normal form reduction: U * input * V == D.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inv;
  IntMatrix V_inv;
  /// Non-zero diagonal entries d1 | d2 | ... (all positive).
  IntVector diagonal;

  std::size_t rank() const { return diagonal.size(); }
};

namespace detail {

// Tracks a row operation on D together with U and U^{-1}.
struct SmithState {
  IntMatrix D, U, V, U_inv, V_inv;

  void row_add(std::size_t dst, std::size_t src, std::int64_t q) {
    D.add_row_multiple(dst, src, q);
    U.add_row_multiple(dst, src, q);
    U_inv.add_col_multiple(src, dst, checked::neg(q));
  }
  void col_add(std::size_t dst, std::size_t src, std::int64_t q) {
    D.add_col_multiple(dst, src, q);
    V.add_col_multiple(dst, src, q);
    V_inv.add_row_multiple(src, dst, checked::neg(q));
  }
  void row_swap(std::size_t a, std::size_t b) {
    D.swap_rows(a, b);
    U.swap_rows(a, b);
    U_inv.swap_cols(a, b);
  }
  void col_swap(std::size_t a, std::size_t b) {
    D.swap_cols(a, b);
    V.swap_cols(a, b);
    V_inv.swap_rows(a, b);
  }
  void row_negate(std::size_t r) {
    D.negate_row(r);
    U.negate_row(r);
    U_inv.negate_col(r);
  }
};

}  // namespace detail

/// Smith normal form over Z with smallest-absolute-value pivoting.
///
/// All arithmetic is checked; an OverflowError escapes if coefficients
/// leave the int64 range.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  detail::SmithState s{m, IntMatrix::identity(rows), IntMatrix::identity(cols), IntMatrix::identity(rows),
                       IntMatrix::identity(cols)};
  IntVector diag;
  const std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    bool found_any = false;
    while (true) {
      // Smallest non-zero absolute value in the trailing block.
      std::size_t pr = 0, pc = 0;
      std::int64_t best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          std::int64_t v = std::llabs(s.D(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (best == 0) break;
      found_any = true;
      s.row_swap(t, pr);
      s.col_swap(t, pc);
      const std::int64_t pivot = s.D(t, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (s.D(i, t) == 0) continue;
        s.row_add(i, t, checked::neg(s.D(i, t) / pivot));
        if (s.D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (s.D(t, j) == 0) continue;
        s.col_add(j, t, checked::neg(s.D(t, j) / pivot));
        if (s.D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into the pivot row and retry.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (s.D(i, j) % pivot != 0) {
            s.row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (!found_any) break;
    if (s.D(t, t) < 0) s.row_negate(t);
    diag.push_back(s.D(t, t));
  }
  return SmithForm{std::move(s.U), std::move(s.D), std::move(s.V), std::move(s.U_inv), std::move(s.V_inv),
                   std::move(diag)};
}

}  // namespace motivecalc
