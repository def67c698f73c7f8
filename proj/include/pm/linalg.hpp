#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pm/dense.hpp"

namespace pm {
namespace detail {

/// Clears denominators row by row (each row scaled by the positive lcm of its
/// denominators). Row scaling preserves rank, row space, and the solution set
/// of a linear system, so downstream elimination can stay in integers.
inline IntMatrix integerize_rows(const RatMatrix& a) {
  IntMatrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Integer scale = 1;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      scale = boost::multiprecision::lcm(scale, denominator(a(r, c)));
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out(r, c) = numerator(a(r, c)) * (scale / denominator(a(r, c)));
  }
  return out;
}

struct Echelon {
  IntMatrix mat;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Fraction-free (Bareiss) forward elimination restricted to the first
/// `coeff_cols` columns; trailing columns ride along as right-hand sides.
/// All divisions are exact, which keeps intermediate integers polynomially
/// bounded. Pivot choice is the lowest-index nonzero row, so the result is
/// deterministic.
inline Echelon bareiss_echelon(IntMatrix b, int coeff_cols) {
  Echelon e;
  const int rows = static_cast<int>(b.rows());
  const int cols = static_cast<int>(b.cols());
  int rank = 0;
  Integer prev = 1;
  for (int col = 0; col < coeff_cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (b(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank) b.row(piv).swap(b.row(rank));
    for (int r = rank + 1; r < rows; ++r) {
      for (int c = col + 1; c < cols; ++c)
        b(r, c) = (b(r, c) * b(rank, col) - b(r, col) * b(rank, c)) / prev;
      b(r, col) = 0;
    }
    prev = b(rank, col);
    e.pivot_cols.push_back(col);
    ++rank;
  }
  e.mat = std::move(b);
  return e;
}

}  // namespace detail

/// Exact rank over the rationals.
inline int matrix_rank(const RatMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return detail::bareiss_echelon(detail::integerize_rows(a), static_cast<int>(a.cols())).rank();
}

/// Solves A x = b exactly. Returns nullopt when the system is inconsistent;
/// otherwise one solution with all free variables set to zero (deterministic).
inline std::optional<RatVector> solve_linear(const RatMatrix& a, const RatVector& b) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  RatMatrix aug(rows, cols + 1);
  aug.leftCols(cols) = a;
  aug.col(cols) = b;
  auto ech = detail::bareiss_echelon(detail::integerize_rows(aug), cols);
  for (int r = ech.rank(); r < rows; ++r)
    if (ech.mat(r, cols) != 0) return std::nullopt;
  RatVector x = RatVector::Zero(cols);
  for (int k = ech.rank() - 1; k >= 0; --k) {
    const int pc = ech.pivot_cols[static_cast<std::size_t>(k)];
    Rational acc(ech.mat(k, cols));
    for (int c = pc + 1; c < cols; ++c)
      if (!(x(c) == 0) && ech.mat(k, c) != 0) acc -= Rational(ech.mat(k, c)) * x(c);
    x(pc) = acc / Rational(ech.mat(k, pc));
  }
  return x;
}

struct RowSpaceResult {
  bool member = false;
  std::optional<RatVector> certificate;  // c with c^T M = v^T, length rows(M)
};

/// Membership of v in the row space of m, i.e. rank(m) == rank(m with v
/// appended). Solved as m^T c = v; a successful back-substitution is the
/// certificate.
inline RowSpaceResult in_row_space(const RatMatrix& m, const RatVector& v) {
  RowSpaceResult res;
  auto c = solve_linear(m.transpose(), v);
  res.member = c.has_value();
  res.certificate = std::move(c);
  return res;
}

}  // namespace pm
